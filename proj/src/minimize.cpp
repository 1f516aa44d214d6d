#include "cqa/minimize.hpp"

#include <map>
#include <set>
#include <string>

namespace cqa {

namespace {

Term resolve(Term t, const std::map<std::string, Term>& binding) {
    while (t.is_variable()) {
        auto it = binding.find(t.text());
        if (it == binding.end()) break;
        t = it->second;
    }
    return t;
}

// Flat-term unification. Variable-to-variable bindings always point the
// lexicographically greater name at the lesser one, which keeps the chase
// deterministic and the chains acyclic.
bool unify(const Term& a, const Term& b, std::map<std::string, Term>& binding) {
    Term ra = resolve(a, binding);
    Term rb = resolve(b, binding);
    if (ra == rb) return true;
    if (ra.is_variable() && rb.is_variable()) {
        if (ra.text() < rb.text()) {
            binding.emplace(rb.text(), ra);
        } else {
            binding.emplace(ra.text(), rb);
        }
        return true;
    }
    if (ra.is_variable()) {
        binding.emplace(ra.text(), rb);
        return true;
    }
    if (rb.is_variable()) {
        binding.emplace(rb.text(), ra);
        return true;
    }
    return false;
}

void check_cap(const Query& q, const MinimizeOptions& options) {
    if (q.size() > options.max_atoms) {
        throw ResourceLimitError("query has " + std::to_string(q.size()) +
                                 " atoms; the minimization cap is " +
                                 std::to_string(options.max_atoms) + " (raise max_atoms)");
    }
}

// Position-wise match of a possibly non-ground atom against another atom;
// pattern variables extend `binding`, recording new names in `undo`.
bool extend(const Atom& pattern, const Atom& target, std::map<std::string, Term>& binding,
            std::vector<std::string>& undo) {
    if (pattern.relation != target.relation) return false;
    std::size_t mark = undo.size();
    auto match_pos = [&](const Term& p, const Term& t) {
        if (p.is_constant()) return p == t;
        auto it = binding.find(p.text());
        if (it != binding.end()) return it->second == t;
        binding.emplace(p.text(), t);
        undo.push_back(p.text());
        return true;
    };
    for (std::size_t i = 0; i < pattern.key.size(); ++i) {
        if (!match_pos(pattern.key[i], target.key[i])) {
            detail::roll_back(binding, undo, mark);
            return false;
        }
    }
    for (std::size_t i = 0; i < pattern.nonkey.size(); ++i) {
        if (!match_pos(pattern.nonkey[i], target.nonkey[i])) {
            detail::roll_back(binding, undo, mark);
            return false;
        }
    }
    return true;
}

bool search_endomorphisms(const std::vector<Atom>& atoms, std::size_t next,
                          std::map<std::string, Term>& binding, std::vector<std::string>& undo,
                          const std::function<bool(const Substitution&)>& fn) {
    if (next == atoms.size()) {
        Substitution theta;
        for (const auto& entry : binding) theta.bind(entry.first, entry.second);
        return fn(theta);
    }
    for (const Atom& target : atoms) {
        std::size_t mark = undo.size();
        if (extend(atoms[next], target, binding, undo)) {
            if (!search_endomorphisms(atoms, next + 1, binding, undo, fn)) return false;
            detail::roll_back(binding, undo, mark);
        }
    }
    return true;
}

}  // namespace

ChaseResult key_chase(const Query& q) {
    Query cur = q;
    for (;;) {
        const std::vector<Atom>& atoms = cur.atoms();
        bool applied = false;
        for (std::size_t i = 0; i < atoms.size() && !applied; ++i) {
            for (std::size_t j = i + 1; j < atoms.size() && !applied; ++j) {
                if (atoms[i].relation != atoms[j].relation) continue;
                if (atoms[i].key != atoms[j].key) continue;
                std::map<std::string, Term> binding;
                for (std::size_t p = 0; p < atoms[i].nonkey.size(); ++p) {
                    if (!unify(atoms[i].nonkey[p], atoms[j].nonkey[p], binding)) {
                        return ChaseResult{std::nullopt};
                    }
                }
                Substitution sigma;
                for (const auto& entry : binding) {
                    sigma.bind(entry.first, resolve(entry.second, binding));
                }
                cur = sigma.apply(cur);
                applied = true;
            }
        }
        if (!applied) return ChaseResult{cur};
    }
}

Database freeze(const Query& q) {
    std::set<std::string> used;
    for (const Atom& a : q.atoms()) {
        for (const Term& t : a.terms()) {
            if (t.is_constant()) used.insert(t.to_string());
        }
    }
    Substitution frost;
    std::size_t counter = 1;
    for (const std::string& var : q.variables()) {
        std::string candidate;
        do {
            candidate = "c#" + std::to_string(counter++);
        } while (used.count(candidate) > 0);
        frost.bind(var, Term::sym(candidate));
    }
    std::vector<Fact> facts;
    facts.reserve(q.size());
    for (const Atom& a : q.atoms()) facts.push_back(Fact::from_atom(frost.apply(a)));
    return Database::of(std::move(facts), q.schema());
}

void for_each_endomorphism(const Query& q, const std::function<bool(const Substitution&)>& fn,
                           const MinimizeOptions& options) {
    check_cap(q, options);
    std::map<std::string, Term> binding;
    std::vector<std::string> undo;
    search_endomorphisms(q.atoms(), 0, binding, undo, fn);
}

std::vector<Substitution> endomorphisms(const Query& q, const MinimizeOptions& options) {
    std::vector<Substitution> out;
    for_each_endomorphism(
        q,
        [&](const Substitution& theta) {
            out.push_back(theta);
            return true;
        },
        options);
    return out;
}

bool is_minimal(const Query& q, const MinimizeOptions& options) {
    const std::vector<Atom>& atoms = q.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            if (atoms[i].relation == atoms[j].relation && atoms[i].key == atoms[j].key) {
                return false;
            }
        }
    }
    bool minimal = true;
    for_each_endomorphism(
        q,
        [&](const Substitution& theta) {
            if (theta.apply(q).size() < q.size()) {
                minimal = false;
                return false;
            }
            return true;
        },
        options);
    return minimal;
}

Query minimize(const Query& q, const MinimizeOptions& options) {
    ChaseResult chased = key_chase(q);
    if (!chased.satisfiable()) {
        throw PreconditionError("minimize: no consistent database satisfies the query");
    }
    Query cur = *chased.query;
    check_cap(cur, options);
    for (;;) {
        std::optional<Substitution> proper;
        for_each_endomorphism(
            cur,
            [&](const Substitution& theta) {
                if (theta.apply(cur).size() < cur.size()) {
                    proper = theta;
                    return false;
                }
                return true;
            },
            options);
        if (!proper) return cur;
        cur = proper->apply(cur);
    }
}

}  // namespace cqa
