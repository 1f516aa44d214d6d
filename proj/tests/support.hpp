#pragma once

// Test-side helpers: brute-force oracles kept deliberately independent of the
// library's search code, a small random instance generator, and a subprocess
// runner for the CLI tests.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cqa/model.hpp"

namespace cqa::test {

// Every total map vars(q) -> terms(q) whose atom image lands inside q,
// canonicalized as "x->t x2->u ..." strings.
inline std::set<std::string> endomorphisms_brute(const Query& q) {
    std::set<std::string> var_set = q.variables();
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::vector<Term> terms;
    {
        std::set<std::string> seen;
        for (const Atom& a : q.atoms()) {
            std::vector<Term> all(a.key.begin(), a.key.end());
            all.insert(all.end(), a.nonkey.begin(), a.nonkey.end());
            for (const Term& t : all) {
                if (seen.insert(t.to_string()).second) terms.push_back(t);
            }
        }
    }
    std::set<std::string> out;
    std::vector<std::size_t> choice(vars.size(), 0);
    for (;;) {
        Substitution sigma;
        for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind(vars[i], terms[choice[i]]);
        bool inside = true;
        for (const Atom& a : q.atoms()) {
            if (!q.contains(sigma.apply(a))) {
                inside = false;
                break;
            }
        }
        if (inside) {
            std::string key;
            for (const std::string& v : vars) {
                key += v + "->" + sigma.apply(Term::var(v)).to_string() + " ";
            }
            out.insert(key);
        }
        std::size_t i = 0;
        while (i < vars.size() && ++choice[i] == terms.size()) choice[i++] = 0;
        if (i == vars.size() || vars.empty()) break;
    }
    return out;
}

inline std::string describe_endomorphism(const Query& q, const Substitution& sigma) {
    std::string key;
    for (const std::string& v : q.variables()) {
        key += v + "->" + sigma.apply(Term::var(v)).to_string() + " ";
    }
    return key;
}

// Ground-image search: q has a consistent satisfying database iff some
// valuation into (constants of q + fresh constants, one per variable) has a
// key-consistent image. Exponential; keep the inputs tiny.
inline bool consistently_satisfiable_brute(const Query& q) {
    std::set<std::string> var_set = q.variables();
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::vector<Term> pool;
    {
        std::set<std::string> seen;
        for (const Atom& a : q.atoms()) {
            std::vector<Term> all(a.key.begin(), a.key.end());
            all.insert(all.end(), a.nonkey.begin(), a.nonkey.end());
            for (const Term& t : all) {
                if (!t.is_variable() && seen.insert(t.to_string()).second) pool.push_back(t);
            }
        }
        for (std::size_t i = 0; i < vars.size(); ++i) {
            pool.push_back(Term::sym("f" + std::to_string(i + 1)));
        }
    }
    if (vars.empty()) {
        std::vector<Fact> facts;
        for (const Atom& a : q.atoms()) facts.push_back(Fact::from_atom(a));
        for (std::size_t i = 0; i < facts.size(); ++i) {
            for (std::size_t j = i + 1; j < facts.size(); ++j) {
                if (key_equal(facts[i], facts[j]) && !(facts[i] == facts[j])) return false;
            }
        }
        return true;
    }
    std::vector<std::size_t> choice(vars.size(), 0);
    for (;;) {
        Substitution sigma;
        for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind(vars[i], pool[choice[i]]);
        std::vector<Fact> facts;
        for (const Atom& a : q.atoms()) facts.push_back(Fact::from_atom(sigma.apply(a)));
        bool consistent = true;
        for (std::size_t i = 0; i < facts.size() && consistent; ++i) {
            for (std::size_t j = i + 1; j < facts.size(); ++j) {
                if (key_equal(facts[i], facts[j]) && !(facts[i] == facts[j])) {
                    consistent = false;
                    break;
                }
            }
        }
        if (consistent) return true;
        std::size_t i = 0;
        while (i < vars.size() && ++choice[i] == pool.size()) choice[i++] = 0;
        if (i == vars.size()) return false;
    }
}

// Small random instances for property tests. Separate from the library's
// verify generator on purpose.
class TestGen {
public:
    explicit TestGen(std::uint64_t seed) : gen_(seed) {}

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    Schema schema(std::size_t max_relations, bool simple_key, std::size_t max_nonkey = 2) {
        static const std::array<const char*, 3> names{"R", "S", "T"};
        Schema s;
        std::size_t count = 1 + pick(max_relations);
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t key = simple_key ? 1 : 1 + pick(2);
            s.add(RelationSymbol{names[i], key, pick(max_nonkey + 1)});
        }
        return s;
    }

    Term constant() {
        static const std::array<const char*, 4> pool{"0", "a", "b", "c"};
        return Term::sym(pool[pick(pool.size())]);
    }

    Term term(const std::vector<Term>& vars) {
        if (pick(3) < 2) return vars[pick(vars.size())];
        return constant();
    }

    Query query(const Schema& s, std::size_t max_atoms, std::size_t n_vars) {
        std::vector<RelationSymbol> rels;
        for (const auto& entry : s.relations()) rels.push_back(entry.second);
        std::vector<Term> vars;
        for (std::size_t i = 0; i < n_vars; ++i) {
            vars.push_back(Term::var("x" + std::to_string(i + 1)));
        }
        std::vector<Atom> atoms;
        std::size_t count = 1 + pick(max_atoms);
        for (std::size_t i = 0; i < count; ++i) {
            const RelationSymbol& rel = rels[pick(rels.size())];
            std::vector<Term> key, nonkey;
            for (std::size_t p = 0; p < rel.key_arity; ++p) key.push_back(term(vars));
            for (std::size_t p = 0; p < rel.nonkey_arity; ++p) nonkey.push_back(term(vars));
            atoms.push_back(Atom::of(rel, std::move(key), std::move(nonkey)));
        }
        return Query::of(std::move(atoms), s);
    }

    Database database(const Schema& s, std::size_t max_blocks, std::size_t max_block_size) {
        std::vector<RelationSymbol> rels;
        for (const auto& entry : s.relations()) rels.push_back(entry.second);
        std::vector<Fact> facts;
        std::size_t nblocks = pick(max_blocks + 1);
        for (std::size_t b = 0; b < nblocks; ++b) {
            const RelationSymbol& rel = rels[pick(rels.size())];
            std::vector<Term> key;
            for (std::size_t p = 0; p < rel.key_arity; ++p) key.push_back(constant());
            std::size_t size = 1 + pick(max_block_size);
            for (std::size_t f = 0; f < size; ++f) {
                std::vector<Term> nonkey;
                for (std::size_t p = 0; p < rel.nonkey_arity; ++p) nonkey.push_back(constant());
                facts.push_back(Fact::of(rel, key, std::move(nonkey)));
            }
        }
        return Database::of(std::move(facts), s);
    }

private:
    std::mt19937_64 gen_;
};

struct RunResult {
    int status = -1;
    std::string output;  // stdout and stderr combined
};

inline RunResult run_command(const std::string& command) {
    RunResult result;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (pipe == nullptr) return result;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        result.output.append(buffer, n);
    }
    int rc = pclose(pipe);
    if (rc >= 0 && WIFEXITED(rc)) result.status = WEXITSTATUS(rc);
    return result;
}

}  // namespace cqa::test
