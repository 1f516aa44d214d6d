#include "cqa/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "json.hpp"

namespace cqa {

namespace {

std::string show(const Query& q) { return q.empty() ? "{}" : q.to_string(); }

void collect_texts(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) return;
    if (t.const_kind() == ConstKind::Couple) {
        collect_texts(t.couple_left(), out);
        collect_texts(t.couple_right(), out);
        return;
    }
    out.insert(t.text());
}

void require_simplifiable(const Query& q) {
    const std::string* relation = nullptr;
    for (const Atom& a : q.atoms()) {
        if (relation == nullptr) {
            relation = &a.relation.name;
        } else if (*relation != a.relation.name) {
            throw PreconditionError("simplify requires a query over a single relation; found " +
                                    *relation + " and " + a.relation.name);
        }
        if (a.key.front().is_variable()) {
            throw PreconditionError("first key position of " + a.to_string() +
                                    " must be a constant");
        }
    }
}

bool constant_key(const Atom& a) {
    return std::all_of(a.key.begin(), a.key.end(),
                       [](const Term& t) { return t.is_constant(); });
}

std::optional<Witness> witness_on_simplified(const Query& s) {
    std::vector<Atom> complex = complex_part(s);
    auto is_complex = [&](const Atom& a) {
        return std::find(complex.begin(), complex.end(), a) != complex.end();
    };
    IntersectionGraph graph = intersection_graph(s);
    const std::vector<Atom>& atoms = s.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].key.size() < 2 || !atoms[i].key[1].is_variable()) continue;
        if (!is_complex(atoms[i])) continue;
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            if (atoms[j].key.size() < 2 || !atoms[j].key[1].is_variable()) continue;
            if (atoms[j].key[1] == atoms[i].key[1]) continue;
            if (!is_complex(atoms[j])) continue;
            if (!graph.path_connected(i, j)) continue;
            return Witness{atoms[i], atoms[j]};
        }
    }
    return std::nullopt;
}

}  // namespace

std::string_view verdict_token(Verdict v) {
    switch (v) {
        case Verdict::FP: return "FP";
        case Verdict::SharpPHard: return "SharpPHard";
        case Verdict::TriviallyZero: return "TriviallyZero";
    }
    return "FP";
}

std::string_view verdict_json(Verdict v) {
    switch (v) {
        case Verdict::FP: return "fp";
        case Verdict::SharpPHard: return "sharp-p-hard";
        case Verdict::TriviallyZero: return "trivially-zero";
    }
    return "fp";
}

SimplifyTrace simplify_traced(const Query& q) {
    require_simplifiable(q);

    std::set<std::string> used;
    for (const Atom& a : q.atoms()) {
        for (const Term& t : a.terms()) collect_texts(t, used);
    }
    std::size_t counter = 0;
    auto fresh_constant = [&]() {
        std::string candidate;
        do {
            candidate = "c#" + std::to_string(++counter);
        } while (used.count(candidate) > 0);
        used.insert(candidate);
        return Term::sym(candidate);
    };

    struct Tagged {
        Atom atom;
        std::size_t origin;
    };
    std::vector<Tagged> state;
    state.reserve(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) state.push_back({q.atoms()[i], i});
    auto resort = [&]() {
        std::sort(state.begin(), state.end(),
                  [](const Tagged& l, const Tagged& r) { return l.atom < r.atom; });
    };
    auto snapshot = [&]() {
        std::vector<Atom> atoms;
        atoms.reserve(state.size());
        for (const Tagged& t : state) atoms.push_back(t.atom);
        return Query::of(std::move(atoms), q.schema());
    };

    SimplifyTrace trace;
    for (;;) {
        resort();
        const Tagged* chosen = nullptr;
        std::size_t position = 0;
        for (const Tagged& t : state) {
            if (!constant_key(t.atom)) continue;
            for (std::size_t p = 0; p < t.atom.nonkey.size(); ++p) {
                if (t.atom.nonkey[p].is_variable()) {
                    chosen = &t;
                    position = p;
                    break;
                }
            }
            if (chosen != nullptr) break;
        }
        if (chosen == nullptr) break;

        GroundingStep step{chosen->atom,
                           chosen->origin,
                           position,
                           chosen->atom.nonkey[position].text(),
                           fresh_constant(),
                           Query{}};

        Substitution ground;
        ground.bind(step.variable, step.replacement);
        for (Tagged& t : state) t.atom = ground.apply(t.atom);

        step.after = snapshot();
        trace.steps.push_back(std::move(step));
    }

    trace.result = snapshot();
    std::sort(state.begin(), state.end(),
              [](const Tagged& l, const Tagged& r) { return l.origin < r.origin; });
    for (const Tagged& t : state) {
        trace.correspondence.emplace_back(q.atoms()[t.origin], t.atom);
    }
    return trace;
}

Query simplify(const Query& q) { return simplify_traced(q).result; }

std::vector<Atom> simplified_shape_violations(const Query& simplified) {
    std::vector<Atom> out;
    for (const Atom& a : simplified.atoms()) {
        bool variable_second_key = a.key.size() >= 2 && a.key[1].is_variable();
        bool variable_nonkey = std::any_of(a.nonkey.begin(), a.nonkey.end(),
                                           [](const Term& t) { return t.is_variable(); });
        if (variable_second_key && variable_nonkey) out.push_back(a);
    }
    return out;
}

std::optional<Witness> hardness_witness(const Query& q) {
    return witness_on_simplified(simplify(q));
}

bool is_easy(const Query& q) { return !hardness_witness(q).has_value(); }

Classification classify_skbcq(const Query& q, const Schema& schema,
                              const MinimizeOptions& options) {
    Schema merged = schema;
    merged.merge(q.schema());
    for (const auto& entry : merged.relations()) {
        if (!entry.second.simple_key()) {
            throw PreconditionError("relation " + entry.second.name + " has " +
                                    std::to_string(entry.second.key_arity) +
                                    " key positions; classification needs one key position per "
                                    "relation");
        }
    }

    Classification c;
    c.input = q;
    ChaseResult chased = key_chase(q);
    if (!chased.satisfiable()) {
        c.verdict = Verdict::TriviallyZero;
        return c;
    }
    c.chased = *chased.query;
    c.minimized = minimize(*chased.query, options);
    EncodingContext ctx(merged);
    c.encoded = new_encode(*c.minimized, ctx);
    Query simplified = simplify(*c.encoded);
    c.simplified = simplified;
    c.witness = witness_on_simplified(simplified);
    c.verdict = c.witness ? Verdict::SharpPHard : Verdict::FP;
    for (const Atom& a : simplified_shape_violations(simplified)) {
        c.advisory.push_back("simplified atom " + a.to_string() +
                             " keeps a variable second key position next to a variable non-key "
                             "position");
    }
    return c;
}

Classification classify_skbcq(const Query& q, const MinimizeOptions& options) {
    return classify_skbcq(q, q.schema(), options);
}

std::string report_text(const Classification& c) {
    std::string out(verdict_token(c.verdict));
    out += '\n';
    out += "  key_chase: " + (c.chased ? show(*c.chased) : std::string("unsatisfiable")) + "\n";
    if (c.minimized) out += "  minimize: " + show(*c.minimized) + "\n";
    if (c.encoded) out += "  new_encode: " + show(*c.encoded) + "\n";
    if (c.simplified) out += "  simplify: " + show(*c.simplified) + "\n";
    if (c.witness) {
        out += "  witness.first: " + c.witness->first.to_string() + "\n";
        out += "  witness.second: " + c.witness->second.to_string() + "\n";
    }
    for (const std::string& note : c.advisory) out += "  advisory: " + note + "\n";
    return out;
}

std::string report_json(const Classification& c) {
    using json = nlohmann::ordered_json;
    json trace = json::array();
    {
        json step;
        step["step"] = "key_chase";
        step["satisfiable"] = c.chased.has_value();
        if (c.chased) {
            step["result"] = show(*c.chased);
        } else {
            step["result"] = nullptr;
        }
        trace.push_back(std::move(step));
    }
    auto add_step = [&](const char* name, const std::optional<Query>& value) {
        if (!value) return;
        json step;
        step["step"] = name;
        step["result"] = show(*value);
        trace.push_back(std::move(step));
    };
    add_step("minimize", c.minimized);
    add_step("new_encode", c.encoded);
    add_step("simplify", c.simplified);
    if (c.witness) {
        json step;
        step["step"] = "witness";
        step["first"] = c.witness->first.to_string();
        step["second"] = c.witness->second.to_string();
        trace.push_back(std::move(step));
    }
    if (!c.advisory.empty()) {
        json step;
        step["step"] = "advisory";
        step["notes"] = c.advisory;
        trace.push_back(std::move(step));
    }

    json out;
    out["verdict"] = std::string(verdict_json(c.verdict));
    out["trace"] = std::move(trace);
    out["query"] = show(c.input);
    if (c.encoded) {
        out["encoded_query"] = show(*c.encoded);
    } else {
        out["encoded_query"] = nullptr;
    }
    return out.dump(2);
}

Se3Trace demonstrate_se3(const Query& q, const Schema& schema, const MinimizeOptions& options) {
    Se3Trace t;
    t.classification = classify_skbcq(q, schema, options);
    if (!t.classification.minimized) return t;

    const Query& qm = *t.classification.minimized;
    SelfJoinFreeRewrite rewrite = selfjoinfree_rewrite(qm);
    t.rewritten = rewrite.rewritten;

    std::map<Atom, Atom> to_rewrite;
    for (const auto& entry : rewrite.origin) to_rewrite.emplace(entry.second, entry.first);

    auto decode = [&](const Atom& e) {
        const RelationSymbol* rel = qm.schema().find(e.key.front().text());
        std::vector<Term> key(e.key.begin() + 1, e.key.begin() + 1 + rel->key_arity);
        std::vector<Term> nonkey(e.nonkey.begin(), e.nonkey.begin() + rel->nonkey_arity);
        return Atom::of(*rel, std::move(key), std::move(nonkey));
    };

    SimplifyTrace simplification = simplify_traced(*t.classification.encoded);
    std::set<std::string> source_variables = qm.variables();
    const std::vector<Atom>& encoded_atoms = t.classification.encoded->atoms();
    for (const GroundingStep& g : simplification.steps) {
        Se3Step step{g.trigger, g.variable, g.replacement, std::nullopt};
        if (source_variables.count(g.variable) > 0) {
            step.rewrite_atom = to_rewrite.at(decode(encoded_atoms[g.trigger_origin]));
        }
        t.steps.push_back(std::move(step));
    }

    if (t.classification.witness) {
        auto original_form = [&](const Atom& final_form) -> const Atom& {
            for (const auto& pair : simplification.correspondence) {
                if (pair.second == final_form) return pair.first;
            }
            throw PreconditionError("witness atom missing from the simplification trace");
        };
        t.rewritten_witness =
            Witness{to_rewrite.at(decode(original_form(t.classification.witness->first))),
                    to_rewrite.at(decode(original_form(t.classification.witness->second)))};
    }
    return t;
}

Se3Trace demonstrate_se3(const Query& q, const MinimizeOptions& options) {
    return demonstrate_se3(q, q.schema(), options);
}

std::string report_text(const Se3Trace& t) {
    std::string out = report_text(t.classification);
    if (!t.rewritten) {
        out += "  rewrite: none\n";
        return out;
    }
    out += "  rewrite: " + show(*t.rewritten) + "\n";
    if (t.steps.empty()) {
        out += "  grounding steps: none\n";
    }
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const Se3Step& s = t.steps[i];
        out += "  step " + std::to_string(i + 1) + ": " + s.trigger.to_string() + " grounds " +
               s.variable + " -> " + s.replacement.to_string();
        if (s.rewrite_atom) {
            out += "; fires on " + s.rewrite_atom->to_string();
        } else {
            out += "; padding variable, no rewrite counterpart";
        }
        out += "\n";
    }
    if (t.rewritten_witness) {
        out += "  witness in rewrite: " + t.rewritten_witness->first.to_string() + ", " +
               t.rewritten_witness->second.to_string() + "\n";
    } else if (t.classification.verdict == Verdict::FP) {
        out += "  note: easy\n";
    }
    return out;
}

std::string demo_flaw_report() {
    RelationSymbol r{"R", 1, 1};
    RelationSymbol s{"S", 1, 0};
    Query q0 = Query::of(
        {Atom::of(r, {Term::var("x")}, {Term::var("y")}), Atom::of(s, {Term::var("y")}, {})},
        Schema{r, s});

    EncodingContext ctx(q0.schema());
    Query zero_padded = old_encode(q0, ctx);
    Query fresh_padded = new_encode(q0, ctx);

    const RelationSymbol& n = ctx.n_symbol();
    Database db0 = Database::of(
        {Fact::of(n, {Term::rel_name("R"), Term::sym("b")}, {Term::sym("c")}),
         Fact::of(n, {Term::rel_name("S"), Term::sym("c")}, {Term::sym("0")}),
         Fact::of(n, {Term::rel_name("S"), Term::sym("c")}, {Term::sym("1")})},
        Schema{n});
    Preimage preimage = invert_old_encode(db0, ctx);

    auto join_atoms = [](const std::vector<Atom>& atoms) {
        std::string text;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i > 0) text += ", ";
            text += atoms[i].to_string();
        }
        return text.empty() ? std::string("none") : text;
    };
    std::string facts_line;
    for (std::size_t i = 0; i < db0.facts().size(); ++i) {
        if (i > 0) facts_line += ", ";
        facts_line += db0.facts()[i].to_string();
    }

    std::string out;
    out += "query q0: " + q0.to_string() + "\n";
    out += "encoding with zero padding: " + zero_padded.to_string() + "\n";
    out += "encoding with fresh padding: " + fresh_padded.to_string() + "\n";
    out += "database db0: " + facts_line + "\n";
    if (preimage.found()) {
        out += "preimage of db0 under the zero-padded fact map: " +
               preimage.database->to_string() + "\n";
    } else {
        out += "preimage of db0 under the zero-padded fact map: NoPreimage: " +
               preimage.witness->to_string() + "\n";
        out += "  a zero-padded image fills every padding position with 0, so no database maps "
               "to this fact\n";
    }
    out += "complex part with zero padding: " + join_atoms(complex_part(zero_padded)) + "\n";
    out += "complex part with fresh padding: " + join_atoms(complex_part(fresh_padded)) + "\n";

    bool zero_hard = !is_easy(zero_padded);
    Classification verdict = classify_skbcq(q0, q0.schema());
    out += "old encoding: " + std::string(zero_hard ? "#P-hard" : "FP") +
           "; query: " + std::string(verdict_token(verdict.verdict)) + "\n";
    return out;
}

}  // namespace cqa
