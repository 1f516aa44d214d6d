#include "cqa/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "cqa/encode.hpp"
#include "cqa/minimize.hpp"
#include "cqa/reduce.hpp"

namespace cqa {

namespace {

constexpr const char* kRelationNames[] = {"R", "S", "T"};
constexpr const char* kConstantPool[] = {"0", "a", "b", "c"};

std::string one_line(const Database& db) {
    std::string out;
    for (std::size_t i = 0; i < db.facts().size(); ++i) {
        if (i > 0) out += ", ";
        out += db.facts()[i].to_string();
    }
    return out.empty() ? std::string("{}") : out;
}

class InstanceGenerator {
public:
    explicit InstanceGenerator(std::uint64_t seed) : gen_(seed) {}

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    Schema random_schema(const HarnessBounds& bounds, bool simple_key) {
        std::size_t count = 1 + pick(bounds.max_relations);
        Schema schema;
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t key = simple_key ? 1 : 1 + pick(2);
            schema.add(RelationSymbol{kRelationNames[i], key, pick(3)});
        }
        return schema;
    }

    Term random_constant() { return Term::sym(kConstantPool[pick(4)]); }

    Term random_term(const std::vector<Term>& vars) {
        if (pick(3) < 2) return vars[pick(vars.size())];
        return random_constant();
    }

    Query random_query(const Schema& schema, const HarnessBounds& bounds) {
        std::vector<RelationSymbol> rels;
        for (const auto& entry : schema.relations()) rels.push_back(entry.second);
        std::size_t natoms = 1 + pick(bounds.max_atoms);
        std::vector<Term> vars;
        for (std::size_t i = 0; i < natoms + bounds.extra_variables; ++i) {
            vars.push_back(Term::var("x" + std::to_string(i + 1)));
        }
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < natoms; ++i) {
            const RelationSymbol& rel = rels[pick(rels.size())];
            std::vector<Term> key, nonkey;
            for (std::size_t p = 0; p < rel.key_arity; ++p) key.push_back(random_term(vars));
            for (std::size_t p = 0; p < rel.nonkey_arity; ++p) nonkey.push_back(random_term(vars));
            atoms.push_back(Atom::of(rel, std::move(key), std::move(nonkey)));
        }
        return Query::of(std::move(atoms), schema);
    }

    Database random_database(const Schema& schema, const HarnessBounds& bounds) {
        std::vector<RelationSymbol> rels;
        for (const auto& entry : schema.relations()) rels.push_back(entry.second);
        std::vector<Fact> facts;
        std::size_t nblocks = pick(bounds.max_blocks + 1);
        for (std::size_t b = 0; b < nblocks; ++b) {
            const RelationSymbol& rel = rels[pick(rels.size())];
            std::vector<Term> key;
            for (std::size_t p = 0; p < rel.key_arity; ++p) key.push_back(random_constant());
            std::size_t size = 1 + pick(bounds.max_block_size);
            for (std::size_t f = 0; f < size; ++f) {
                std::vector<Term> nonkey;
                for (std::size_t p = 0; p < rel.nonkey_arity; ++p) {
                    nonkey.push_back(random_constant());
                }
                facts.push_back(Fact::of(rel, key, std::move(nonkey)));
            }
        }
        return Database::of(std::move(facts), schema);
    }

private:
    std::mt19937_64 gen_;
};

std::vector<std::string> repair_fingerprints(const Database& db, const RepairOptions& options) {
    std::vector<std::string> out;
    for_each_repair(
        db,
        [&](const Database& repair) {
            out.push_back(repair.to_string());
            return true;
        },
        options);
    std::sort(out.begin(), out.end());
    return out;
}

using TrialBody = std::function<void(InstanceGenerator&, const HarnessBounds&,
                                     std::vector<std::string>&, std::string&, std::string&)>;

VerifyReport run_trials(std::size_t trials, std::uint64_t seed, const HarnessBounds& bounds,
                        const TrialBody& body) {
    VerifyReport report;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        std::uint64_t trial_seed = splitmix64(seed + t);
        InstanceGenerator gen(trial_seed);
        std::vector<std::string> problems;
        std::string query_text, db_text;
        body(gen, bounds, problems, query_text, db_text);
        if (problems.empty()) {
            ++report.passed;
        } else {
            std::string message = problems.front();
            for (std::size_t i = 1; i < problems.size(); ++i) message += "; " + problems[i];
            report.failures.push_back(TrialFailure{t, trial_seed, message, query_text, db_text});
        }
    }
    return report;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string VerifyReport::summary() const {
    std::string out = std::to_string(passed) + "/" + std::to_string(trials) + " pass\n";
    for (const TrialFailure& f : failures) {
        out += "trial " + std::to_string(f.trial) + " (seed " + std::to_string(f.seed) +
               "): " + f.message + "\n";
        out += "  query: " + f.query + "\n";
        out += "  database: " + f.database + "\n";
    }
    return out;
}

VerifyReport verify_lemma2(std::size_t trials, std::uint64_t seed, const HarnessBounds& bounds) {
    RepairOptions repair_options{bounds.repair_cap};
    return run_trials(
        trials, seed, bounds,
        [&](InstanceGenerator& gen, const HarnessBounds& b, std::vector<std::string>& problems,
            std::string& query_text, std::string& db_text) {
            Schema schema = gen.random_schema(b, false);
            Query q = gen.random_query(schema, b);
            Database db = gen.random_database(schema, b);
            query_text = q.to_string();
            db_text = one_line(db);

            EncodingContext ctx(schema);
            Query encoded = new_encode(q, ctx);
            Database padded = pad_database(db, ctx);

            std::uint64_t base = count_satisfying(db, q, repair_options);
            std::uint64_t image = count_satisfying(padded, encoded, repair_options);
            if (base != image) {
                problems.push_back("count mismatch: base " + std::to_string(base) + ", image " +
                                   std::to_string(image));
            }
            if (repair_count(db, repair_options) != repair_count(padded, repair_options)) {
                problems.push_back("repair count differs between base and image");
            }
            const std::vector<Fact>& facts = db.facts();
            for (std::size_t i = 0; i < facts.size(); ++i) {
                for (std::size_t j = i + 1; j < facts.size(); ++j) {
                    bool before = key_equal(facts[i], facts[j]);
                    bool after = key_equal(pad_fact(facts[i], ctx), pad_fact(facts[j], ctx));
                    if (before != after) {
                        problems.push_back("key equality not preserved for " +
                                           facts[i].to_string() + " and " + facts[j].to_string());
                    }
                }
            }
            std::vector<std::string> image_repairs = repair_fingerprints(padded, repair_options);
            std::vector<std::string> mapped;
            for_each_repair(
                db,
                [&](const Database& r) {
                    mapped.push_back(pad_database(r, ctx).to_string());
                    return true;
                },
                repair_options);
            std::sort(mapped.begin(), mapped.end());
            if (image_repairs != mapped) {
                problems.push_back("repair sets of image and mapped repairs differ");
            }
        });
}

VerifyReport verify_lemma1(std::size_t trials, std::uint64_t seed, const HarnessBounds& bounds) {
    RepairOptions repair_options{bounds.repair_cap};
    return run_trials(
        trials, seed, bounds,
        [&](InstanceGenerator& gen, const HarnessBounds& b, std::vector<std::string>& problems,
            std::string& query_text, std::string& db_text) {
            Schema schema = gen.random_schema(b, true);
            Query q;
            bool satisfiable = false;
            for (std::size_t attempt = 0; attempt < 1000 && !satisfiable; ++attempt) {
                q = gen.random_query(schema, b);
                satisfiable = key_chase(q).satisfiable();
            }
            if (!satisfiable) {
                problems.push_back("generator failed to produce a satisfiable query");
                return;
            }
            Query qm = minimize(q);
            SelfJoinFreeRewrite rewrite = selfjoinfree_rewrite(qm);
            Database db = gen.random_database(rewrite.rewritten.schema(), b);
            query_text = qm.to_string();
            db_text = one_line(db);

            Database coupled = couple_database(db, rewrite);
            std::uint64_t base = count_satisfying(db, rewrite.rewritten, repair_options);
            std::uint64_t image = count_satisfying(coupled, qm, repair_options);
            if (base != image) {
                problems.push_back("count mismatch: rewrite " + std::to_string(base) +
                                   ", coupled " + std::to_string(image));
            }
            if (repair_count(db, repair_options) != repair_count(coupled, repair_options)) {
                problems.push_back("repair count differs between base and image");
            }

            std::map<std::string, const Atom*> atom_of;
            for (const Atom& a : rewrite.rewritten.atoms()) atom_of[a.relation.name] = &a;
            auto couple_one = [&](const Fact& f) {
                const Atom& atom = *atom_of.at(f.relation.name);
                return couple_fact(f, atom, rewrite.origin.at(atom).relation);
            };
            const std::vector<Fact>& facts = db.facts();
            for (std::size_t i = 0; i < facts.size(); ++i) {
                for (std::size_t j = i + 1; j < facts.size(); ++j) {
                    bool before = key_equal(facts[i], facts[j]);
                    bool after = key_equal(couple_one(facts[i]), couple_one(facts[j]));
                    if (before != after) {
                        problems.push_back("key equality not preserved for " +
                                           facts[i].to_string() + " and " + facts[j].to_string());
                    }
                }
            }

            std::vector<std::string> image_repairs = repair_fingerprints(coupled, repair_options);
            std::vector<std::string> mapped;
            for_each_repair(
                db,
                [&](const Database& r) {
                    mapped.push_back(couple_database(r, rewrite).to_string());
                    return true;
                },
                repair_options);
            std::sort(mapped.begin(), mapped.end());
            if (image_repairs != mapped) {
                problems.push_back("repair sets of image and mapped repairs differ");
            }
        });
}

}  // namespace cqa
