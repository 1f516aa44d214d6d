#include "cqa/reduce.hpp"

#include <map>
#include <string>

namespace cqa {

Fact pad_fact(const Fact& fact, const EncodingContext& ctx) {
    const RelationSymbol* rel = ctx.schema().find(fact.relation.name);
    if (rel == nullptr || *rel != fact.relation) {
        throw PreconditionError("relation " + fact.relation.name +
                                " is not part of the encoding schema");
    }
    std::vector<Term> key;
    key.reserve(ctx.k() + 1);
    key.push_back(Term::rel_name(fact.relation.name));
    key.insert(key.end(), fact.key.begin(), fact.key.end());
    while (key.size() < ctx.k() + 1) key.push_back(ctx.padding_zero());
    std::vector<Term> nonkey = fact.nonkey;
    nonkey.reserve(ctx.m());
    while (nonkey.size() < ctx.m()) nonkey.push_back(ctx.padding_zero());
    return Fact::of(ctx.n_symbol(), std::move(key), std::move(nonkey));
}

Database pad_database(const Database& db, const EncodingContext& ctx) {
    std::vector<Fact> out;
    out.reserve(db.size());
    for (const Fact& f : db.facts()) out.push_back(pad_fact(f, ctx));
    return Database::of(std::move(out), Schema{ctx.n_symbol()});
}

Fact couple_fact(const Fact& fact, const Atom& atom, const RelationSymbol& original) {
    if (fact.relation != atom.relation) {
        throw PreconditionError("fact " + fact.to_string() + " does not match atom " +
                                atom.to_string());
    }
    if (original.key_arity != atom.relation.key_arity ||
        original.nonkey_arity != atom.relation.nonkey_arity) {
        throw PreconditionError("relation " + original.name + " does not share the signature of " +
                                atom.relation.name);
    }
    std::vector<Term> key, nonkey;
    key.reserve(fact.key.size());
    nonkey.reserve(fact.nonkey.size());
    for (std::size_t i = 0; i < fact.key.size(); ++i) {
        key.push_back(Term::couple(fact.key[i], atom.key[i]));
    }
    for (std::size_t i = 0; i < fact.nonkey.size(); ++i) {
        nonkey.push_back(Term::couple(fact.nonkey[i], atom.nonkey[i]));
    }
    return Fact::of(original, std::move(key), std::move(nonkey));
}

Database couple_database(const Database& db, const SelfJoinFreeRewrite& rewrite) {
    std::vector<Atom> origin_atoms;
    origin_atoms.reserve(rewrite.origin.size());
    for (const auto& entry : rewrite.origin) origin_atoms.push_back(entry.second);
    for (std::size_t i = 0; i < origin_atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < origin_atoms.size(); ++j) {
            if (origin_atoms[i].relation == origin_atoms[j].relation &&
                origin_atoms[i].key == origin_atoms[j].key &&
                origin_atoms[i] != origin_atoms[j]) {
                throw PreconditionError(
                    "originating query has two atoms with equal relation and key (" +
                    origin_atoms[i].to_string() + ", " + origin_atoms[j].to_string() +
                    "); coupling would not preserve key equality");
            }
        }
    }

    std::map<std::string, const Atom*> atom_of;
    Schema target;
    for (const Atom& a : rewrite.rewritten.atoms()) {
        if (!atom_of.emplace(a.relation.name, &a).second) {
            throw PreconditionError("rewritten query is not self-join-free: relation " +
                                    a.relation.name + " occurs twice");
        }
        auto origin_it = rewrite.origin.find(a);
        if (origin_it == rewrite.origin.end()) {
            throw PreconditionError("rewrite has no origin for atom " + a.to_string());
        }
        target.add(origin_it->second.relation);
    }
    std::vector<Fact> out;
    out.reserve(db.size());
    for (const Fact& f : db.facts()) {
        auto it = atom_of.find(f.relation.name);
        if (it == atom_of.end()) {
            throw PreconditionError("no atom of the rewritten query uses relation " +
                                    f.relation.name);
        }
        const Atom& atom = *it->second;
        out.push_back(couple_fact(f, atom, rewrite.origin.find(atom)->second.relation));
    }
    return Database::of(std::move(out), std::move(target));
}

}  // namespace cqa
