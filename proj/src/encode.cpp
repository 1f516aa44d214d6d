#include "cqa/encode.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace cqa {

namespace {

// Trailing counter of a generated name "<base>#<digits>", if any.
std::optional<std::size_t> generated_index(const std::string& name, const std::string& base) {
    if (name.size() <= base.size() + 1) return std::nullopt;
    if (name.compare(0, base.size(), base) != 0 || name[base.size()] != '#') return std::nullopt;
    std::size_t value = 0;
    for (std::size_t i = base.size() + 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
        value = value * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    return value;
}

void require_in_schema(const Query& q, const Schema& schema) {
    for (const Atom& a : q.atoms()) {
        const RelationSymbol* rel = schema.find(a.relation.name);
        if (rel == nullptr || *rel != a.relation) {
            throw PreconditionError("relation " + a.relation.name +
                                    " is not part of the encoding schema");
        }
    }
}

Query encode_atoms(const Query& q, EncodingContext& ctx, bool fresh_padding) {
    require_in_schema(q, ctx.schema());
    ctx.avoid(q.variables());
    std::vector<Atom> out;
    out.reserve(q.size());
    for (const Atom& a : q.atoms()) {
        std::vector<Term> key;
        key.reserve(ctx.k() + 1);
        key.push_back(Term::rel_name(a.relation.name));
        key.insert(key.end(), a.key.begin(), a.key.end());
        while (key.size() < ctx.k() + 1) key.push_back(ctx.padding_zero());
        std::vector<Term> nonkey = a.nonkey;
        nonkey.reserve(ctx.m());
        while (nonkey.size() < ctx.m()) {
            nonkey.push_back(fresh_padding ? ctx.fresh_variable() : ctx.padding_zero());
        }
        out.push_back(Atom::of(ctx.n_symbol(), std::move(key), std::move(nonkey)));
    }
    return Query::of(std::move(out), Schema{ctx.n_symbol()});
}

}  // namespace

EncodingContext::EncodingContext(Schema schema, EncodingOptions options)
    : schema_(std::move(schema)), options_(options) {
    k_ = schema_.max_key_arity();
    m_ = schema_.max_nonkey_arity();
    std::string name = "N";
    for (std::size_t i = 1; schema_.contains(name); ++i) {
        name = "N#" + std::to_string(i);
    }
    n_ = RelationSymbol{name, k_ + 1, m_};
}

Term EncodingContext::padding_zero() const {
    return options_.reserved_zero ? Term::reserved_zero() : Term::zero();
}

Term EncodingContext::fresh_variable() {
    return Term::var("z#" + std::to_string(++counter_));
}

void EncodingContext::avoid(const std::set<std::string>& names) {
    for (const std::string& name : names) {
        if (auto i = generated_index(name, "z")) counter_ = std::max(counter_, *i);
    }
}

Query new_encode(const Query& q, EncodingContext& ctx) { return encode_atoms(q, ctx, true); }

Query new_encode(const Query& q, const Schema& schema, EncodingOptions options) {
    EncodingContext ctx(schema, options);
    return new_encode(q, ctx);
}

Query old_encode(const Query& q, EncodingContext& ctx) { return encode_atoms(q, ctx, false); }

Query old_encode(const Query& q, const Schema& schema, EncodingOptions options) {
    EncodingContext ctx(schema, options);
    return old_encode(q, ctx);
}

Preimage invert_old_encode(const Database& db, const EncodingContext& ctx) {
    const RelationSymbol& n = ctx.n_symbol();
    Term zero = ctx.padding_zero();
    std::vector<Fact> decoded;
    decoded.reserve(db.size());
    for (const Fact& f : db.facts()) {
        if (f.relation.name != n.name) {
            throw PreconditionError("expected facts over " + n.name + ", found " +
                                    f.relation.name);
        }
        if (f.relation != n) {
            throw PreconditionError(f.to_string() + " does not match the signature of " + n.name +
                                    " (key " + std::to_string(n.key_arity) + ", val " +
                                    std::to_string(n.nonkey_arity) + ")");
        }
        const Term& head = f.key.front();
        if (!head.is_constant() || head.const_kind() != ConstKind::RelName) {
            throw PreconditionError("first key position of " + f.to_string() +
                                    " must be a quoted relation name");
        }
        const RelationSymbol* rel = ctx.schema().find(head.text());
        if (rel == nullptr) {
            throw PreconditionError(f.to_string() + " names unknown relation " + head.text());
        }
        bool padded_with_zeros = true;
        for (std::size_t i = 1 + rel->key_arity; i < f.key.size(); ++i) {
            if (f.key[i] != zero) padded_with_zeros = false;
        }
        for (std::size_t i = rel->nonkey_arity; i < f.nonkey.size(); ++i) {
            if (f.nonkey[i] != zero) padded_with_zeros = false;
        }
        if (!padded_with_zeros) return Preimage{std::nullopt, f};
        std::vector<Term> key(f.key.begin() + 1, f.key.begin() + 1 + rel->key_arity);
        std::vector<Term> nonkey(f.nonkey.begin(), f.nonkey.begin() + rel->nonkey_arity);
        decoded.push_back(Fact::of(*rel, std::move(key), std::move(nonkey)));
    }
    return Preimage{Database::of(std::move(decoded), ctx.schema()), std::nullopt};
}

Preimage invert_old_encode(const Database& db, const Schema& schema, EncodingOptions options) {
    EncodingContext ctx(schema, options);
    return invert_old_encode(db, ctx);
}

SelfJoinFreeRewrite selfjoinfree_rewrite(const Query& q) {
    std::map<std::string, std::size_t> counters;
    Schema schema;
    std::vector<Atom> atoms;
    std::map<Atom, Atom> origin;
    for (const Atom& a : q.atoms()) {
        std::size_t& counter = counters[a.relation.name];
        std::string name;
        do {
            name = a.relation.name + "#" + std::to_string(++counter);
        } while (q.schema().contains(name));
        RelationSymbol fresh{name, a.relation.key_arity, a.relation.nonkey_arity};
        schema.add(fresh);
        Atom renamed = Atom::of(fresh, a.key, a.nonkey);
        origin.emplace(renamed, a);
        atoms.push_back(std::move(renamed));
    }
    return SelfJoinFreeRewrite{Query::of(std::move(atoms), std::move(schema)), std::move(origin)};
}

}  // namespace cqa
