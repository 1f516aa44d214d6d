#pragma once

#include <map>
#include <optional>
#include <set>

#include "cqa/model.hpp"

namespace cqa {

struct EncodingOptions {
    // When set, padding uses the reserved constant #0, which no database can
    // mention; otherwise the ordinary constant 0, which input data may share.
    bool reserved_zero = false;
};

// Widths and naming for the single-relation encoding over a schema: one
// relation N with k+1 key positions (a relation-name constant, then the widest
// key, zero-padded) and m non-key positions. The fresh-variable counter for
// padding lives here, so contexts can be reused without name clashes.
class EncodingContext {
public:
    explicit EncodingContext(Schema schema, EncodingOptions options = {});

    const Schema& schema() const { return schema_; }
    std::size_t k() const { return k_; }
    std::size_t m() const { return m_; }
    const RelationSymbol& n_symbol() const { return n_; }
    Term padding_zero() const;

    // Next padding variable z#1, z#2, ...
    Term fresh_variable();
    // Advances the counter past any z#i among `names`.
    void avoid(const std::set<std::string>& names);

private:
    Schema schema_;
    EncodingOptions options_;
    std::size_t k_ = 0;
    std::size_t m_ = 0;
    RelationSymbol n_;
    std::size_t counter_ = 0;
};

// Each atom R(x̄|ȳ) becomes N('R', x̄, 0..0 | ȳ, z̄): keys zero-padded to width
// k after the relation-name constant, non-keys padded to width m with fresh
// variables, each used exactly once. The result is a query over N alone whose
// first key position is a constant in every atom.
Query new_encode(const Query& q, EncodingContext& ctx);
Query new_encode(const Query& q, const Schema& schema, EncodingOptions options = {});

// Same as new_encode, except non-key padding uses the zero constant.
Query old_encode(const Query& q, EncodingContext& ctx);
Query old_encode(const Query& q, const Schema& schema, EncodingOptions options = {});

struct Preimage {
    std::optional<Database> database;
    // First fact (canonical order) that no zero-padded encoding can produce.
    std::optional<Fact> witness;

    bool found() const { return database.has_value(); }
};

// Decodes a database over N through the zero-padded fact map. Every fact must
// be an N-fact whose first key position names a schema relation; a fact with a
// non-zero value in a padding position has no preimage and is reported as the
// witness.
Preimage invert_old_encode(const Database& db, const EncodingContext& ctx);
Preimage invert_old_encode(const Database& db, const Schema& schema, EncodingOptions options = {});

struct SelfJoinFreeRewrite {
    Query rewritten;
    // Atom of `rewritten` to the atom of the input it renames.
    std::map<Atom, Atom> origin;
};

// Renames each atom's relation to a fresh name (R#1, R#2, ... per relation, in
// canonical atom order) so that no relation occurs twice.
SelfJoinFreeRewrite selfjoinfree_rewrite(const Query& q);

}  // namespace cqa
