#pragma once

#include "cqa/encode.hpp"
#include "cqa/model.hpp"

namespace cqa {

// Zero-pads a fact into the single-relation vocabulary of ctx: key becomes
// ('R', ā, zeros to width k), non-key becomes (b̄, zeros to width m). Depends
// only on the relation's signature.
Fact pad_fact(const Fact& fact, const EncodingContext& ctx);

// Per-fact image. Preserves the fact count and key equality in both
// directions, so blocks map to blocks of the same size.
Database pad_database(const Database& db, const EncodingContext& ctx);

// Pairs each value of `fact` with the term at the same position of `atom`,
// producing a fact over `original` (which must share the atom's signature).
// Position j holds the couple <a_j|t_j>, collapsed to a_j when t_j is the
// constant a_j itself.
Fact couple_fact(const Fact& fact, const Atom& atom, const RelationSymbol& original);

// Maps a database over the rewritten (self-join-free) relations back onto the
// original relation names by coupling every fact with its relation's unique
// atom. Rejects rewrites whose originating query has two distinct atoms with
// equal relation and key, because then key equality would not transfer.
Database couple_database(const Database& db, const SelfJoinFreeRewrite& rewrite);

}  // namespace cqa
