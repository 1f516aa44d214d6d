#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cqa/model.hpp"

namespace cqa {

inline constexpr std::size_t kDefaultMinimizeCap = 8;

struct MinimizeOptions {
    // Endomorphism search is exponential in the atom count, so anything past
    // this cap is rejected with ResourceLimitError.
    std::size_t max_atoms = kDefaultMinimizeCap;
};

// Outcome of the key chase. An empty result means no consistent database can
// satisfy the query.
struct ChaseResult {
    std::optional<Query> query;

    bool satisfiable() const { return query.has_value(); }
};

// Repeatedly picks the least pair of distinct atoms sharing a relation and a
// syntactically identical key tuple and unifies the two atoms. Clashing
// constants make the query unsatisfiable over consistent databases; otherwise
// the result has no two distinct atoms with equal relation and key.
ChaseResult key_chase(const Query& q);

// Replaces every variable with a distinct fresh constant. The resulting
// database satisfies q, and is consistent whenever q is chase-complete.
Database freeze(const Query& q);

// Enumerates the substitutions θ over vars(q) with θ(q) ⊆ q, in a fixed
// depth-first order. fn returning false stops the enumeration.
void for_each_endomorphism(const Query& q, const std::function<bool(const Substitution&)>& fn,
                           const MinimizeOptions& options = {});
std::vector<Substitution> endomorphisms(const Query& q, const MinimizeOptions& options = {});

// True iff no two distinct atoms share relation and key tuple, and no
// substitution maps the atom set to a proper subset of itself.
bool is_minimal(const Query& q, const MinimizeOptions& options = {});

// key_chase, then contraction along proper endomorphisms to a core. Throws
// PreconditionError when the chase is unsatisfiable.
Query minimize(const Query& q, const MinimizeOptions& options = {});

}  // namespace cqa
