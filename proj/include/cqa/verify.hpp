#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cqa/model.hpp"
#include "cqa/repairs.hpp"

namespace cqa {

// Instance bounds: small enough for exhaustive repair enumeration, rich
// enough to produce joins, self-joins, and multi-fact blocks.
struct HarnessBounds {
    std::size_t max_relations = 3;
    std::size_t max_atoms = 4;
    std::size_t extra_variables = 3;  // variable pool size beyond the atom count
    std::size_t max_blocks = 4;
    std::size_t max_block_size = 3;
    std::uint64_t repair_cap = kDefaultRepairCap;
};

struct TrialFailure {
    std::size_t trial = 0;
    std::uint64_t seed = 0;  // per-trial seed, sufficient to replay the instance
    std::string message;
    std::string query;
    std::string database;
};

struct VerifyReport {
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::vector<TrialFailure> failures;

    bool all_passed() const { return failures.empty(); }
    // First line is always "<passed>/<trials> pass"; failures follow with
    // their reproducer seed and serialized instance.
    std::string summary() const;
};

std::uint64_t splitmix64(std::uint64_t x);

// Random general-arity instances; checks that the zero-padding fact map
// preserves satisfying-repair counts, repair counts, key equality, and maps
// the repair set onto the repair set of the image.
VerifyReport verify_lemma2(std::size_t trials, std::uint64_t seed, const HarnessBounds& bounds = {});

// Random simple-key instances, minimized; checks the same four properties for
// the couple map from the self-join-free rewrite back to the original query.
VerifyReport verify_lemma1(std::size_t trials, std::uint64_t seed, const HarnessBounds& bounds = {});

}  // namespace cqa
