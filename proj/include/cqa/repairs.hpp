#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqa/model.hpp"

namespace cqa {

inline constexpr std::uint64_t kDefaultRepairCap = 1'000'000;

struct RepairOptions {
    // Enumeration refuses with RepairSpaceTooLarge when the repair count
    // exceeds this.
    std::uint64_t cap = kDefaultRepairCap;
};

// Relation name plus key tuple: the identity of a block.
using BlockKey = std::pair<std::string, std::vector<Term>>;

// Partition of a database into key-equality classes. Every fact sits in
// exactly one block; facts inside a block are pairwise key-equal and sorted
// canonically.
struct BlockDecomposition {
    std::map<BlockKey, std::vector<Fact>> blocks;

    std::size_t block_count() const { return blocks.size(); }
};

BlockDecomposition blocks(const Database& db);

// Product of the block sizes, i.e. the exact number of repairs. Throws
// RepairSpaceTooLarge past the cap (which also guards overflow).
std::uint64_t repair_count(const BlockDecomposition& decomposition,
                           const RepairOptions& options = {});
std::uint64_t repair_count(const Database& db, const RepairOptions& options = {});

// Streams every database that keeps exactly one fact per block, in mixed-radix
// order over the canonically sorted blocks. fn returning false stops early.
// The empty database has one repair: itself.
void for_each_repair(const Database& db, const std::function<bool(const Database&)>& fn,
                     const RepairOptions& options = {});
std::vector<Database> all_repairs(const Database& db, const RepairOptions& options = {});

// Number of repairs satisfying q.
std::uint64_t count_satisfying(const Database& db, const Query& q,
                               const RepairOptions& options = {});

}  // namespace cqa
