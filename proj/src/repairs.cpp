#include "cqa/repairs.hpp"

#include <algorithm>

namespace cqa {

namespace {

std::vector<const std::vector<Fact>*> block_list(const BlockDecomposition& decomposition) {
    std::vector<const std::vector<Fact>*> out;
    out.reserve(decomposition.blocks.size());
    for (const auto& entry : decomposition.blocks) out.push_back(&entry.second);
    return out;
}

std::uint64_t checked_product(const std::vector<const std::vector<Fact>*>& blocks,
                              std::uint64_t cap) {
    std::uint64_t product = 1;
    for (const auto* block : blocks) {
        std::uint64_t size = block->size();
        if (product > cap / size) throw RepairSpaceTooLarge(cap);
        product *= size;
    }
    return product;
}

// Advances the odometer; false once every combination has been visited.
bool advance(std::vector<std::size_t>& choice,
             const std::vector<const std::vector<Fact>*>& blocks) {
    for (std::size_t i = choice.size(); i-- > 0;) {
        if (++choice[i] < blocks[i]->size()) return true;
        choice[i] = 0;
    }
    return false;
}

}  // namespace

BlockDecomposition blocks(const Database& db) {
    BlockDecomposition out;
    for (const Fact& f : db.facts()) {
        out.blocks[BlockKey{f.relation.name, f.key}].push_back(f);
    }
    return out;
}

std::uint64_t repair_count(const BlockDecomposition& decomposition, const RepairOptions& options) {
    return checked_product(block_list(decomposition), options.cap);
}

std::uint64_t repair_count(const Database& db, const RepairOptions& options) {
    return repair_count(blocks(db), options);
}

void for_each_repair(const Database& db, const std::function<bool(const Database&)>& fn,
                     const RepairOptions& options) {
    BlockDecomposition decomposition = blocks(db);
    std::vector<const std::vector<Fact>*> list = block_list(decomposition);
    checked_product(list, options.cap);
    std::vector<std::size_t> choice(list.size(), 0);
    do {
        std::vector<Fact> facts;
        facts.reserve(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) facts.push_back((*list[i])[choice[i]]);
        if (!fn(Database::of(std::move(facts), db.schema()))) return;
    } while (advance(choice, list));
}

std::vector<Database> all_repairs(const Database& db, const RepairOptions& options) {
    std::vector<Database> out;
    for_each_repair(
        db,
        [&](const Database& repair) {
            out.push_back(repair);
            return true;
        },
        options);
    return out;
}

namespace {

bool satisfies_from(const std::vector<Atom>& atoms, std::size_t next,
                    const std::map<std::string, std::vector<const Fact*>>& chosen,
                    std::map<std::string, Term>& binding, std::vector<std::string>& undo) {
    if (next == atoms.size()) return true;
    auto it = chosen.find(atoms[next].relation.name);
    if (it == chosen.end()) return false;
    for (const Fact* fact : it->second) {
        std::size_t mark = undo.size();
        if (detail::match_atom(atoms[next], *fact, binding, undo)) {
            if (satisfies_from(atoms, next + 1, chosen, binding, undo)) return true;
            detail::roll_back(binding, undo, mark);
        }
    }
    return false;
}

}  // namespace

std::uint64_t count_satisfying(const Database& db, const Query& q, const RepairOptions& options) {
    BlockDecomposition decomposition = blocks(db);
    std::vector<const std::vector<Fact>*> list = block_list(decomposition);
    checked_product(list, options.cap);

    std::vector<std::size_t> choice(list.size(), 0);
    std::uint64_t count = 0;
    do {
        std::map<std::string, std::vector<const Fact*>> chosen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Fact& f = (*list[i])[choice[i]];
            chosen[f.relation.name].push_back(&f);
        }
        std::map<std::string, Term> binding;
        std::vector<std::string> undo;
        if (satisfies_from(q.atoms(), 0, chosen, binding, undo)) ++count;
    } while (advance(choice, list));
    return count;
}

}  // namespace cqa
