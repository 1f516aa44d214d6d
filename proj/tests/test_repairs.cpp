#include <set>
#include <string>

#include "cqa/errors.hpp"
#include "cqa/parse.hpp"
#include "cqa/repairs.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cqa;

namespace {

Schema rs_schema() { return parse_schema("rel R key 1 val 1\nrel S key 1 val 0"); }

}  // namespace

TEST_CASE("blocks group facts by relation and key") {
    Database db = parse_database("R[a; 1]\nR[a; 2]\nS[1;]", rs_schema());
    BlockDecomposition d = blocks(db);
    CHECK(d.block_count() == 2);
    BlockKey ra{"R", {Term::sym("a")}};
    REQUIRE(d.blocks.count(ra) == 1);
    CHECK(d.blocks.at(ra).size() == 2);
    CHECK(blocks(Database{}).block_count() == 0);
}

TEST_CASE("repair count is the product of block sizes") {
    Database db = parse_database("rel R key 1 val 1\nR[a; 1]\nR[a; 2]\nR[b; 1]");
    CHECK(repair_count(db) == 2);
    Database three = parse_database("rel R key 1 val 1\nR[a; 1]\nR[a; 2]\nR[b; 1]\nR[b; 2]\nR[b; 3]");
    CHECK(repair_count(three) == 6);
    CHECK(repair_count(Database{}) == 1);
}

TEST_CASE("every repair keeps exactly one fact per block") {
    Database db = parse_database("rel R key 1 val 1\nR[a; 1]\nR[a; 2]\nR[b; 1]\nR[b; 2]\nR[b; 3]");
    std::vector<Database> repairs = all_repairs(db);
    REQUIRE(repairs.size() == 6);
    std::set<std::string> seen;
    for (const Database& r : repairs) {
        CHECK(r.size() == 2);
        CHECK(blocks(r).block_count() == 2);
        for (const Fact& f : r.facts()) CHECK(db.contains(f));
        CHECK(seen.insert(r.to_string()).second);  // pairwise distinct
    }
}

TEST_CASE("the empty database has exactly one repair") {
    std::vector<Database> repairs = all_repairs(Database{});
    REQUIRE(repairs.size() == 1);
    CHECK(repairs[0].empty());
}

TEST_CASE("for_each_repair stops when the callback declines") {
    Database db = parse_database("rel R key 1 val 1\nR[a; 1]\nR[a; 2]\nR[b; 1]\nR[b; 2]");
    std::size_t seen = 0;
    for_each_repair(db, [&](const Database&) {
        ++seen;
        return seen < 3;
    });
    CHECK(seen == 3);
}

TEST_CASE("counting satisfying repairs on the pinned example") {
    Query q0 = parse_query("{R[x; y], S[y;]}");
    Database db = parse_database("R[a; 1]\nR[a; 2]\nS[1;]", rs_schema());
    CHECK(count_satisfying(db, q0) == 1);
    CHECK(count_satisfying(Database{}, q0) == 0);
    CHECK(count_satisfying(db, Query{}) == repair_count(db));
    Database consistent = parse_database("R[a; 1]\nS[1;]", rs_schema());
    CHECK(count_satisfying(consistent, q0) == 1);
}

TEST_CASE("count_satisfying sees each repair, not the whole database") {
    Query q0 = parse_query("{R[x; y], S[y;]}");
    // the database satisfies q0, but only the repair keeping R[a; 1] does
    Database db = parse_database("R[a; 1]\nR[a; 2]\nS[1;]", rs_schema());
    CHECK(evaluate(q0, db));
    CHECK(repair_count(db) == 2);
    CHECK(count_satisfying(db, q0) == 1);
    // S blocks are singletons, so both S facts survive into every repair and
    // both R choices find a partner
    Database generous = parse_database("R[a; 1]\nR[a; 2]\nS[1;]\nS[2;]", rs_schema());
    CHECK(count_satisfying(generous, q0) == 2);
    CHECK(count_satisfying(generous, q0) == repair_count(generous));
}

TEST_CASE("the cap bounds the repair space exactly") {
    Database db = parse_database(
        "rel R key 1 val 1\nR[a; 1]\nR[a; 2]\nR[b; 1]\nR[b; 2]\nR[c; 1]\nR[c; 2]");
    CHECK(repair_count(db, RepairOptions{8}) == 8);
    CHECK_THROWS_AS(repair_count(db, RepairOptions{7}), RepairSpaceTooLarge);
    CHECK_THROWS_AS(all_repairs(db, RepairOptions{7}), RepairSpaceTooLarge);
    CHECK_THROWS_AS(count_satisfying(db, Query{}, RepairOptions{7}), RepairSpaceTooLarge);
    try {
        repair_count(db, RepairOptions{7});
        FAIL("expected RepairSpaceTooLarge");
    } catch (const RepairSpaceTooLarge& e) {
        CHECK(e.cap() == 7);
    }
}

TEST_CASE("counts are bounded by the repair count and monotone in the query") {
    for (std::uint64_t seed = 700; seed < 760; ++seed) {
        test::TestGen gen(seed);
        Schema s = gen.schema(2, false);
        Database db = gen.database(s, 4, 3);
        Query q = gen.query(s, 2, 3);
        std::uint64_t total = repair_count(db);
        std::uint64_t count = count_satisfying(db, q);
        CHECK(count <= total);
        CHECK(all_repairs(db).size() == total);
        // adding atoms can only lose repairs
        Query larger = gen.query(s, 2, 3);
        std::vector<Atom> merged(q.atoms().begin(), q.atoms().end());
        merged.insert(merged.end(), larger.atoms().begin(), larger.atoms().end());
        Query both = Query::of(merged, s);
        CHECK(count_satisfying(db, both) <= count);
    }
}

TEST_CASE("counting agrees with filtering the enumerated repairs") {
    for (std::uint64_t seed = 800; seed < 840; ++seed) {
        test::TestGen gen(seed);
        Schema s = gen.schema(2, true, 1);
        Database db = gen.database(s, 3, 3);
        Query q = gen.query(s, 2, 3);
        std::uint64_t direct = count_satisfying(db, q);
        std::uint64_t filtered = 0;
        for (const Database& r : all_repairs(db)) {
            if (evaluate(q, r)) ++filtered;
        }
        CHECK(direct == filtered);
    }
}
