#include <set>
#include <string>
#include <vector>

#include "cqa/errors.hpp"
#include "cqa/model.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cqa;

namespace {

RelationSymbol rel_r() { return RelationSymbol{"R", 1, 1}; }
RelationSymbol rel_s() { return RelationSymbol{"S", 1, 0}; }

// R[x; y], S[y;]
Query q0() {
    return Query::infer({Atom::of(rel_r(), {Term::var("x")}, {Term::var("y")}),
                         Atom::of(rel_s(), {Term::var("y")}, {})});
}

}  // namespace

TEST_CASE("term factories validate lexical classes") {
    CHECK(Term::var("x").is_variable());
    CHECK(Term::var("z#4").is_variable());
    CHECK_FALSE(Term::sym("a").is_variable());
    CHECK(Term::sym("0").is_constant());
    CHECK(Term::sym("c#2").is_constant());
    CHECK_THROWS_AS(Term::var("a"), PreconditionError);   // a..t starts a constant
    CHECK_THROWS_AS(Term::sym("x"), PreconditionError);   // u..z starts a variable
    CHECK_THROWS_AS(Term::var(""), PreconditionError);
    CHECK_THROWS_AS(Term::sym("R"), PreconditionError);   // upper case needs quoting
    CHECK_THROWS_AS(Term::rel_name(""), PreconditionError);
}

TEST_CASE("term serialization forms") {
    CHECK(Term::var("x").to_string() == "x");
    CHECK(Term::sym("12").to_string() == "12");
    CHECK(Term::rel_name("R").to_string() == "'R'");
    CHECK(Term::reserved_zero().to_string() == "#0");
    CHECK(Term::zero().to_string() == "0");
    CHECK(Term::couple(Term::sym("a"), Term::var("x")).to_string() == "<a|x>");
}

TEST_CASE("couples collapse on equal constant coordinates") {
    Term collapsed = Term::couple(Term::sym("c"), Term::sym("c"));
    CHECK(collapsed == Term::sym("c"));
    Term kept = Term::couple(Term::sym("c"), Term::sym("d"));
    CHECK(kept.to_string() == "<c|d>");
    CHECK(kept.couple_left() == Term::sym("c"));
    CHECK(kept.couple_right() == Term::sym("d"));
    CHECK_THROWS_AS(Term::couple(Term::var("x"), Term::sym("a")), PreconditionError);
    // nesting stays a constant, so couples can be coupled again
    Term nested = Term::couple(Term::sym("a"), kept);
    CHECK(nested.to_string() == "<a|<c|d>>");
}

TEST_CASE("terms order by serialization") {
    std::vector<Term> terms{Term::var("x"), Term::sym("a"), Term::rel_name("R"),
                            Term::sym("0")};
    std::sort(terms.begin(), terms.end());
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
        CHECK(terms[i].to_string() < terms[i + 1].to_string());
    }
}

TEST_CASE("relation symbols check arity") {
    RelationSymbol r{"R", 2, 1};
    CHECK(r.arity() == 3);
    CHECK_FALSE(r.simple_key());
    CHECK(rel_r().simple_key());
    CHECK_THROWS_AS(Atom::of(RelationSymbol{"R", 0, 1}, {}, {Term::var("x")}),
                    PreconditionError);
}

TEST_CASE("atoms check tuple lengths against the signature") {
    CHECK_THROWS_AS(Atom::of(rel_r(), {Term::var("x"), Term::var("y")}, {Term::var("z")}),
                    PreconditionError);
    CHECK_THROWS_AS(Atom::of(rel_r(), {Term::var("x")}, {}), PreconditionError);
    Atom a = Atom::of(rel_r(), {Term::var("x")}, {Term::var("y")});
    CHECK(a.to_string() == "R[x; y]");
    Atom nullary_value = Atom::of(rel_s(), {Term::var("y")}, {});
    CHECK(nullary_value.to_string() == "S[y;]");
}

TEST_CASE("facts must be ground") {
    CHECK_THROWS_AS(Fact::of(rel_r(), {Term::var("x")}, {Term::sym("1")}), PreconditionError);
    Fact f = Fact::of(rel_r(), {Term::sym("a")}, {Term::sym("1")});
    CHECK(f.to_string() == "R[a; 1]");
    CHECK(Fact::from_atom(f.to_atom()) == f);
}

TEST_CASE("key equality compares relation name and key values") {
    Fact f1 = Fact::of(rel_r(), {Term::sym("a")}, {Term::sym("1")});
    Fact f2 = Fact::of(rel_r(), {Term::sym("a")}, {Term::sym("2")});
    Fact f3 = Fact::of(rel_r(), {Term::sym("b")}, {Term::sym("1")});
    Fact g = Fact::of(RelationSymbol{"S", 1, 1}, {Term::sym("a")}, {Term::sym("1")});
    CHECK(key_equal(f1, f2));
    CHECK_FALSE(key_equal(f1, f3));
    CHECK_FALSE(key_equal(f1, g));
    CHECK(key_equal(f1, f1));
}

TEST_CASE("schema rejects conflicting signatures and merges consistently") {
    Schema s;
    s.add(rel_r());
    CHECK_THROWS_AS(s.add(RelationSymbol{"R", 1, 2}), PreconditionError);
    s.add(rel_s());
    Schema t;
    t.add(rel_r());
    t.add(RelationSymbol{"T", 2, 0});
    t.merge(s);
    CHECK(t.size() == 3);
    CHECK(t.contains("S"));
    CHECK(t.max_key_arity() == 2);
    CHECK(t.max_nonkey_arity() == 1);
    CHECK_FALSE(t.all_simple_key());
    CHECK(s.all_simple_key());
    Schema conflict;
    conflict.add(RelationSymbol{"R", 2, 2});
    CHECK_THROWS_AS(conflict.merge(s), PreconditionError);
}

TEST_CASE("queries deduplicate and sort atoms canonically") {
    Atom a = Atom::of(rel_r(), {Term::var("x")}, {Term::var("y")});
    Atom b = Atom::of(rel_s(), {Term::var("y")}, {});
    Query q = Query::infer({b, a, a});
    CHECK(q.size() == 2);
    CHECK(q.to_string() == "R[x; y], S[y;]");
    CHECK(q.contains(a));
    CHECK(q.index_of(b) == 1);
    CHECK(q.variables() == std::set<std::string>{"x", "y"});
    CHECK(q.self_join_free());
    Query doubled = Query::infer({a, Atom::of(rel_r(), {Term::var("u")}, {Term::var("v")})});
    CHECK_FALSE(doubled.self_join_free());
    CHECK(Query{}.empty());
    CHECK(Query{} == Query::infer({}));
}

TEST_CASE("query validation against an explicit schema") {
    Schema s;
    s.add(rel_r());
    CHECK_THROWS_AS(Query::of({Atom::of(rel_s(), {Term::var("y")}, {})}, s), PreconditionError);
    Schema wrong;
    wrong.add(RelationSymbol{"R", 1, 2});
    CHECK_THROWS_AS(
        Query::of({Atom::of(rel_r(), {Term::var("x")}, {Term::var("y")})}, wrong),
        PreconditionError);
}

TEST_CASE("databases deduplicate facts and group into blocks elsewhere") {
    Fact f1 = Fact::of(rel_r(), {Term::sym("a")}, {Term::sym("1")});
    Database db = Database::infer({f1, f1});
    CHECK(db.size() == 1);
    CHECK(Database{}.empty());
}

TEST_CASE("substitution application is positionwise") {
    Substitution sigma;
    sigma.bind("x", Term::sym("a"));
    sigma.bind("y", Term::var("z"));
    Atom a = Atom::of(rel_r(), {Term::var("x")}, {Term::var("y")});
    CHECK(sigma.apply(a).to_string() == "R[a; z]");
    CHECK(sigma.apply(Term::var("w")) == Term::var("w"));
    CHECK(sigma.apply(Term::sym("b")) == Term::sym("b"));
    Query q = q0();
    Query image = sigma.apply(q);
    CHECK(image.to_string() == "R[a; z], S[z;]");
}

TEST_CASE("evaluate finds a homomorphism into the database") {
    Database db = Database::infer({Fact::of(rel_r(), {Term::sym("a")}, {Term::sym("1")}),
                                   Fact::of(rel_s(), {Term::sym("1")}, {})});
    CHECK(evaluate(q0(), db));
    Database miss = Database::infer({Fact::of(rel_r(), {Term::sym("a")}, {Term::sym("1")}),
                                     Fact::of(rel_s(), {Term::sym("2")}, {})});
    CHECK_FALSE(evaluate(q0(), miss));
    CHECK(evaluate(Query{}, Database{}));       // empty query holds everywhere
    CHECK_FALSE(evaluate(q0(), Database{}));
}

TEST_CASE("evaluate respects constants and repeated variables") {
    RelationSymbol r2{"R", 1, 2};
    Query repeated =
        Query::infer({Atom::of(r2, {Term::var("x")}, {Term::var("y"), Term::var("y")})});
    Database same = Database::infer({Fact::of(r2, {Term::sym("a")},
                                              {Term::sym("1"), Term::sym("1")})});
    Database diff = Database::infer({Fact::of(r2, {Term::sym("a")},
                                              {Term::sym("1"), Term::sym("2")})});
    CHECK(evaluate(repeated, same));
    CHECK_FALSE(evaluate(repeated, diff));
    Query pinned = Query::infer({Atom::of(rel_r(), {Term::var("x")}, {Term::sym("2")})});
    CHECK_FALSE(evaluate(pinned, same));
}

TEST_CASE("complex part collects constants and repeated variables in value positions") {
    // R[x; y], S[y;]: y repeats but only its R occurrence is in a value position
    Query q = q0();
    std::vector<Atom> complex = complex_part(q);
    REQUIRE(complex.size() == 1);
    CHECK(complex[0].to_string() == "R[x; y]");

    // constants in value positions always count
    Query with_const = Query::infer({Atom::of(rel_r(), {Term::var("x")}, {Term::sym("0")})});
    CHECK(complex_part(with_const).size() == 1);

    // a variable occurring twice inside the same value tuple counts
    RelationSymbol r2{"R", 1, 2};
    Query twice =
        Query::infer({Atom::of(r2, {Term::var("x")}, {Term::var("y"), Term::var("y")})});
    CHECK(complex_part(twice).size() == 1);

    // key-only repetition is not complex
    Query key_only = Query::infer({Atom::of(RelationSymbol{"R", 2, 0},
                                            {Term::var("x"), Term::var("x")}, {})});
    CHECK(complex_part(key_only).empty());
}

TEST_CASE("intersection graph connects atoms sharing a variable") {
    RelationSymbol r{"R", 1, 1};
    Atom a = Atom::of(r, {Term::var("x")}, {Term::var("y")});
    Atom b = Atom::of(r, {Term::var("y")}, {Term::var("z")});
    Atom c = Atom::of(r, {Term::var("z")}, {Term::var("w")});
    Atom d = Atom::of(r, {Term::var("u")}, {Term::var("v")});
    Query q = Query::infer({a, b, c, d});
    IntersectionGraph g = intersection_graph(q);
    auto at = [&](const Atom& atom) { return *g.index_of(atom); };
    CHECK(g.adjacent(at(a), at(b)));
    CHECK_FALSE(g.adjacent(at(a), at(c)));
    CHECK(g.path_connected(at(a), at(c)));
    CHECK_FALSE(g.path_connected(at(a), at(d)));
    CHECK(g.path_connected(at(a), at(a)));
    CHECK_FALSE(g.index_of(Atom::of(r, {Term::var("v")}, {Term::var("u")})).has_value());
    CHECK(connected(q, a, c, ConnectMode::Path));
    CHECK_FALSE(connected(q, a, c, ConnectMode::Adjacent));
    Atom outside = Atom::of(r, {Term::var("v")}, {Term::var("v")});
    CHECK_THROWS_AS(connected(q, a, outside, ConnectMode::Path), PreconditionError);
}

TEST_CASE("shared constants do not connect atoms") {
    Atom a = Atom::of(rel_r(), {Term::var("x")}, {Term::sym("0")});
    Atom b = Atom::of(rel_r(), {Term::var("y")}, {Term::sym("0")});
    Query q = Query::infer({a, b});
    IntersectionGraph g = intersection_graph(q);
    std::size_t ia = *g.index_of(a), ib = *g.index_of(b);
    CHECK_FALSE(g.adjacent(ia, ib));
    CHECK_FALSE(g.path_connected(ia, ib));
}
