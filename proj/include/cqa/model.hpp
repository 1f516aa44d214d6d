#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqa/errors.hpp"

namespace cqa {

// ===========================================================================
// Terms
// ===========================================================================

enum class TermKind { Variable, Constant };

// Constant flavors. Relation-name constants are a kind of their own so that a
// relation name used as data (inside an N-atom) can never collide with a user
// constant of the same spelling.
enum class ConstKind { Symbol, RelName, ReservedZero, Couple };

// A term is a variable or a constant. A couple constant <a|t> pairs a constant
// with a term of the source query; both coordinates belong to the constant's
// identity and are opaque to substitution and variable collection.
//
// Identifier classes, fixed by the text format: variable names start with one
// of u..z, symbolic constants start with a digit or one of a..t. The factories
// enforce the split, which keeps serialization injective.
class Term {
public:
    static Term var(std::string name);
    static Term sym(std::string text);
    static Term rel_name(std::string relation);
    static Term reserved_zero();
    // The padding zero. Identical to the user constant 0 unless the caller
    // opts into the reserved-zero mode.
    static Term zero() { return sym("0"); }
    // Builds <left|right>; collapses <c|c> to c when right is the constant
    // left itself. left must be a constant.
    static Term couple(const Term& left, const Term& right);

    TermKind kind() const { return kind_; }
    bool is_variable() const { return kind_ == TermKind::Variable; }
    bool is_constant() const { return kind_ == TermKind::Constant; }
    ConstKind const_kind() const;

    // Variable name, symbol text, or relation name depending on kind.
    const std::string& text() const { return text_; }
    const Term& couple_left() const;
    const Term& couple_right() const;

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }
    // Canonical order: lexicographic on the serialized form.
    bool operator<(const Term& other) const { return to_string() < other.to_string(); }

    std::string to_string() const;

private:
    Term() = default;

    TermKind kind_ = TermKind::Constant;
    ConstKind ckind_ = ConstKind::Symbol;
    std::string text_;
    std::shared_ptr<const std::pair<Term, Term>> couple_;
};

// ===========================================================================
// Relations, atoms, facts
// ===========================================================================

struct RelationSymbol {
    std::string name;
    std::size_t key_arity = 1;
    std::size_t nonkey_arity = 0;

    bool simple_key() const { return key_arity == 1; }
    std::size_t arity() const { return key_arity + nonkey_arity; }

    bool operator==(const RelationSymbol& o) const {
        return name == o.name && key_arity == o.key_arity && nonkey_arity == o.nonkey_arity;
    }
    bool operator!=(const RelationSymbol& o) const { return !(*this == o); }
    bool operator<(const RelationSymbol& o) const {
        if (name != o.name) return name < o.name;
        if (key_arity != o.key_arity) return key_arity < o.key_arity;
        return nonkey_arity < o.nonkey_arity;
    }
};

// R(key | nonkey); tuple lengths match the relation's signature.
struct Atom {
    RelationSymbol relation;
    std::vector<Term> key;
    std::vector<Term> nonkey;

    static Atom of(RelationSymbol relation, std::vector<Term> key, std::vector<Term> nonkey);

    bool ground() const;
    // All top-level terms, key first.
    std::vector<Term> terms() const;

    bool operator==(const Atom& o) const {
        return relation == o.relation && key == o.key && nonkey == o.nonkey;
    }
    bool operator!=(const Atom& o) const { return !(*this == o); }
    bool operator<(const Atom& o) const { return to_string() < o.to_string(); }

    std::string to_string() const;
};

// The ground case of an atom: no variables in any position. Couple constants
// are constants regardless of the term stored in their right coordinate.
struct Fact {
    RelationSymbol relation;
    std::vector<Term> key;
    std::vector<Term> nonkey;

    static Fact of(RelationSymbol relation, std::vector<Term> key, std::vector<Term> nonkey);
    static Fact from_atom(const Atom& atom);
    Atom to_atom() const;

    bool operator==(const Fact& o) const {
        return relation == o.relation && key == o.key && nonkey == o.nonkey;
    }
    bool operator!=(const Fact& o) const { return !(*this == o); }
    bool operator<(const Fact& o) const { return to_string() < o.to_string(); }

    std::string to_string() const;
};

// ===========================================================================
// Schema, query, database
// ===========================================================================

// A set of relation symbols, at most one per name.
class Schema {
public:
    Schema() = default;
    Schema(std::initializer_list<RelationSymbol> relations);

    // Throws PreconditionError on an empty key or a conflicting redeclaration.
    void add(const RelationSymbol& relation);
    void merge(const Schema& other);

    const RelationSymbol* find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }
    std::size_t size() const { return relations_.size(); }

    const std::map<std::string, RelationSymbol>& relations() const { return relations_; }

    std::size_t max_key_arity() const;
    std::size_t max_nonkey_arity() const;
    bool all_simple_key() const;

    bool operator==(const Schema& o) const { return relations_ == o.relations_; }

private:
    std::map<std::string, RelationSymbol> relations_;
};

// A Boolean conjunctive query: a duplicate-free set of atoms over a schema.
// Atoms are kept in canonical order (lexicographic on serialization).
class Query {
public:
    Query() = default;

    // Validates every atom against the schema, merges duplicates, sorts.
    static Query of(std::vector<Atom> atoms, Schema schema);
    // Builds the schema from the atoms themselves.
    static Query infer(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const Schema& schema() const { return schema_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    bool contains(const Atom& atom) const;
    std::optional<std::size_t> index_of(const Atom& atom) const;

    // Top-level variable names; couple coordinates do not contribute.
    std::set<std::string> variables() const;
    bool self_join_free() const;

    // Equality compares the atom sets; the schema may carry extra relations.
    bool operator==(const Query& o) const { return atoms_ == o.atoms_; }
    bool operator!=(const Query& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    std::vector<Atom> atoms_;
    Schema schema_;
};

// A finite set of facts over a schema, in canonical order.
class Database {
public:
    Database() = default;

    static Database of(std::vector<Fact> facts, Schema schema);
    static Database infer(std::vector<Fact> facts);

    const std::vector<Fact>& facts() const { return facts_; }
    const Schema& schema() const { return schema_; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }
    bool contains(const Fact& fact) const;

    bool operator==(const Database& o) const { return facts_ == o.facts_; }
    bool operator!=(const Database& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    std::vector<Fact> facts_;
    Schema schema_;
};

// ===========================================================================
// Substitutions
// ===========================================================================

// A mapping from variable names to terms; the identity elsewhere.
class Substitution {
public:
    Substitution() = default;

    void bind(const std::string& variable, Term value);
    const Term* lookup(const std::string& variable) const;
    const std::map<std::string, Term>& mapping() const { return mapping_; }
    bool empty() const { return mapping_.empty(); }

    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;
    // Set semantics: atoms that become identical merge.
    Query apply(const Query& q) const;

    bool operator==(const Substitution& o) const { return mapping_ == o.mapping_; }
    bool operator<(const Substitution& o) const { return mapping_ < o.mapping_; }

    std::string to_string() const;

private:
    std::map<std::string, Term> mapping_;
};

// ===========================================================================
// Operations
// ===========================================================================

// Same relation symbol and identical key tuple.
bool key_equal(const Fact& a, const Fact& b);

// True iff some valuation maps every atom of q into db.
bool evaluate(const Query& q, const Database& db);

// Atoms with, in some non-key position, a constant or a variable occurring at
// least twice in the whole query. Returned in canonical order.
std::vector<Atom> complex_part(const Query& q);

// Undirected, loop-free graph on the atoms of a query; vertices are indices
// into Query::atoms().
struct IntersectionGraph {
    std::vector<Atom> atoms;
    std::vector<std::vector<char>> adj;

    bool adjacent(std::size_t i, std::size_t j) const { return adj[i][j] != 0; }
    bool path_connected(std::size_t i, std::size_t j) const;
    std::optional<std::size_t> index_of(const Atom& atom) const;
};

IntersectionGraph intersection_graph(const Query& q);

enum class ConnectMode { Path, Adjacent };

// Path mode (the default) means reachability: every atom is connected to
// itself by the empty path. Adjacent mode asks for a shared variable; the
// graph is loop-free, so no atom is adjacent to itself.
bool connected(const Query& q, const Atom& f1, const Atom& f2, ConnectMode mode = ConnectMode::Path);

namespace detail {

// Matches an atom against a ground fact, extending `binding`; names of newly
// bound variables are appended to `undo`. Leaves `binding` unchanged on
// failure except for entries recorded in `undo` since `undo_mark`.
bool match_atom(const Atom& atom, const Fact& fact, std::map<std::string, Term>& binding,
                std::vector<std::string>& undo);
void roll_back(std::map<std::string, Term>& binding, std::vector<std::string>& undo,
               std::size_t undo_mark);

}  // namespace detail

}  // namespace cqa
