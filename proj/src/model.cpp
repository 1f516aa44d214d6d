#include "cqa/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace cqa {

namespace {

bool ident_tail_ok(std::string_view s) {
    for (char c : s.substr(1)) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#')) return false;
    }
    return true;
}

bool is_variable_name(std::string_view s) {
    return !s.empty() && s[0] >= 'u' && s[0] <= 'z' && ident_tail_ok(s);
}

bool is_symbol_name(std::string_view s) {
    if (s.empty()) return false;
    char c = s[0];
    bool head_ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 't');
    return head_ok && ident_tail_ok(s);
}

bool is_relation_name(std::string_view s) {
    return !s.empty() && std::isalpha(static_cast<unsigned char>(s[0])) && ident_tail_ok(s);
}

std::string tuple_text(const std::vector<Term>& key, const std::vector<Term>& nonkey,
                       const std::string& relation) {
    std::string out = relation;
    out += '[';
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i > 0) out += ',';
        out += key[i].to_string();
    }
    out += ';';
    if (!nonkey.empty()) {
        out += ' ';
        for (std::size_t i = 0; i < nonkey.size(); ++i) {
            if (i > 0) out += ',';
            out += nonkey[i].to_string();
        }
    }
    out += ']';
    return out;
}

void check_arities(const RelationSymbol& relation, std::size_t key, std::size_t nonkey) {
    if (relation.key_arity == 0) {
        throw PreconditionError("relation " + relation.name + " must have at least one key position");
    }
    if (key != relation.key_arity || nonkey != relation.nonkey_arity) {
        throw PreconditionError("tuple lengths do not match the signature of " + relation.name);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

Term Term::var(std::string name) {
    if (!is_variable_name(name)) {
        throw PreconditionError("invalid variable name '" + name + "' (must start with u..z)");
    }
    Term t;
    t.kind_ = TermKind::Variable;
    t.text_ = std::move(name);
    return t;
}

Term Term::sym(std::string text) {
    if (!is_symbol_name(text)) {
        throw PreconditionError("invalid constant '" + text + "' (must start with a digit or a..t)");
    }
    Term t;
    t.kind_ = TermKind::Constant;
    t.ckind_ = ConstKind::Symbol;
    t.text_ = std::move(text);
    return t;
}

Term Term::rel_name(std::string relation) {
    if (!is_relation_name(relation)) {
        throw PreconditionError("invalid relation-name constant '" + relation + "'");
    }
    Term t;
    t.kind_ = TermKind::Constant;
    t.ckind_ = ConstKind::RelName;
    t.text_ = std::move(relation);
    return t;
}

Term Term::reserved_zero() {
    Term t;
    t.kind_ = TermKind::Constant;
    t.ckind_ = ConstKind::ReservedZero;
    t.text_ = "#0";
    return t;
}

Term Term::couple(const Term& left, const Term& right) {
    if (!left.is_constant()) {
        throw PreconditionError("the left coordinate of a couple must be a constant");
    }
    if (right.is_constant() && right == left) return left;
    Term t;
    t.kind_ = TermKind::Constant;
    t.ckind_ = ConstKind::Couple;
    t.couple_ = std::make_shared<const std::pair<Term, Term>>(left, right);
    return t;
}

ConstKind Term::const_kind() const {
    if (!is_constant()) throw PreconditionError("variable has no constant kind");
    return ckind_;
}

const Term& Term::couple_left() const {
    if (ckind_ != ConstKind::Couple || !couple_) throw PreconditionError("term is not a couple");
    return couple_->first;
}

const Term& Term::couple_right() const {
    if (ckind_ != ConstKind::Couple || !couple_) throw PreconditionError("term is not a couple");
    return couple_->second;
}

bool Term::operator==(const Term& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == TermKind::Variable) return text_ == other.text_;
    if (ckind_ != other.ckind_) return false;
    if (ckind_ == ConstKind::Couple) {
        return couple_->first == other.couple_->first && couple_->second == other.couple_->second;
    }
    return text_ == other.text_;
}

std::string Term::to_string() const {
    switch (kind_) {
        case TermKind::Variable:
            return text_;
        case TermKind::Constant:
            break;
    }
    switch (ckind_) {
        case ConstKind::Symbol:
            return text_;
        case ConstKind::RelName:
            return "'" + text_ + "'";
        case ConstKind::ReservedZero:
            return "#0";
        case ConstKind::Couple:
            return "<" + couple_->first.to_string() + "|" + couple_->second.to_string() + ">";
    }
    return text_;
}

// ---------------------------------------------------------------------------
// Atom / Fact
// ---------------------------------------------------------------------------

Atom Atom::of(RelationSymbol relation, std::vector<Term> key, std::vector<Term> nonkey) {
    check_arities(relation, key.size(), nonkey.size());
    Atom a;
    a.relation = std::move(relation);
    a.key = std::move(key);
    a.nonkey = std::move(nonkey);
    return a;
}

bool Atom::ground() const {
    for (const Term& t : key)
        if (t.is_variable()) return false;
    for (const Term& t : nonkey)
        if (t.is_variable()) return false;
    return true;
}

std::vector<Term> Atom::terms() const {
    std::vector<Term> out = key;
    out.insert(out.end(), nonkey.begin(), nonkey.end());
    return out;
}

std::string Atom::to_string() const { return tuple_text(key, nonkey, relation.name); }

Fact Fact::of(RelationSymbol relation, std::vector<Term> key, std::vector<Term> nonkey) {
    check_arities(relation, key.size(), nonkey.size());
    for (const Term& t : key)
        if (t.is_variable()) throw PreconditionError("facts must be ground");
    for (const Term& t : nonkey)
        if (t.is_variable()) throw PreconditionError("facts must be ground");
    Fact f;
    f.relation = std::move(relation);
    f.key = std::move(key);
    f.nonkey = std::move(nonkey);
    return f;
}

Fact Fact::from_atom(const Atom& atom) { return Fact::of(atom.relation, atom.key, atom.nonkey); }

Atom Fact::to_atom() const { return Atom::of(relation, key, nonkey); }

std::string Fact::to_string() const { return tuple_text(key, nonkey, relation.name); }

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

Schema::Schema(std::initializer_list<RelationSymbol> relations) {
    for (const RelationSymbol& r : relations) add(r);
}

void Schema::add(const RelationSymbol& relation) {
    if (relation.key_arity == 0) {
        throw PreconditionError("relation " + relation.name + " must have at least one key position");
    }
    auto it = relations_.find(relation.name);
    if (it == relations_.end()) {
        relations_.emplace(relation.name, relation);
    } else if (it->second != relation) {
        throw PreconditionError("conflicting signatures for relation " + relation.name);
    }
}

void Schema::merge(const Schema& other) {
    for (const auto& entry : other.relations_) add(entry.second);
}

const RelationSymbol* Schema::find(std::string_view name) const {
    auto it = relations_.find(std::string(name));
    return it == relations_.end() ? nullptr : &it->second;
}

std::size_t Schema::max_key_arity() const {
    std::size_t k = 0;
    for (const auto& entry : relations_) k = std::max(k, entry.second.key_arity);
    return k;
}

std::size_t Schema::max_nonkey_arity() const {
    std::size_t m = 0;
    for (const auto& entry : relations_) m = std::max(m, entry.second.nonkey_arity);
    return m;
}

bool Schema::all_simple_key() const {
    for (const auto& entry : relations_)
        if (!entry.second.simple_key()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Query / Database
// ---------------------------------------------------------------------------

Query Query::of(std::vector<Atom> atoms, Schema schema) {
    for (const Atom& a : atoms) {
        const RelationSymbol* rel = schema.find(a.relation.name);
        if (rel == nullptr) {
            throw PreconditionError("atom uses relation " + a.relation.name + " not in the schema");
        }
        if (*rel != a.relation) {
            throw PreconditionError("atom signature differs from schema for " + a.relation.name);
        }
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    Query q;
    q.atoms_ = std::move(atoms);
    q.schema_ = std::move(schema);
    return q;
}

Query Query::infer(std::vector<Atom> atoms) {
    Schema schema;
    for (const Atom& a : atoms) schema.add(a.relation);
    return Query::of(std::move(atoms), std::move(schema));
}

bool Query::contains(const Atom& atom) const { return index_of(atom).has_value(); }

std::optional<std::size_t> Query::index_of(const Atom& atom) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i] == atom) return i;
    return std::nullopt;
}

std::set<std::string> Query::variables() const {
    std::set<std::string> vars;
    for (const Atom& a : atoms_) {
        for (const Term& t : a.key)
            if (t.is_variable()) vars.insert(t.text());
        for (const Term& t : a.nonkey)
            if (t.is_variable()) vars.insert(t.text());
    }
    return vars;
}

bool Query::self_join_free() const {
    std::set<std::string> seen;
    for (const Atom& a : atoms_)
        if (!seen.insert(a.relation.name).second) return false;
    return true;
}

std::string Query::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0) out += ", ";
        out += atoms_[i].to_string();
    }
    return out;
}

Database Database::of(std::vector<Fact> facts, Schema schema) {
    for (const Fact& f : facts) {
        const RelationSymbol* rel = schema.find(f.relation.name);
        if (rel == nullptr) {
            throw PreconditionError("fact uses relation " + f.relation.name + " not in the schema");
        }
        if (*rel != f.relation) {
            throw PreconditionError("fact signature differs from schema for " + f.relation.name);
        }
    }
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    Database db;
    db.facts_ = std::move(facts);
    db.schema_ = std::move(schema);
    return db;
}

Database Database::infer(std::vector<Fact> facts) {
    Schema schema;
    for (const Fact& f : facts) schema.add(f.relation);
    return Database::of(std::move(facts), std::move(schema));
}

bool Database::contains(const Fact& fact) const {
    return std::find(facts_.begin(), facts_.end(), fact) != facts_.end();
}

std::string Database::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < facts_.size(); ++i) {
        if (i > 0) out += '\n';
        out += facts_[i].to_string();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

void Substitution::bind(const std::string& variable, Term value) {
    mapping_.insert_or_assign(variable, std::move(value));
}

const Term* Substitution::lookup(const std::string& variable) const {
    auto it = mapping_.find(variable);
    return it == mapping_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    if (!t.is_variable()) return t;
    const Term* bound = lookup(t.text());
    return bound ? *bound : t;
}

Atom Substitution::apply(const Atom& a) const {
    std::vector<Term> key, nonkey;
    key.reserve(a.key.size());
    nonkey.reserve(a.nonkey.size());
    for (const Term& t : a.key) key.push_back(apply(t));
    for (const Term& t : a.nonkey) nonkey.push_back(apply(t));
    return Atom::of(a.relation, std::move(key), std::move(nonkey));
}

Query Substitution::apply(const Query& q) const {
    std::vector<Atom> atoms;
    atoms.reserve(q.size());
    for (const Atom& a : q.atoms()) atoms.push_back(apply(a));
    return Query::of(std::move(atoms), q.schema());
}

std::string Substitution::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [var, term] : mapping_) {
        if (!first) out += ", ";
        first = false;
        out += var + "->" + term.to_string();
    }
    out += "}";
    return out;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

bool key_equal(const Fact& a, const Fact& b) {
    return a.relation == b.relation && a.key == b.key;
}

namespace detail {

void roll_back(std::map<std::string, Term>& binding, std::vector<std::string>& undo,
               std::size_t undo_mark) {
    while (undo.size() > undo_mark) {
        binding.erase(undo.back());
        undo.pop_back();
    }
}

namespace {

bool match_tuple(const std::vector<Term>& pattern, const std::vector<Term>& ground,
                 std::map<std::string, Term>& binding, std::vector<std::string>& undo) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const Term& p = pattern[i];
        const Term& g = ground[i];
        if (p.is_constant()) {
            if (p != g) return false;
            continue;
        }
        auto it = binding.find(p.text());
        if (it != binding.end()) {
            if (it->second != g) return false;
        } else {
            binding.emplace(p.text(), g);
            undo.push_back(p.text());
        }
    }
    return true;
}

}  // namespace

bool match_atom(const Atom& atom, const Fact& fact, std::map<std::string, Term>& binding,
                std::vector<std::string>& undo) {
    if (atom.relation != fact.relation) return false;
    std::size_t mark = undo.size();
    if (match_tuple(atom.key, fact.key, binding, undo) &&
        match_tuple(atom.nonkey, fact.nonkey, binding, undo)) {
        return true;
    }
    roll_back(binding, undo, mark);
    return false;
}

}  // namespace detail

namespace {

bool evaluate_from(const std::vector<Atom>& atoms, std::size_t next,
                   const std::map<std::string, std::vector<const Fact*>>& by_relation,
                   std::map<std::string, Term>& binding, std::vector<std::string>& undo) {
    if (next == atoms.size()) return true;
    const Atom& atom = atoms[next];
    auto it = by_relation.find(atom.relation.name);
    if (it == by_relation.end()) return false;
    for (const Fact* fact : it->second) {
        std::size_t mark = undo.size();
        if (detail::match_atom(atom, *fact, binding, undo)) {
            if (evaluate_from(atoms, next + 1, by_relation, binding, undo)) return true;
            detail::roll_back(binding, undo, mark);
        }
    }
    return false;
}

}  // namespace

bool evaluate(const Query& q, const Database& db) {
    std::map<std::string, std::vector<const Fact*>> by_relation;
    for (const Fact& f : db.facts()) by_relation[f.relation.name].push_back(&f);
    std::map<std::string, Term> binding;
    std::vector<std::string> undo;
    return evaluate_from(q.atoms(), 0, by_relation, binding, undo);
}

std::vector<Atom> complex_part(const Query& q) {
    std::map<std::string, int> occurrences;
    for (const Atom& a : q.atoms()) {
        for (const Term& t : a.key)
            if (t.is_variable()) ++occurrences[t.text()];
        for (const Term& t : a.nonkey)
            if (t.is_variable()) ++occurrences[t.text()];
    }
    std::vector<Atom> out;
    for (const Atom& a : q.atoms()) {
        bool complex = false;
        for (const Term& t : a.nonkey) {
            if (t.is_constant() || occurrences[t.text()] >= 2) {
                complex = true;
                break;
            }
        }
        if (complex) out.push_back(a);
    }
    return out;
}

IntersectionGraph intersection_graph(const Query& q) {
    IntersectionGraph g;
    g.atoms = q.atoms();
    std::size_t n = g.atoms.size();
    g.adj.assign(n, std::vector<char>(n, 0));

    std::vector<std::set<std::string>> vars(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const Term& t : g.atoms[i].key)
            if (t.is_variable()) vars[i].insert(t.text());
        for (const Term& t : g.atoms[i].nonkey)
            if (t.is_variable()) vars[i].insert(t.text());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool shared = std::any_of(vars[i].begin(), vars[i].end(), [&](const std::string& v) {
                return vars[j].count(v) > 0;
            });
            if (shared) g.adj[i][j] = g.adj[j][i] = 1;
        }
    }
    return g;
}

bool IntersectionGraph::path_connected(std::size_t i, std::size_t j) const {
    if (i == j) return true;
    std::vector<char> seen(atoms.size(), 0);
    std::deque<std::size_t> frontier{i};
    seen[i] = 1;
    while (!frontier.empty()) {
        std::size_t v = frontier.front();
        frontier.pop_front();
        for (std::size_t w = 0; w < atoms.size(); ++w) {
            if (adj[v][w] && !seen[w]) {
                if (w == j) return true;
                seen[w] = 1;
                frontier.push_back(w);
            }
        }
    }
    return false;
}

std::optional<std::size_t> IntersectionGraph::index_of(const Atom& atom) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == atom) return i;
    return std::nullopt;
}

bool connected(const Query& q, const Atom& f1, const Atom& f2, ConnectMode mode) {
    IntersectionGraph g = intersection_graph(q);
    auto i = g.index_of(f1);
    auto j = g.index_of(f2);
    if (!i || !j) throw PreconditionError("connected: both atoms must belong to the query");
    return mode == ConnectMode::Path ? g.path_connected(*i, *j) : g.adjacent(*i, *j);
}

}  // namespace cqa
