#include "cqa/parse.hpp"

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cqa {

namespace {

struct Token {
    enum class Kind {
        Ident,
        Number,
        Quoted,
        ReservedZero,
        LBracket,
        RBracket,
        LBrace,
        RBrace,
        Semicolon,
        Comma,
        Less,
        Pipe,
        Greater,
        Newline,
        End,
    };
    Kind kind;
    std::string text;
    int line = 1;
    int column = 1;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1, column = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++column;
            continue;
        }
        if (c == '\n') {
            out.push_back({Token::Kind::Newline, "\n", line, column});
            ++i;
            ++line;
            column = 1;
            continue;
        }
        int tl = line, tc = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), tl, tc});
            column += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Token::Kind::Number, std::string(text.substr(i, j - i)), tl, tc});
            column += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (c == '\'') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '\'' && text[j] != '\n') ++j;
            if (j >= text.size() || text[j] != '\'') {
                throw ParseError(tl, tc, "unterminated quoted name");
            }
            std::string name(text.substr(i + 1, j - i - 1));
            if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
                throw ParseError(tl, tc, "quoted name must be an identifier");
            }
            for (char nc : name) {
                if (!ident_char(nc)) throw ParseError(tl, tc, "quoted name must be an identifier");
            }
            out.push_back({Token::Kind::Quoted, std::move(name), tl, tc});
            column += static_cast<int>(j + 1 - i);
            i = j + 1;
            continue;
        }
        if (c == '#') {
            if (i + 1 < text.size() && text[i + 1] == '0' &&
                (i + 2 >= text.size() || !ident_char(text[i + 2]))) {
                out.push_back({Token::Kind::ReservedZero, "#0", tl, tc});
                i += 2;
                column += 2;
                continue;
            }
            throw ParseError(tl, tc, "'#' may only introduce the reserved constant #0");
        }
        Token::Kind kind;
        switch (c) {
            case '[': kind = Token::Kind::LBracket; break;
            case ']': kind = Token::Kind::RBracket; break;
            case '{': kind = Token::Kind::LBrace; break;
            case '}': kind = Token::Kind::RBrace; break;
            case ';': kind = Token::Kind::Semicolon; break;
            case ',': kind = Token::Kind::Comma; break;
            case '<': kind = Token::Kind::Less; break;
            case '|': kind = Token::Kind::Pipe; break;
            case '>': kind = Token::Kind::Greater; break;
            default:
                throw ParseError(tl, tc, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), tl, tc});
        ++i;
        ++column;
    }
    out.push_back({Token::Kind::End, "", line, column});
    return out;
}

const char* describe(Token::Kind k) {
    switch (k) {
        case Token::Kind::Ident: return "identifier";
        case Token::Kind::Number: return "numeric constant";
        case Token::Kind::Quoted: return "quoted name";
        case Token::Kind::ReservedZero: return "#0";
        case Token::Kind::LBracket: return "'['";
        case Token::Kind::RBracket: return "']'";
        case Token::Kind::LBrace: return "'{'";
        case Token::Kind::RBrace: return "'}'";
        case Token::Kind::Semicolon: return "';'";
        case Token::Kind::Comma: return "','";
        case Token::Kind::Less: return "'<'";
        case Token::Kind::Pipe: return "'|'";
        case Token::Kind::Greater: return "'>'";
        case Token::Kind::Newline: return "end of line";
        case Token::Kind::End: return "end of input";
    }
    return "token";
}

class Parser {
public:
    Parser(std::string_view text, const Schema* declared, bool strict_relations)
        : tokens_(lex(text)), strict_(strict_relations) {
        if (declared != nullptr) {
            for (const auto& entry : declared->relations()) {
                signatures_.emplace(entry.first, entry.second);
                declared_.insert(entry.first);
            }
        }
    }

    Query parse_query() {
        parse_declarations();
        std::vector<Atom> atoms;
        bool braced = false;
        skip_newlines();
        if (peek().kind == Token::Kind::LBrace) {
            advance();
            braced = true;
        }
        skip_newlines();
        if (!at_atom_start()) {
            if (braced) {
                expect(Token::Kind::RBrace, "'}'");
            } else {
                throw ParseError(peek().line, peek().column,
                                 "expected an atom (write {} for the empty query)");
            }
        } else {
            atoms.push_back(parse_atom(false));
            for (;;) {
                skip_newlines();
                if (peek().kind != Token::Kind::Comma) break;
                advance();
                skip_newlines();
                atoms.push_back(parse_atom(false));
            }
            skip_newlines();
            if (braced) expect(Token::Kind::RBrace, "'}'");
        }
        skip_newlines();
        expect(Token::Kind::End, "end of input");
        return Query::of(std::move(atoms), collected_schema());
    }

    Database parse_database() {
        std::vector<Fact> facts;
        for (;;) {
            skip_newlines();
            if (peek().kind == Token::Kind::End) break;
            if (at_declaration_start()) {
                parse_declaration();
                continue;
            }
            const Token& head = peek();
            Atom atom = parse_atom(true);
            if (strict_ && declared_.count(atom.relation.name) == 0) {
                throw ParseError(head.line, head.column,
                                 "unknown relation " + atom.relation.name);
            }
            facts.push_back(Fact::from_atom(atom));
            if (peek().kind != Token::Kind::Newline && peek().kind != Token::Kind::End) {
                throw ParseError(peek().line, peek().column, "one fact per line");
            }
        }
        return Database::of(std::move(facts), collected_schema());
    }

    Schema parse_schema_only() {
        for (;;) {
            skip_newlines();
            if (peek().kind == Token::Kind::End) break;
            if (!at_declaration_start()) {
                throw ParseError(peek().line, peek().column,
                                 "expected a declaration: rel NAME key K val M");
            }
            parse_declaration();
        }
        return collected_schema();
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& advance() { return tokens_[pos_++]; }

    const Token& expect(Token::Kind kind, const char* what) {
        if (peek().kind != kind) {
            throw ParseError(peek().line, peek().column,
                             std::string("expected ") + what + ", found " + describe(peek().kind));
        }
        return advance();
    }

    void skip_newlines() {
        while (peek().kind == Token::Kind::Newline) advance();
    }

    bool at_atom_start() const {
        return peek().kind == Token::Kind::Ident && peek(1).kind == Token::Kind::LBracket;
    }

    bool at_declaration_start() const {
        return peek().kind == Token::Kind::Ident && peek().text == "rel" &&
               peek(1).kind == Token::Kind::Ident;
    }

    void parse_declarations() {
        for (;;) {
            skip_newlines();
            if (!at_declaration_start()) return;
            parse_declaration();
        }
    }

    std::size_t parse_count(const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Number) {
            throw ParseError(t.line, t.column, std::string("expected ") + what);
        }
        for (char c : t.text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw ParseError(t.line, t.column, std::string("expected ") + what);
            }
        }
        advance();
        return static_cast<std::size_t>(std::stoull(t.text));
    }

    void parse_declaration() {
        advance();  // rel
        const Token& name = expect(Token::Kind::Ident, "relation name");
        if (!std::isalpha(static_cast<unsigned char>(name.text[0]))) {
            throw ParseError(name.line, name.column, "relation names must start with a letter");
        }
        const Token& kw_key = expect(Token::Kind::Ident, "'key'");
        if (kw_key.text != "key") {
            throw ParseError(kw_key.line, kw_key.column, "expected 'key'");
        }
        std::size_t key_arity = parse_count("key arity");
        const Token& kw_val = expect(Token::Kind::Ident, "'val'");
        if (kw_val.text != "val") {
            throw ParseError(kw_val.line, kw_val.column, "expected 'val'");
        }
        std::size_t nonkey_arity = parse_count("non-key arity");
        if (key_arity == 0) {
            throw ParseError(name.line, name.column,
                             "relation " + name.text + " must have at least one key position");
        }
        record_signature(RelationSymbol{name.text, key_arity, nonkey_arity}, name, true);
        if (peek().kind != Token::Kind::Newline && peek().kind != Token::Kind::End) {
            throw ParseError(peek().line, peek().column, "one declaration per line");
        }
    }

    void record_signature(const RelationSymbol& rel, const Token& at, bool declaration) {
        auto it = signatures_.find(rel.name);
        if (it == signatures_.end()) {
            signatures_.emplace(rel.name, rel);
            if (declaration) declared_.insert(rel.name);
            return;
        }
        if (it->second != rel) {
            std::string kind = declared_.count(rel.name) ? "the declared signature"
                                                         : "an earlier use";
            throw ParseError(at.line, at.column,
                             rel.name + "[" + std::to_string(rel.key_arity) + "; " +
                                 std::to_string(rel.nonkey_arity) + "] conflicts with " + kind +
                                 " (key " + std::to_string(it->second.key_arity) + ", val " +
                                 std::to_string(it->second.nonkey_arity) + ")");
        }
        if (declaration) declared_.insert(rel.name);
    }

    Term parse_term(bool ground) {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::Ident: {
                char head = t.text[0];
                if (head >= 'u' && head <= 'z') {
                    if (ground) {
                        throw ParseError(t.line, t.column,
                                         "facts must be ground; found variable " + t.text);
                    }
                    advance();
                    return Term::var(t.text);
                }
                if (head >= 'a' && head <= 't') {
                    advance();
                    return Term::sym(t.text);
                }
                throw ParseError(t.line, t.column,
                                 "invalid term " + t.text +
                                     " (quote relation names used as data: '" + t.text + "')");
            }
            case Token::Kind::Number:
                advance();
                return Term::sym(t.text);
            case Token::Kind::Quoted:
                advance();
                return Term::rel_name(t.text);
            case Token::Kind::ReservedZero:
                advance();
                return Term::reserved_zero();
            case Token::Kind::Less: {
                advance();
                const Token& left_tok = peek();
                Term left = parse_term(false);
                if (!left.is_constant()) {
                    throw ParseError(left_tok.line, left_tok.column,
                                     "the left coordinate of a couple must be a constant");
                }
                expect(Token::Kind::Pipe, "'|'");
                Term right = parse_term(false);
                expect(Token::Kind::Greater, "'>'");
                return Term::couple(left, right);
            }
            default:
                throw ParseError(t.line, t.column,
                                 std::string("expected a term, found ") + describe(t.kind));
        }
    }

    std::vector<Term> parse_terms(Token::Kind stop, bool ground) {
        std::vector<Term> out;
        if (peek().kind == stop) return out;
        out.push_back(parse_term(ground));
        while (peek().kind == Token::Kind::Comma) {
            advance();
            out.push_back(parse_term(ground));
        }
        return out;
    }

    Atom parse_atom(bool ground) {
        const Token& name = expect(Token::Kind::Ident, "relation name");
        if (!std::isalpha(static_cast<unsigned char>(name.text[0]))) {
            throw ParseError(name.line, name.column, "relation names must start with a letter");
        }
        expect(Token::Kind::LBracket, "'['");
        std::vector<Term> key = parse_terms(Token::Kind::Semicolon, ground);
        expect(Token::Kind::Semicolon, "';'");
        std::vector<Term> nonkey = parse_terms(Token::Kind::RBracket, ground);
        expect(Token::Kind::RBracket, "']'");
        if (key.empty()) {
            throw ParseError(name.line, name.column,
                             "relation " + name.text + " must have at least one key position");
        }
        RelationSymbol rel{name.text, key.size(), nonkey.size()};
        record_signature(rel, name, false);
        return Atom::of(signatures_.at(name.text), std::move(key), std::move(nonkey));
    }

    Schema collected_schema() const {
        Schema schema;
        for (const auto& entry : signatures_) schema.add(entry.second);
        return schema;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    bool strict_ = false;
    std::map<std::string, RelationSymbol> signatures_;
    std::set<std::string> declared_;
};

}  // namespace

Schema parse_schema(std::string_view text) {
    return Parser(text, nullptr, false).parse_schema_only();
}

Query parse_query(std::string_view text) { return Parser(text, nullptr, false).parse_query(); }

Query parse_query(std::string_view text, const Schema& schema) {
    return Parser(text, &schema, false).parse_query();
}

Database parse_database(std::string_view text) {
    return Parser(text, nullptr, false).parse_database();
}

Database parse_database(std::string_view text, const Schema& schema) {
    return Parser(text, &schema, true).parse_database();
}

std::string serialize(const Query& q) { return q.to_string(); }

std::string serialize(const Database& db) { return db.to_string(); }

}  // namespace cqa
