#pragma once

#include <string>
#include <string_view>

#include "cqa/model.hpp"

namespace cqa {

// Text formats.
//
//   declaration   rel NAME key K val M        (one per line, before any atom)
//   atom          NAME '[' t1,...,tk ';' t1,...,tm ']'
//   query         declarations, then atoms separated by commas, optionally
//                 wrapped in braces; newlines act as whitespace
//   database      declarations, then one fact per line
//
// Terms: identifiers starting with u..z are variables; identifiers starting
// with a..t and digit-initial tokens are constants; 'NAME' is a relation name
// used as data; <c|t> is a couple whose left coordinate is a constant; #0 is
// the reserved padding constant. Signatures are inferred from first use when
// not declared, and checked for consistency afterwards.

Schema parse_schema(std::string_view text);

Query parse_query(std::string_view text);
// Declared signatures from `schema` are checked against use; relations not in
// the schema are still inferred.
Query parse_query(std::string_view text, const Schema& schema);

Database parse_database(std::string_view text);
// With an explicit schema, facts over undeclared relations are an error.
Database parse_database(std::string_view text, const Schema& schema);

std::string serialize(const Query& q);
std::string serialize(const Database& db);

}  // namespace cqa
