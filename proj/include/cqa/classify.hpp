#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqa/encode.hpp"
#include "cqa/minimize.hpp"
#include "cqa/model.hpp"

namespace cqa {

enum class Verdict { FP, SharpPHard, TriviallyZero };

// CLI spelling: "FP", "SharpPHard", "TriviallyZero".
std::string_view verdict_token(Verdict v);
// JSON spelling: "fp", "sharp-p-hard", "trivially-zero".
std::string_view verdict_json(Verdict v);

struct Witness {
    Atom first;
    Atom second;
};

// One grounding step of simplify: at `position` of `trigger` (an atom whose
// key had become fully constant) the variable was replaced everywhere by a
// fresh constant. `trigger_origin` indexes the atom's ancestor in the input
// query; `after` is the whole query right after the step.
struct GroundingStep {
    Atom trigger;
    std::size_t trigger_origin = 0;
    std::size_t position = 0;
    std::string variable;
    Term replacement;
    Query after;
};

struct SimplifyTrace {
    Query result;
    std::vector<GroundingStep> steps;
    // Input atom paired with its final form. Grounding substitutes constants
    // that occur nowhere else, so no two atoms ever merge and the pairing is
    // a bijection.
    std::vector<std::pair<Atom, Atom>> correspondence;
};

// Input must use a single relation, with a constant first key position in
// every atom. Repeats while possible, at the least eligible (atom, non-key
// position) in canonical order: if an atom's key is entirely constant and it
// carries a variable in a non-key position, substitute that variable
// throughout the query by a fresh constant c#1, c#2, ...
SimplifyTrace simplify_traced(const Query& q);
Query simplify(const Query& q);

// Atoms of a simplified query that have both a variable in the second key
// position and a variable among the non-key positions. The easiness decision
// below does not depend on this shape; the check is advisory.
std::vector<Atom> simplified_shape_violations(const Query& simplified);

// Simplifies q, then looks for the least pair of distinct complex-part atoms
// whose second key positions hold distinct variables and which are connected
// in the intersection graph. Such a pair makes repair counting hard; its
// absence makes it tractable.
std::optional<Witness> hardness_witness(const Query& q);
bool is_easy(const Query& q);

struct Classification {
    Verdict verdict = Verdict::FP;
    Query input;
    std::optional<Query> chased;      // empty: unsatisfiable over consistent databases
    std::optional<Query> minimized;
    std::optional<Query> encoded;     // fresh-variable padding
    std::optional<Query> simplified;
    std::optional<Witness> witness;   // present exactly for SharpPHard
    std::vector<std::string> advisory;
};

// The full pipeline for queries whose relations all have one key position:
// key_chase (unsatisfiable => TriviallyZero), minimize, encode with fresh
// padding over `schema` merged with the query's relations, then decide by
// hardness_witness on the simplified encoding.
Classification classify_skbcq(const Query& q, const Schema& schema,
                              const MinimizeOptions& options = {});
Classification classify_skbcq(const Query& q, const MinimizeOptions& options = {});

std::string report_text(const Classification& c);
// {verdict, trace[], query, encoded_query}, keys in that order.
std::string report_json(const Classification& c);

// A grounding step of the simplified encoding replayed against the
// self-join-free form of the minimized query. `rewrite_atom` is empty when
// the grounded variable is padding, which the rewrite does not contain.
struct Se3Step {
    Atom trigger;
    std::string variable;
    Term replacement;
    std::optional<Atom> rewrite_atom;
};

struct Se3Trace {
    Classification classification;
    std::optional<Query> rewritten;   // self-join-free form of the minimized query
    std::vector<Se3Step> steps;
    std::optional<Witness> rewritten_witness;  // witness mapped onto rewritten atoms
};

// Expository companion of classify_skbcq: shows, step by step, where each
// grounding of the simplification would fire on the self-join-free rewrite,
// and maps a hardness witness back onto rewrite atoms.
Se3Trace demonstrate_se3(const Query& q, const Schema& schema,
                         const MinimizeOptions& options = {});
Se3Trace demonstrate_se3(const Query& q, const MinimizeOptions& options = {});
std::string report_text(const Se3Trace& t);

// Deterministic end-to-end demonstration that zero padding breaks the
// encoding: the two-atom example query, its two encodings, a three-fact
// database with no preimage under the zero-padded fact map, the two complex
// parts, and the resulting verdict mismatch.
std::string demo_flaw_report();

}  // namespace cqa
