#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "cqa/classify.hpp"
#include "cqa/encode.hpp"
#include "cqa/errors.hpp"
#include "cqa/minimize.hpp"
#include "cqa/parse.hpp"
#include "cqa/repairs.hpp"
#include "cqa/verify.hpp"

namespace {

// Exit codes: 0 success, 1 usage or parse trouble, 2 precondition or resource
// limit. verify additionally exits 2 when any trial fails.

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query/database argument is a file path, "-" for stdin, or (when it
// contains query syntax such as '[' or '{') the literal text itself.
std::string read_input(const std::string& arg) {
    if (arg == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(arg);
    if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    if (arg.find_first_of("[;{") != std::string::npos) return arg;
    throw UsageError("cannot open " + arg);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t parse_cap(const std::string& text, const std::string& what) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw UsageError(what + " is not a non-negative integer: " + text);
    }
    return value;
}

std::uint64_t default_cap() {
    if (const char* env = std::getenv("CQA_REPAIR_CAP")) {
        return parse_cap(env, "CQA_REPAIR_CAP");
    }
    return cqa::kDefaultRepairCap;
}

cqa::Query load_query(const std::string& arg, const std::string& schema_file) {
    std::string text = read_input(arg);
    if (schema_file.empty()) return cqa::parse_query(text);
    return cqa::parse_query(text, cqa::parse_schema(read_file(schema_file)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repair counting for Boolean conjunctive queries under primary keys"};
    app.require_subcommand(1);
    int rc = 0;

    auto* classify = app.add_subcommand(
        "classify", "decide FP / SharpPHard / TriviallyZero for a simple-key query");
    std::string classify_query, classify_schema;
    bool classify_json = false, classify_se3 = false;
    std::size_t classify_max_atoms = cqa::kDefaultMinimizeCap;
    classify->add_option("query", classify_query, "query file, inline text, or - for stdin")
        ->required();
    classify->add_option("--schema", classify_schema, "relation declarations file");
    auto* json_flag = classify->add_flag("--json", classify_json, "machine-readable report");
    classify
        ->add_flag("--se3", classify_se3,
                   "also replay the grounding steps on the self-join-free rewrite")
        ->excludes(json_flag);
    classify->add_option("--max-atoms", classify_max_atoms, "minimization size cap");
    classify->callback([&] {
        cqa::Query q = load_query(classify_query, classify_schema);
        cqa::MinimizeOptions options{classify_max_atoms};
        if (classify_se3) {
            std::cout << cqa::report_text(cqa::demonstrate_se3(q, options));
            return;
        }
        cqa::Classification c = cqa::classify_skbcq(q, options);
        if (classify_json) {
            std::cout << cqa::report_json(c) << "\n";
        } else {
            std::cout << cqa::report_text(c);
        }
    });

    auto* encode = app.add_subcommand("encode", "rewrite a query into the single-relation form");
    std::string encode_query, encode_schema;
    bool encode_old = false, encode_new = false, encode_reserved = false;
    encode->add_option("query", encode_query, "query file, inline text, or - for stdin")
        ->required();
    encode->add_option("--schema", encode_schema, "relation declarations file");
    auto* old_flag = encode->add_flag("--old", encode_old, "pad non-key positions with zeros");
    encode->add_flag("--new", encode_new, "pad non-key positions with fresh variables (default)")
        ->excludes(old_flag);
    encode->add_flag("--reserved-zero", encode_reserved,
                     "pad with the reserved constant #0 instead of the symbol 0");
    encode->callback([&] {
        cqa::Query q = load_query(encode_query, encode_schema);
        cqa::EncodingOptions options;
        options.reserved_zero = encode_reserved;
        cqa::EncodingContext ctx(q.schema(), options);
        cqa::Query out = encode_old ? cqa::old_encode(q, ctx) : cqa::new_encode(q, ctx);
        std::cout << cqa::serialize(out) << "\n";
    });

    auto* minimize = app.add_subcommand("minimize", "contract a query to a minimal equivalent");
    std::string minimize_query, minimize_schema;
    std::size_t minimize_max_atoms = cqa::kDefaultMinimizeCap;
    minimize->add_option("query", minimize_query, "query file, inline text, or - for stdin")
        ->required();
    minimize->add_option("--schema", minimize_schema, "relation declarations file");
    minimize->add_option("--max-atoms", minimize_max_atoms, "minimization size cap");
    minimize->callback([&] {
        cqa::Query q = load_query(minimize_query, minimize_schema);
        std::cout << cqa::serialize(cqa::minimize(q, cqa::MinimizeOptions{minimize_max_atoms}))
                  << "\n";
    });

    auto* count = app.add_subcommand(
        "count", "count the repairs of a database that satisfy a query");
    std::string count_query, count_db, count_schema;
    std::uint64_t count_cap = 0;
    count->add_option("query", count_query, "query file, inline text, or - for stdin")->required();
    count->add_option("database", count_db, "database file, inline text, or - for stdin")
        ->required();
    count->add_option("--schema", count_schema, "relation declarations file");
    auto* cap_option =
        count->add_option("--cap", count_cap, "repair enumeration cap (default CQA_REPAIR_CAP)");
    count->callback([&] {
        cqa::Query q = load_query(count_query, count_schema);
        cqa::Database db = cqa::parse_database(read_input(count_db), q.schema());
        cqa::RepairOptions options{cap_option->count() > 0 ? count_cap : default_cap()};
        std::cout << cqa::count_satisfying(db, q, options) << "\n";
    });

    auto* verify = app.add_subcommand(
        "verify", "randomized cross-checks of the two count-preserving reductions");
    int verify_lemma = 0;
    std::size_t verify_trials = 1000;
    std::uint64_t verify_seed = 42;
    cqa::HarnessBounds bounds;
    verify->add_option("--lemma", verify_lemma, "which reduction to drive: 1 or 2")
        ->required()
        ->check(CLI::Range(1, 2));
    verify->add_option("--trials", verify_trials, "number of random instances");
    verify->add_option("--seed", verify_seed, "master seed");
    verify->add_option("--max-blocks", bounds.max_blocks, "database blocks per instance");
    verify->add_option("--max-block-size", bounds.max_block_size, "facts per block");
    verify->callback([&] {
        bounds.repair_cap = default_cap();
        cqa::VerifyReport report = verify_lemma == 2
                                       ? cqa::verify_lemma2(verify_trials, verify_seed, bounds)
                                       : cqa::verify_lemma1(verify_trials, verify_seed, bounds);
        std::cout << report.summary();
        if (!report.all_passed()) rc = 2;
    });

    auto* demo = app.add_subcommand(
        "demo-flaw", "show how zero padding loses databases that fresh padding keeps");
    demo->callback([] { std::cout << cqa::demo_flaw_report(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cqa::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cqa::RepairSpaceTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cqa::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cqa::ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
