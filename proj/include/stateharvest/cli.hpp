/// @file cli.hpp
/// @brief Command-line surface: extract, gen (tcp | scale), check, stats.
///
/// Exit codes: 0 success or equal; 1 check mismatch; 2 parse error
/// (including malformed model files); 3 extraction error, or any warning
/// under --strict-warnings; 4 usage error. The output stream carries only
/// the model or report; diagnostics go to the error stream.

#pragma once

#include "stateharvest/corpus.hpp"
#include "stateharvest/extraction.hpp"
#include "stateharvest/parser.hpp"
#include "stateharvest/state_machine.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace stateharvest {
namespace detail {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitExtractionError = 3;
inline constexpr int kExitUsage = 4;

/// Reads STATE_HARVEST_THREADS: absent -> 0 (implementation default),
/// positive integer -> that cap, anything else -> usage error (nullopt).
inline std::optional<unsigned> threads_from_env(std::ostream& err) {
    const char* value = std::getenv("STATE_HARVEST_THREADS");
    if (!value || *value == '\0') return 0u;
    unsigned long parsed = 0;
    for (const char* p = value; *p; ++p) {
        if (*p < '0' || *p > '9') {
            err << "error: STATE_HARVEST_THREADS must be a positive integer, got '" << value
                << "'\n";
            return std::nullopt;
        }
        parsed = parsed * 10 + static_cast<unsigned long>(*p - '0');
        if (parsed > 1u << 20) break;  // avoid overflow; anything this large is capped below
    }
    if (parsed == 0) {
        err << "error: STATE_HARVEST_THREADS must be a positive integer, got '" << value << "'\n";
        return std::nullopt;
    }
    if (parsed > 1024) parsed = 1024;
    return static_cast<unsigned>(parsed);
}

/// Expands CLI path arguments into source files: files are taken as given,
/// directories are searched recursively for *.java. Returns false on a
/// missing path or unreadable file (usage error).
inline bool collect_sources(const std::vector<std::string>& paths, std::vector<SourceFile>& files,
                            std::ostream& err) {
    namespace fs = std::filesystem;
    std::vector<std::string> discovered;
    for (const auto& arg : paths) {
        std::error_code ec;
        fs::file_status status = fs::status(arg, ec);
        if (ec || status.type() == fs::file_type::not_found) {
            err << "error: path does not exist: " << arg << "\n";
            return false;
        }
        if (fs::is_directory(status)) {
            for (const auto& entry : fs::recursive_directory_iterator(arg)) {
                if (entry.is_regular_file() && entry.path().extension() == ".java") {
                    discovered.push_back(entry.path().string());
                }
            }
        } else {
            discovered.push_back(arg);
        }
    }
    for (auto& path : discovered) {
        std::ifstream is(path, std::ios::binary);
        if (!is) {
            err << "error: cannot read file: " << path << "\n";
            return false;
        }
        std::ostringstream buffer;
        buffer << is.rdbuf();
        files.push_back(SourceFile{std::move(path), buffer.str()});
    }
    return true;
}

inline bool write_text(const std::string& path, const std::string& text, std::ostream& err) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        err << "error: cannot write file: " << path << "\n";
        return false;
    }
    os << text;
    os.flush();
    if (!os) {
        err << "error: cannot write file: " << path << "\n";
        return false;
    }
    return true;
}

inline bool read_text(const std::string& path, std::string& text, std::ostream& err) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        err << "error: cannot read file: " << path << "\n";
        return false;
    }
    std::ostringstream buffer;
    buffer << is.rdbuf();
    text = buffer.str();
    return true;
}

struct ExtractFlags {
    std::vector<std::string> paths;
    std::string out_file;  // empty = stdout
    std::string format = "json";
    std::string tasks = "actions";
    std::string root_class = "State";
    bool lenient = false;
    bool strict_warnings = false;
};

inline int do_extract(const ExtractFlags& flags, unsigned threads, std::ostream& out,
                      std::ostream& err) {
    std::vector<SourceFile> files;
    if (!collect_sources(flags.paths, files, err)) return kExitUsage;

    ProjectParseResult parsed;
    try {
        parsed = parse_project(std::move(files),
                               flags.lenient ? ParseMode::Lenient : ParseMode::Strict, threads);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    bool any_warning = !parsed.warnings.empty();
    for (const auto& w : parsed.warnings) err << w.to_line() << "\n";
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << "error: " << e.what() << "\n";
        return kExitParseError;
    }

    TaskLevel tasks = flags.tasks == "core"       ? TaskLevel::Core
                      : flags.tasks == "triggers" ? TaskLevel::Triggers
                                                  : TaskLevel::Actions;
    ExtractionResult result;
    try {
        result = build_state_machine(*parsed.project, flags.root_class, tasks);
    } catch (const ExtractionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitExtractionError;
    }
    any_warning = any_warning || !result.warnings.empty();
    for (const auto& w : result.warnings) err << w.to_line() << "\n";

    std::string text =
        flags.format == "dot" ? to_dot(result.machine) : to_json(result.machine) + "\n";
    if (flags.out_file.empty()) {
        out << text;
    } else if (!write_text(flags.out_file, text, err)) {
        return kExitUsage;
    }
    if (flags.strict_warnings && any_warning) return kExitExtractionError;
    return kExitOk;
}

inline int do_check(const std::string& model_path, const std::string& golden_path,
                    std::ostream& out, std::ostream& err) {
    std::string model_text;
    std::string golden_text;
    if (!read_text(model_path, model_text, err)) return kExitUsage;
    if (!read_text(golden_path, golden_text, err)) return kExitUsage;
    try {
        StateMachine model = from_json(model_text);
        StateMachine golden = from_json(golden_text);
        MismatchReport report = compare(model, golden);
        if (report.equal()) return kExitOk;
        out << report.to_string();
        return kExitMismatch;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParseError;
    }
}

inline int do_stats(const std::vector<std::string>& paths, unsigned threads, std::ostream& out,
                    std::ostream& err) {
    std::vector<SourceFile> files;
    if (!collect_sources(paths, files, err)) return kExitUsage;

    auto start = std::chrono::steady_clock::now();
    ProjectParseResult parsed;
    try {
        parsed = parse_project(std::move(files), ParseMode::Strict, threads);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    auto elapsed = std::chrono::steady_clock::now() - start;
    for (const auto& w : parsed.warnings) err << w.to_line() << "\n";
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << "error: " << e.what() << "\n";
        return kExitParseError;
    }

    GraphCounts counts = count_graph(*parsed.project);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    out << "files: " << counts.files << "\n"
        << "classes: " << counts.classes << "\n"
        << "methods: " << counts.methods << "\n"
        << "statement-nodes: " << counts.statement_nodes << "\n"
        << "expression-nodes: " << counts.expression_nodes << "\n"
        << "nodes-plus-edges: " << counts.nodes_plus_edges() << "\n"
        << "parse-time-ms: " << ms << "\n";
    return kExitOk;
}

}  // namespace detail

/// Runs the command line (args without the program name). Streams are
/// injectable so tests can run the CLI in-process.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;

    CLI::App app{"Recovers state machine models from convention-following Java source"};
    app.name("stateharvest");
    app.require_subcommand(1);

    ExtractFlags extract_flags;
    CLI::App* extract = app.add_subcommand("extract", "Extract a state machine from Java sources");
    extract->add_option("paths", extract_flags.paths, "Source files or directories")->required();
    extract->add_option("--out", extract_flags.out_file, "Write the model to this file instead of stdout");
    extract->add_option("--format", extract_flags.format, "Output format")
        ->check(CLI::IsMember({"json", "dot"}))
        ->capture_default_str();
    extract->add_option("--tasks", extract_flags.tasks, "Cumulative task selection")
        ->check(CLI::IsMember({"core", "triggers", "actions"}))
        ->capture_default_str();
    extract->add_option("--root-class", extract_flags.root_class, "Root state class name")
        ->capture_default_str();
    extract->add_flag("--lenient", extract_flags.lenient,
                      "Record unparseable member bodies as opaque instead of failing");
    extract->add_flag("--strict-warnings", extract_flags.strict_warnings,
                      "Treat any warning as an error (exit 3)");

    CLI::App* gen = app.add_subcommand("gen", "Generate a source corpus with its golden machine");
    gen->require_subcommand(1);
    std::string gen_out;
    std::vector<std::uint32_t> deep_args;
    CLI::App* gen_tcp = gen->add_subcommand("tcp", "The hand-planned TCP tier");
    gen_tcp->add_option("--deep", deep_args,
                        "Extra abstract depth and extra block nesting (two values)")
        ->expected(2);
    gen_tcp->add_option("--out", gen_out, "Output directory")->required();

    ScaleSpec scale_spec;
    CLI::App* gen_scale = gen->add_subcommand("scale", "The seeded large tier");
    gen_scale->add_option("--states", scale_spec.num_states, "Number of state classes")
        ->required()
        ->check(CLI::PositiveNumber);
    gen_scale->add_option("--per-state", scale_spec.transitions_per_state,
                          "Transitions planted per state")
        ->required()
        ->check(CLI::PositiveNumber);
    gen_scale->add_option("--nesting", scale_spec.max_nesting, "Maximum planted nesting depth")
        ->required()
        ->check(CLI::PositiveNumber);
    gen_scale->add_option("--seed", scale_spec.seed, "Generator seed")->capture_default_str();
    gen_scale->add_option("--out", gen_out, "Output directory")->required();

    std::string check_model;
    std::string check_golden;
    CLI::App* check = app.add_subcommand("check", "Compare two model files");
    check->add_option("--model", check_model, "Model under test")->required();
    check->add_option("--golden", check_golden, "Golden model")->required();

    std::vector<std::string> stats_paths;
    CLI::App* stats = app.add_subcommand("stats", "Parse sources and print size metrics");
    stats->add_option("paths", stats_paths, "Source files or directories")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("stateharvest");
    for (const auto& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::optional<unsigned> threads = threads_from_env(err);
    if (!threads) return kExitUsage;

    try {
        if (extract->parsed()) return do_extract(extract_flags, *threads, out, err);
        if (gen->parsed()) {
            GoldenBundle bundle;
            if (gen_tcp->parsed()) {
                TcpSpec spec;
                if (!deep_args.empty()) {
                    spec.extra_depth = deep_args[0];
                    spec.extra_nesting = deep_args[1];
                }
                bundle = emit_tcp(spec);
            } else {
                bundle = emit_scale(scale_spec);
            }
            write_bundle(bundle, gen_out);
            return kExitOk;
        }
        if (check->parsed()) return do_check(check_model, check_golden, out, err);
        if (stats->parsed()) return do_stats(stats_paths, *threads, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace stateharvest
