// Acceptance gate: one line per criterion (AC1..AC9), pass or FAIL with the
// measured values, nonzero exit if anything fails. argv[1] is the CLI binary.
//
// End-to-end criteria drive the installed binary through a shell; fixture
// and property criteria link the library directly.

#include "stateharvest/corpus.hpp"
#include "stateharvest/extraction.hpp"
#include "stateharvest/parser.hpp"
#include "stateharvest/state_machine.hpp"

#include <sys/resource.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace stateharvest;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;

struct ToolResult {
    int code = -1;
    std::string out;
};

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << is.rdbuf();
    return buffer.str();
}

// Runs the CLI through the shell with stdout captured and stderr passed
// through. The default prefix pins the thread env var to "absent" so results
// never depend on the ambient environment.
ToolResult run_tool(const std::vector<std::string>& args,
                    const std::string& env_prefix = "env -u STATE_HARVEST_THREADS") {
    static int invocation = 0;
    fs::path out_file = g_work / ("cmd_out_" + std::to_string(invocation++) + ".txt");

    std::string cmd = env_prefix + " '" + g_cli + "'";
    for (const auto& arg : args) cmd += " '" + arg + "'";
    cmd += " > '" + out_file.string() + "'";

    int status = std::system(cmd.c_str());
    ToolResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_file);
    return result;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Criterion {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += message;
        }
    }
    void note(const std::string& message) {
        if (!detail.empty()) detail += "; ";
        detail += message;
    }
};

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

// Shared pipeline artifacts, produced by AC1/AC5/AC6 and reused later.
fs::path g_tcp_dir;
fs::path g_deep_dir;
fs::path g_scale_dir;
double g_scale_extract_seconds = 0.0;

const std::vector<std::string> kScaleFlags = {"--states", "300", "--per-state", "4",
                                              "--nesting", "8", "--seed", "42"};

Criterion ac1_tcp_golden() {
    Criterion c;
    auto start = std::chrono::steady_clock::now();

    g_tcp_dir = g_work / "tcp";
    c.require(run_tool({"gen", "tcp", "--out", g_tcp_dir.string()}).code == 0, "gen failed");
    c.require(run_tool({"extract", (g_tcp_dir / "src").string(), "--tasks", "actions", "--out",
                        (g_tcp_dir / "actual.json").string()})
                      .code == 0,
              "extract failed");

    StateMachine machine = from_json(read_file(g_tcp_dir / "actual.json"));
    c.require(machine.states.size() == 11, "expected 11 states, got " +
                                               std::to_string(machine.states.size()));
    c.require(machine.transitions.size() == 21, "expected 21 transitions, got " +
                                                    std::to_string(machine.transitions.size()));

    ToolResult check = run_tool({"check", "--model", (g_tcp_dir / "actual.json").string(),
                                 "--golden", (g_tcp_dir / "golden.statemachine.json").string()});
    c.require(check.code == 0, "check exited " + std::to_string(check.code) + ": " + check.out);

    double elapsed = seconds_since(start);
    c.require(elapsed < 1.0, "took " + format_seconds(elapsed));
    c.note(std::to_string(machine.states.size()) + " states, " +
           std::to_string(machine.transitions.size()) + " transitions, " +
           format_seconds(elapsed));
    return c;
}

Criterion ac2_synsent_fidelity() {
    Criterion c;
    StateMachine machine = from_json(read_file(g_tcp_dir / "actual.json"));

    std::set<std::tuple<std::string, std::string, std::string>> found;
    for (const auto& t : machine.transitions) {
        if (t.src != "SynSent") continue;
        found.insert({t.dst, t.trigger.value_or("<unset>"), t.action.value_or("<unset>")});
    }
    std::set<std::tuple<std::string, std::string, std::string>> expected = {
        {"Closed", "close", "--"},
        {"SynReceived", "SYN", "SYN_ACK"},
        {"Established", "SYN_ACK", "ACK"},
    };
    c.require(found == expected, "SynSent transitions do not match the reference triples");
    c.note(std::to_string(found.size()) + " SynSent transitions, exact triple match");
    return c;
}

// Parses fixture files in-process and extracts with the library directly.
StateMachine extract_fixture(std::vector<SourceFile> files) {
    auto parsed = parse_project(std::move(files));
    if (!parsed.ok()) throw std::runtime_error("fixture failed to parse");
    return build_state_machine(*parsed.project).machine;
}

Criterion ac3_trigger_rules() {
    Criterion c;
    const char* root = "abstract class State { }";
    auto trigger_of = [&](const std::string& method) {
        StateMachine m = extract_fixture(
            {{"State.java", root},
             {"A.java", "class A extends State {\n" + method + "\n}"},
             {"B.java", "class B extends State { }"}});
        if (m.transitions.size() != 1 || !m.transitions[0].trigger) return std::string("<none>");
        return *m.transitions[0].trigger;
    };

    std::string r1 = trigger_of("void close() { B.Instance().activate(); }");
    std::string r2 = trigger_of(
        "void run() { switch (f()) { case SYN: B.Instance().activate(); break; } }");
    std::string r3 = trigger_of(
        "void run() { try { g(); } catch (TimeoutException e) { B.Instance().activate(); } }");
    std::string r4 = trigger_of("void run() { B.Instance().activate(); }");

    c.require(r1 == "close", "method rule gave '" + r1 + "'");
    c.require(r2 == "SYN", "switch rule gave '" + r2 + "'");
    c.require(r3 == "TimeoutException", "catch rule gave '" + r3 + "'");
    c.require(r4 == "--", "fallback rule gave '" + r4 + "'");
    c.note("close / SYN / TimeoutException / --");
    return c;
}

Criterion ac4_action_rules() {
    Criterion c;
    const char* root = "abstract class State { }";
    auto action_of = [&](const std::string& method) {
        StateMachine m = extract_fixture(
            {{"State.java", root},
             {"A.java", "class A extends State {\n" + method + "\n}"},
             {"B.java", "class B extends State { }"}});
        if (m.transitions.size() != 1 || !m.transitions[0].action) return std::string("<none>");
        return *m.transitions[0].action;
    };

    std::string same_list = action_of("void close() { send(FIN); B.Instance().activate(); }");
    std::string no_send = action_of("void close() { B.Instance().activate(); }");
    std::string sibling = action_of(
        "void close() { { send(FIN); } B.Instance().activate(); }");

    c.require(same_list == "FIN", "same-list send gave '" + same_list + "'");
    c.require(no_send == "--", "missing send gave '" + no_send + "'");
    c.require(sibling == "--", "nested sibling send gave '" + sibling + "'");
    c.note("FIN / -- / --");
    return c;
}

Criterion ac5_structural_stability() {
    Criterion c;
    auto start = std::chrono::steady_clock::now();

    g_deep_dir = g_work / "tcp_deep";
    c.require(run_tool({"gen", "tcp", "--deep", "5", "6", "--out", g_deep_dir.string()}).code == 0,
              "gen failed");
    c.require(run_tool({"extract", (g_deep_dir / "src").string(), "--out",
                        (g_deep_dir / "actual.json").string()})
                      .code == 0,
              "extract failed");

    ToolResult check = run_tool({"check", "--model", (g_deep_dir / "actual.json").string(),
                                 "--golden", (g_tcp_dir / "golden.statemachine.json").string()});
    c.require(check.code == 0, "deep corpus diverged from the flat golden: " + check.out);

    double elapsed = seconds_since(start);
    c.require(elapsed < 2.0, "took " + format_seconds(elapsed));
    c.note("depth +5, nesting +6, equal to flat golden, " + format_seconds(elapsed));
    return c;
}

Criterion ac6_scale_correctness() {
    Criterion c;

    g_scale_dir = g_work / "scale";
    std::vector<std::string> gen = {"gen", "scale"};
    gen.insert(gen.end(), kScaleFlags.begin(), kScaleFlags.end());
    gen.insert(gen.end(), {"--out", g_scale_dir.string()});
    c.require(run_tool(gen).code == 0, "gen failed");

    auto start = std::chrono::steady_clock::now();
    c.require(run_tool({"extract", (g_scale_dir / "src").string(), "--out",
                        (g_scale_dir / "actual.json").string()})
                      .code == 0,
              "extract failed");
    g_scale_extract_seconds = seconds_since(start);

    StateMachine machine = from_json(read_file(g_scale_dir / "actual.json"));
    c.require(machine.states.size() == 300, "expected 300 states, got " +
                                                std::to_string(machine.states.size()));
    c.require(machine.transitions.size() == 1200, "expected 1200 transitions, got " +
                                                      std::to_string(machine.transitions.size()));

    ToolResult check = run_tool({"check", "--model", (g_scale_dir / "actual.json").string(),
                                 "--golden", (g_scale_dir / "golden.statemachine.json").string()});
    c.require(check.code == 0, "extraction diverged from the planted golden: " + check.out);
    c.note("300 states, 1200 transitions, planted golden matched");
    return c;
}

Criterion ac7_performance() {
    Criterion c;

    ToolResult stats = run_tool({"stats", (g_scale_dir / "src").string()});
    c.require(stats.code == 0, "stats failed");

    long long nodes_plus_edges = -1;
    std::istringstream lines(stats.out);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("nodes-plus-edges: ", 0) == 0) {
            nodes_plus_edges = std::stoll(line.substr(18));
        }
    }
    c.require(nodes_plus_edges >= 500000 && nodes_plus_edges <= 2000000,
              "corpus size " + std::to_string(nodes_plus_edges) +
                  " outside [500000, 2000000]");

    c.require(g_scale_extract_seconds < 30.0,
              "extract took " + format_seconds(g_scale_extract_seconds));

    struct rusage usage{};
    getrusage(RUSAGE_CHILDREN, &usage);
    long long peak_kb = usage.ru_maxrss;  // KiB on this platform
    c.require(peak_kb > 0 && peak_kb < 2LL * 1024 * 1024,
              "peak child rss " + std::to_string(peak_kb) + " KiB");

    c.note(std::to_string(nodes_plus_edges) + " nodes+edges, extract " +
           format_seconds(g_scale_extract_seconds) + ", peak rss " +
           std::to_string(peak_kb / 1024) + " MiB");
    return c;
}

Criterion ac8_determinism() {
    Criterion c;

    auto extract_text = [&](const fs::path& src, const std::string& format,
                            const std::string& env_prefix) {
        return run_tool({"extract", src.string(), "--format", format},
                        env_prefix.empty() ? "env -u STATE_HARVEST_THREADS" : env_prefix)
            .out;
    };

    std::string tcp_json_a = extract_text(g_tcp_dir / "src", "json", "");
    std::string tcp_json_b = extract_text(g_tcp_dir / "src", "json", "");
    std::string tcp_dot_a = extract_text(g_tcp_dir / "src", "dot", "");
    std::string tcp_dot_b = extract_text(g_tcp_dir / "src", "dot", "");
    c.require(!tcp_json_a.empty() && tcp_json_a == tcp_json_b, "tcp json runs differ");
    c.require(!tcp_dot_a.empty() && tcp_dot_a == tcp_dot_b, "tcp dot runs differ");

    std::string scale_json_a = extract_text(g_scale_dir / "src", "json", "");
    std::string scale_json_b = extract_text(g_scale_dir / "src", "json", "");
    std::string scale_dot_a = extract_text(g_scale_dir / "src", "dot", "");
    std::string scale_dot_b = extract_text(g_scale_dir / "src", "dot", "");
    c.require(scale_json_a == scale_json_b, "scale json runs differ");
    c.require(scale_dot_a == scale_dot_b, "scale dot runs differ");

    std::string single_thread =
        extract_text(g_scale_dir / "src", "json", "env STATE_HARVEST_THREADS=1");
    c.require(single_thread == scale_json_a, "single-threaded output differs");

    fs::path regen = g_work / "scale_regen";
    std::vector<std::string> gen = {"gen", "scale"};
    gen.insert(gen.end(), kScaleFlags.begin(), kScaleFlags.end());
    gen.insert(gen.end(), {"--out", regen.string()});
    c.require(run_tool(gen).code == 0, "regen failed");
    c.require(read_file(regen / "golden.statemachine.json") ==
                  read_file(g_scale_dir / "golden.statemachine.json"),
              "regenerated golden differs");

    c.note("json+dot stable across reruns and thread caps");
    return c;
}

// Independent state-count oracle: repeatedly sweep the class list, growing
// the set of root-reaching names until a whole pass adds nothing.
std::set<std::string> fixpoint_states(const Project& project, const std::string& root) {
    struct Decl {
        std::string name;
        std::string super;
        bool is_abstract;
    };
    std::vector<Decl> decls;
    for (const auto& unit : project.units()) {
        for (const auto& type : unit.types) {
            if (const auto* cls = std::get_if<ClassDecl>(&type)) {
                decls.push_back({cls->name, cls->superclass_name.value_or(""), cls->is_abstract});
            }
        }
    }

    std::set<std::string> reaches = {root};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& d : decls) {
            if (!reaches.count(d.super) || reaches.count(d.name)) continue;
            reaches.insert(d.name);
            grew = true;
        }
    }
    std::set<std::string> states;
    for (const auto& d : decls) {
        if (d.name != root && !d.is_abstract && reaches.count(d.name)) states.insert(d.name);
    }
    return states;
}

Criterion ac9_properties() {
    Criterion c;
    const int kCases = 10000;
    std::mt19937_64 dims(20260814u);
    int failures = 0;
    std::string first_failure;

    auto fail_case = [&](std::uint64_t id, const std::string& what) {
        ++failures;
        if (first_failure.empty()) {
            first_failure = "case " + std::to_string(id) + ": " + what;
        }
    };

    for (int i = 0; i < kCases; ++i) {
        ScaleSpec spec;
        spec.num_states = 1 + static_cast<std::uint32_t>(dims() % 20);
        spec.transitions_per_state = 1 + static_cast<std::uint32_t>(dims() % 4);
        spec.max_nesting = 1 + static_cast<std::uint32_t>(dims() % 4);
        spec.seed = 1000 + static_cast<std::uint64_t>(i);
        std::uint32_t wrap = 1 + static_cast<std::uint32_t>(dims() % 3);

        GoldenBundle bundle = emit_scale(spec);
        std::vector<SourceFile> files;
        for (const auto& f : bundle.files) files.push_back({f.path, f.text});
        auto parsed = parse_project(std::move(files));
        if (!parsed.ok()) {
            fail_case(spec.seed, "corpus failed to parse");
            continue;
        }
        StateMachine machine = build_state_machine(*parsed.project).machine;

        // Referential closure.
        std::set<std::string> names;
        for (const auto& s : machine.states) names.insert(s.name);
        for (const auto& t : machine.transitions) {
            if (!names.count(t.src) || !names.count(t.dst)) {
                fail_case(spec.seed, "transition references an unknown state");
                break;
            }
        }

        // State-count law against the sweep-to-fixpoint oracle.
        std::set<std::string> oracle = fixpoint_states(*parsed.project, "State");
        if (oracle != names || names.size() != spec.num_states) {
            fail_case(spec.seed, "state set disagrees with the fixpoint oracle");
        }

        // Planted golden equivalence.
        if (!compare(machine, bundle.golden).equal()) {
            fail_case(spec.seed, "extraction differs from the planted golden");
        }

        // Canonicalize idempotence.
        if (canonicalize(machine) != machine) {
            fail_case(spec.seed, "extractor output is not canonical");
        }

        // Compare order-insensitivity on a deterministic permutation.
        StateMachine permuted = machine;
        std::mt19937_64 shuffle_rng(spec.seed);
        std::shuffle(permuted.states.begin(), permuted.states.end(), shuffle_rng);
        std::shuffle(permuted.transitions.begin(), permuted.transitions.end(), shuffle_rng);
        if (!compare(permuted, machine).equal()) {
            fail_case(spec.seed, "comparison is order-sensitive");
        }

        // Nesting invariance: extra block wrapping must not change the machine.
        GoldenBundle wrapped = emit_scale(spec, ScaleOptions{wrap});
        std::vector<SourceFile> wrapped_files;
        for (const auto& f : wrapped.files) wrapped_files.push_back({f.path, f.text});
        auto wrapped_parsed = parse_project(std::move(wrapped_files));
        if (!wrapped_parsed.ok()) {
            fail_case(spec.seed, "wrapped corpus failed to parse");
            continue;
        }
        StateMachine wrapped_machine = build_state_machine(*wrapped_parsed.project).machine;
        if (wrapped_machine != machine) {
            fail_case(spec.seed, "block wrapping changed the machine");
        }
    }

    c.require(failures == 0,
              std::to_string(failures) + " of " + std::to_string(kCases) +
                  " cases failed; first: " + first_failure);
    c.note(std::to_string(kCases) + " randomized cases, 6 properties each");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance_test <path-to-cli-binary>\n";
        return 2;
    }
    g_cli = argv[1];
    g_work = fs::temp_directory_path() / "stateharvest_acceptance";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    struct Entry {
        const char* name;
        const char* title;
        Criterion (*fn)();
    };
    const Entry entries[] = {
        {"AC1", "reference corpus reproduction", ac1_tcp_golden},
        {"AC2", "SynSent transition fidelity", ac2_synsent_fidelity},
        {"AC3", "trigger rule suite", ac3_trigger_rules},
        {"AC4", "action rule suite", ac4_action_rules},
        {"AC5", "structural variant stability", ac5_structural_stability},
        {"AC6", "planted-oracle scale correctness", ac6_scale_correctness},
        {"AC7", "performance at target scale", ac7_performance},
        {"AC8", "byte-level determinism", ac8_determinism},
        {"AC9", "randomized property suite", ac9_properties},
    };

    int failed = 0;
    for (const auto& entry : entries) {
        Criterion c;
        try {
            c = entry.fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::cout << entry.name << " " << entry.title << ": " << (c.ok ? "pass" : "FAIL");
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n" << std::flush;
        failed += c.ok ? 0 : 1;
    }

    fs::remove_all(g_work);
    if (failed != 0) {
        std::cout << failed << " criteria failed\n";
        return 1;
    }
    return 0;
}
