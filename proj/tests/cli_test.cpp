#include "stateharvest/cli.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace stateharvest;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult result;
    result.code = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

// Restores the thread-cap variable on scope exit so tests stay independent.
struct ThreadsEnvGuard {
    ThreadsEnvGuard() {
        const char* value = std::getenv("STATE_HARVEST_THREADS");
        if (value) saved = value;
    }
    ~ThreadsEnvGuard() {
        if (saved.empty()) {
            unsetenv("STATE_HARVEST_THREADS");
        } else {
            setenv("STATE_HARVEST_THREADS", saved.c_str(), 1);
        }
    }
    std::string saved;
};

}  // namespace

TEST(cli, help_exits_zero_and_usage_errors_exit_four) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 4);
    EXPECT_EQ(run({"frobnicate"}).code, 4);
    EXPECT_EQ(run({"extract"}).code, 4);
    EXPECT_EQ(run({"extract", "x", "--format", "yaml"}).code, 4);
    EXPECT_EQ(run({"gen", "scale", "--states", "0", "--per-state", "1", "--nesting", "1",
                   "--out", "d"}).code, 4);
    EXPECT_EQ(run({"gen", "tcp", "--deep", "5", "--out", "d"}).code, 4);
    EXPECT_EQ(run({"check", "--model", "m.json"}).code, 4);
}

TEST(cli, extract_nonexistent_path_is_a_usage_error) {
    CliResult result = run({"extract", "definitely/not/here"});
    EXPECT_EQ(result.code, 4);
    EXPECT_TRUE(contains(result.err, "path does not exist"));
    EXPECT_TRUE(result.out.empty());
}

TEST(cli, gen_extract_check_pipeline_round_trips) {
    shtest::ScratchDir dir("pipeline");

    EXPECT_EQ(run({"gen", "tcp", "--out", dir.str()}).code, 0);

    CliResult extracted = run({"extract", dir.str("src"), "--out", dir.str("model.json")});
    EXPECT_EQ(extracted.code, 0);
    EXPECT_TRUE(extracted.err.empty());

    CliResult checked = run({"check", "--model", dir.str("model.json"),
                             "--golden", dir.str("golden.statemachine.json")});
    EXPECT_EQ(checked.code, 0);
    EXPECT_TRUE(checked.out.empty());
}

TEST(cli, stdout_and_out_file_carry_identical_bytes) {
    shtest::ScratchDir dir("outfile");
    ASSERT_EQ(run({"gen", "scale", "--states", "3", "--per-state", "2", "--nesting", "2",
                   "--seed", "5", "--out", dir.str()}).code, 0);

    CliResult to_stdout = run({"extract", dir.str("src")});
    ASSERT_EQ(to_stdout.code, 0);
    ASSERT_EQ(run({"extract", dir.str("src"), "--out", dir.str("m.json")}).code, 0);

    EXPECT_EQ(to_stdout.out, dir.read("m.json"));
    EXPECT_EQ(to_stdout.out.back(), '\n');
}

TEST(cli, dot_format_renders_a_digraph) {
    shtest::ScratchDir dir("dot");
    ASSERT_EQ(run({"gen", "tcp", "--out", dir.str()}).code, 0);

    CliResult result = run({"extract", dir.str("src"), "--format", "dot"});
    EXPECT_EQ(result.code, 0);
    EXPECT_EQ(result.out.rfind("digraph statemachine {\n", 0), 0u);

    // 2 framing lines + 11 states + 21 transitions.
    std::size_t lines = 0;
    for (char c : result.out) lines += c == '\n' ? 1 : 0;
    EXPECT_EQ(lines, 34u);
}

TEST(cli, core_task_output_omits_label_keys) {
    shtest::ScratchDir dir("core");
    ASSERT_EQ(run({"gen", "tcp", "--out", dir.str()}).code, 0);

    CliResult result = run({"extract", dir.str("src"), "--tasks", "core"});
    EXPECT_EQ(result.code, 0);
    EXPECT_FALSE(contains(result.out, "trigger"));
    EXPECT_FALSE(contains(result.out, "action"));

    CliResult triggers = run({"extract", dir.str("src"), "--tasks", "triggers"});
    EXPECT_TRUE(contains(triggers.out, "trigger"));
    EXPECT_FALSE(contains(triggers.out, "action"));
}

TEST(cli, parse_errors_exit_two) {
    shtest::ScratchDir dir("parse_error");
    dir.write("src/Bad.java", "class {");

    CliResult result = run({"extract", dir.str("src")});
    EXPECT_EQ(result.code, 2);
    EXPECT_TRUE(contains(result.err, "error:"));
    EXPECT_TRUE(contains(result.err, "Bad.java"));
    EXPECT_TRUE(result.out.empty());
}

TEST(cli, extraction_errors_exit_three) {
    shtest::ScratchDir dir("extraction_error");
    dir.write("src/State.java", "abstract class State { }");
    dir.write("src/A.java",
              "class A extends State { void run() { switch (f()) { case 1: "
              "B.Instance().activate(); } } }");
    dir.write("src/B.java", "class B extends State { }");

    CliResult result = run({"extract", dir.str("src")});
    EXPECT_EQ(result.code, 3);
    EXPECT_TRUE(contains(result.err, "switch case condition is not a constant reference"));
}

TEST(cli, warnings_go_to_the_error_stream_only) {
    shtest::ScratchDir dir("warnings");
    dir.write("src/State.java", "abstract class State { }");
    dir.write("src/A.java",
              "class A extends State { void close() { Ghost.Instance().activate(); } }");

    CliResult result = run({"extract", dir.str("src")});
    EXPECT_EQ(result.code, 0);
    EXPECT_TRUE(contains(result.err, "WARN unresolved-dst"));
    EXPECT_EQ(result.out.rfind("{\"states\":", 0), 0u);  // model only, no diagnostics

    CliResult strict = run({"extract", dir.str("src"), "--strict-warnings"});
    EXPECT_EQ(strict.code, 3);
    EXPECT_TRUE(contains(strict.err, "WARN unresolved-dst"));
    EXPECT_FALSE(strict.out.empty());  // the model is still emitted
}

TEST(cli, lenient_flag_downgrades_unsupported_bodies) {
    shtest::ScratchDir dir("lenient");
    dir.write("src/State.java", "abstract class State { }");
    dir.write("src/A.java",
              "class A extends State {\n"
              "    void helper() { i++; }\n"
              "    void close() { A.Instance().activate(); }\n"
              "}");

    EXPECT_EQ(run({"extract", dir.str("src")}).code, 2);

    CliResult lenient = run({"extract", dir.str("src"), "--lenient"});
    EXPECT_EQ(lenient.code, 0);
    EXPECT_TRUE(contains(lenient.err, "WARN opaque-member-body"));
    EXPECT_TRUE(contains(lenient.out, "\"src\":\"A\""));
}

TEST(cli, root_class_flag_selects_the_hierarchy) {
    shtest::ScratchDir dir("root");
    dir.write("src/Mode.java", "abstract class Mode { }");
    dir.write("src/Day.java",
              "class Day extends Mode { void flip() { Night.Instance().activate(); } }");
    dir.write("src/Night.java", "class Night extends Mode { }");

    CliResult result = run({"extract", dir.str("src"), "--root-class", "Mode"});
    EXPECT_EQ(result.code, 0);
    EXPECT_TRUE(contains(result.out, "\"name\":\"Day\""));
    EXPECT_TRUE(contains(result.out, "\"trigger\":\"flip\""));
}

TEST(cli, check_reports_differences_and_bad_model_files) {
    shtest::ScratchDir dir("check");
    dir.write("golden.json",
              "{\"states\":[{\"name\":\"A\"},{\"name\":\"B\"}],"
              "\"transitions\":[{\"src\":\"A\",\"dst\":\"B\",\"trigger\":\"t\",\"action\":\"a\"}]}");
    dir.write("permuted.json",
              "{\"states\":[{\"name\":\"B\"},{\"name\":\"A\"}],"
              "\"transitions\":[{\"src\":\"A\",\"dst\":\"B\",\"trigger\":\"t\",\"action\":\"a\"}]}");
    dir.write("smaller.json",
              "{\"states\":[{\"name\":\"A\"},{\"name\":\"B\"}],\"transitions\":[]}");
    dir.write("broken.json", "{\"states\":[]}");

    EXPECT_EQ(run({"check", "--model", dir.str("permuted.json"),
                   "--golden", dir.str("golden.json")}).code, 0);

    CliResult mismatch = run({"check", "--model", dir.str("golden.json"),
                              "--golden", dir.str("smaller.json")});
    EXPECT_EQ(mismatch.code, 1);
    EXPECT_EQ(mismatch.out, "extra transition A -> B trigger=t action=a\n");

    CliResult broken = run({"check", "--model", dir.str("broken.json"),
                            "--golden", dir.str("golden.json")});
    EXPECT_EQ(broken.code, 2);
    EXPECT_TRUE(contains(broken.err, "model file"));

    EXPECT_EQ(run({"check", "--model", dir.str("absent.json"),
                   "--golden", dir.str("golden.json")}).code, 4);
}

TEST(cli, stats_prints_size_metrics) {
    shtest::ScratchDir dir("stats");
    ASSERT_EQ(run({"gen", "tcp", "--out", dir.str()}).code, 0);

    CliResult result = run({"stats", dir.str("src")});
    EXPECT_EQ(result.code, 0);
    EXPECT_TRUE(contains(result.out, "files: 15\n"));
    EXPECT_TRUE(contains(result.out, "classes: 14\n"));
    EXPECT_TRUE(contains(result.out, "parse-time-ms: "));

    shtest::ScratchDir empty("stats_empty");
    CliResult zero = run({"stats", empty.str()});
    EXPECT_EQ(zero.code, 0);
    EXPECT_TRUE(contains(zero.out, "files: 0\n"));
    EXPECT_TRUE(contains(zero.out, "nodes-plus-edges: 0\n"));
}

TEST(cli, thread_env_var_is_validated_and_applied) {
    ThreadsEnvGuard guard;
    shtest::ScratchDir dir("threads");
    ASSERT_EQ(run({"gen", "tcp", "--out", dir.str()}).code, 0);

    setenv("STATE_HARVEST_THREADS", "2", 1);
    CliResult capped = run({"extract", dir.str("src")});
    EXPECT_EQ(capped.code, 0);

    unsetenv("STATE_HARVEST_THREADS");
    CliResult unset = run({"extract", dir.str("src")});
    EXPECT_EQ(unset.code, 0);
    EXPECT_EQ(capped.out, unset.out);  // parallelism never changes output

    for (const char* bad : {"abc", "0", "-3", "2x", ""}) {
        setenv("STATE_HARVEST_THREADS", bad, 1);
        CliResult result = run({"extract", dir.str("src")});
        if (std::string(bad).empty()) {
            EXPECT_EQ(result.code, 0);  // empty counts as absent
        } else {
            EXPECT_EQ(result.code, 4) << bad;
            EXPECT_TRUE(contains(result.err, "STATE_HARVEST_THREADS"));
        }
    }
}
