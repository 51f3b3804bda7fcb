/// @file corpus.hpp
/// @brief Deterministic corpus generators: the hand-planned TCP connection
/// machine (flat and deep variants) and a seeded large-scale tier. Every
/// bundle carries its planted golden machine and per-file skeletons, so
/// extraction and parsing can be verified against construction-time truth.

#pragma once

#include "stateharvest/state_machine.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace stateharvest {

struct CorpusFile {
    std::string path;      // relative to the bundle root, e.g. "src/Closed.java"
    std::string text;
    std::string skeleton;  // declaration skeleton, same format as skeleton_of
    bool filler = false;   // true for classes that must not affect extraction
};

struct GoldenBundle {
    std::vector<CorpusFile> files;
    StateMachine golden;   // canonical
};

/// extra_depth abstract classes are inserted between each state and the
/// shared abstract base; extra_nesting blocks wrap each planted statement
/// group. (0, 0) is the flat tier.
struct TcpSpec {
    std::uint32_t extra_depth = 0;
    std::uint32_t extra_nesting = 0;
};

struct ScaleSpec {
    std::uint32_t num_states = 1;
    std::uint32_t transitions_per_state = 1;
    std::uint32_t max_nesting = 1;
    std::uint64_t seed = 0;
};

/// Emission-time knobs that must not change the golden machine or consume
/// randomness. wrap_blocks adds that many plain blocks directly around
/// every planted statement group (used by the nesting-invariance property).
struct ScaleOptions {
    std::uint32_t wrap_blocks = 0;
};

namespace detail {

/// Seeded generator with a platform-independent bounded draw. The raw
/// mt19937_64 sequence is fixed by the standard; std distributions are not,
/// so bounding is done here by rejection sampling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bounded(std::uint64_t n) {
        std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(bounded(n)); }

private:
    std::mt19937_64 engine_;
};

// --- tiny statement IR ------------------------------------------------------
// The generator builds method bodies in this IR and renders Java text and
// the declaration skeleton from the same tree, which keeps the two provably
// in sync for the round-trip structure property.

struct GenStmt {
    enum class Kind : std::uint8_t { Expr, Local, Return, Break, Block, If, While, For, Switch, Try };

    struct Case {
        std::string label;  // empty = default
        std::vector<GenStmt> body;
    };
    struct Catch {
        std::string type;
        std::string var;
        std::vector<GenStmt> body;
    };

    Kind kind = Kind::Expr;
    std::string text;  // Expr: expression; Local: type; Return: value; If/While: condition; For: header; Switch: selector
    std::string name;  // Local: variable name
    std::string init;  // Local: initializer, empty = none
    std::vector<GenStmt> body;
    std::vector<GenStmt> else_body;
    bool has_else = false;
    std::vector<Case> cases;
    std::vector<Catch> catches;

    static GenStmt expr(std::string text) {
        GenStmt s;
        s.kind = Kind::Expr;
        s.text = std::move(text);
        return s;
    }
    static GenStmt local(std::string type, std::string name, std::string init) {
        GenStmt s;
        s.kind = Kind::Local;
        s.text = std::move(type);
        s.name = std::move(name);
        s.init = std::move(init);
        return s;
    }
    static GenStmt ret(std::string value = "") {
        GenStmt s;
        s.kind = Kind::Return;
        s.text = std::move(value);
        return s;
    }
    static GenStmt brk() {
        GenStmt s;
        s.kind = Kind::Break;
        return s;
    }
    static GenStmt block(std::vector<GenStmt> body) {
        GenStmt s;
        s.kind = Kind::Block;
        s.body = std::move(body);
        return s;
    }
    static GenStmt if_(std::string cond, std::vector<GenStmt> then_body,
                       std::vector<GenStmt> else_body = {}, bool with_else = false) {
        GenStmt s;
        s.kind = Kind::If;
        s.text = std::move(cond);
        s.body = std::move(then_body);
        s.else_body = std::move(else_body);
        s.has_else = with_else;
        return s;
    }
    static GenStmt while_(std::string cond, std::vector<GenStmt> body) {
        GenStmt s;
        s.kind = Kind::While;
        s.text = std::move(cond);
        s.body = std::move(body);
        return s;
    }
    static GenStmt for_(std::string header, std::vector<GenStmt> body) {
        GenStmt s;
        s.kind = Kind::For;
        s.text = std::move(header);
        s.body = std::move(body);
        return s;
    }
    static GenStmt switch_(std::string selector) {
        GenStmt s;
        s.kind = Kind::Switch;
        s.text = std::move(selector);
        return s;
    }
    static GenStmt try_(std::vector<GenStmt> body, std::string exc_type, std::string var,
                        std::vector<GenStmt> catch_body) {
        GenStmt s;
        s.kind = Kind::Try;
        s.body = std::move(body);
        s.catches.push_back(Catch{std::move(exc_type), std::move(var), std::move(catch_body)});
        return s;
    }
};

struct GenField {
    std::string decl;  // without trailing ';'
    std::string name;
};

struct GenMethod {
    std::string signature;  // e.g. "public void close()"
    std::string name;
    std::vector<GenStmt> body;
};

struct GenClass {
    std::string name;
    bool is_abstract = false;
    std::string superclass;  // empty = none
    std::vector<GenField> fields;
    std::vector<GenMethod> methods;
};

struct GenEnum {
    std::string name;
    std::vector<std::string> constants;
};

// --- Java rendering ---------------------------------------------------------

inline void render_stmts(const std::vector<GenStmt>& stmts, int depth, std::string& out);

inline void render_stmt(const GenStmt& s, int depth, std::string& out) {
    std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
    switch (s.kind) {
    case GenStmt::Kind::Expr:
        out += pad + s.text + ";\n";
        break;
    case GenStmt::Kind::Local:
        out += pad + s.text + " " + s.name;
        if (!s.init.empty()) out += " = " + s.init;
        out += ";\n";
        break;
    case GenStmt::Kind::Return:
        out += pad + (s.text.empty() ? "return;" : "return " + s.text + ";") + "\n";
        break;
    case GenStmt::Kind::Break:
        out += pad + "break;\n";
        break;
    case GenStmt::Kind::Block:
        out += pad + "{\n";
        render_stmts(s.body, depth + 1, out);
        out += pad + "}\n";
        break;
    case GenStmt::Kind::If:
        out += pad + "if (" + s.text + ") {\n";
        render_stmts(s.body, depth + 1, out);
        if (s.has_else) {
            out += pad + "} else {\n";
            render_stmts(s.else_body, depth + 1, out);
        }
        out += pad + "}\n";
        break;
    case GenStmt::Kind::While:
        out += pad + "while (" + s.text + ") {\n";
        render_stmts(s.body, depth + 1, out);
        out += pad + "}\n";
        break;
    case GenStmt::Kind::For:
        out += pad + "for (" + s.text + ") {\n";
        render_stmts(s.body, depth + 1, out);
        out += pad + "}\n";
        break;
    case GenStmt::Kind::Switch: {
        out += pad + "switch (" + s.text + ") {\n";
        std::string case_pad(static_cast<std::size_t>(depth + 1) * 4, ' ');
        for (const auto& arm : s.cases) {
            out += case_pad + (arm.label.empty() ? "default:" : "case " + arm.label + ":") + "\n";
            render_stmts(arm.body, depth + 2, out);
        }
        out += pad + "}\n";
        break;
    }
    case GenStmt::Kind::Try:
        out += pad + "try {\n";
        render_stmts(s.body, depth + 1, out);
        for (const auto& handler : s.catches) {
            out += pad + "} catch (" + handler.type + " " + handler.var + ") {\n";
            render_stmts(handler.body, depth + 1, out);
        }
        out += pad + "}\n";
        break;
    }
}

inline void render_stmts(const std::vector<GenStmt>& stmts, int depth, std::string& out) {
    for (const auto& s : stmts) render_stmt(s, depth, out);
}

inline std::string render_class(const GenClass& cls) {
    std::string out = "public ";
    if (cls.is_abstract) out += "abstract ";
    out += "class " + cls.name;
    if (!cls.superclass.empty()) out += " extends " + cls.superclass;
    out += " {\n";
    for (const auto& field : cls.fields) out += "    " + field.decl + ";\n";
    for (const auto& method : cls.methods) {
        out += "\n    " + method.signature + " {\n";
        render_stmts(method.body, 2, out);
        out += "    }\n";
    }
    out += "}\n";
    return out;
}

inline std::string render_enum(const GenEnum& en) {
    std::string out = "public enum " + en.name + " {\n";
    for (std::size_t i = 0; i < en.constants.size(); ++i) {
        out += "    " + en.constants[i] + (i + 1 < en.constants.size() ? ",\n" : "\n");
    }
    out += "}\n";
    return out;
}

// --- skeleton rendering (must match skeleton_of line for line) ---------------

inline void skeleton_stmts(const std::vector<GenStmt>& stmts, int depth, std::string& out);

inline void skeleton_line(int depth, const std::string& text, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += text;
    out += '\n';
}

inline void skeleton_stmt(const GenStmt& s, int depth, std::string& out) {
    switch (s.kind) {
    case GenStmt::Kind::Expr:
        skeleton_line(depth, "expr", out);
        break;
    case GenStmt::Kind::Local:
        skeleton_line(depth, "local " + s.name, out);
        break;
    case GenStmt::Kind::Return:
        skeleton_line(depth, "return", out);
        break;
    case GenStmt::Kind::Break:
        skeleton_line(depth, "break", out);
        break;
    case GenStmt::Kind::Block:
        skeleton_line(depth, "block", out);
        skeleton_stmts(s.body, depth + 1, out);
        break;
    case GenStmt::Kind::If:
        skeleton_line(depth, "if", out);
        skeleton_stmts(s.body, depth + 1, out);
        if (s.has_else) {
            skeleton_line(depth, "else", out);
            skeleton_stmts(s.else_body, depth + 1, out);
        }
        break;
    case GenStmt::Kind::While:
        skeleton_line(depth, "while", out);
        skeleton_stmts(s.body, depth + 1, out);
        break;
    case GenStmt::Kind::For:
        skeleton_line(depth, "for", out);
        skeleton_stmts(s.body, depth + 1, out);
        break;
    case GenStmt::Kind::Switch:
        skeleton_line(depth, "switch", out);
        for (const auto& arm : s.cases) {
            skeleton_line(depth + 1, arm.label.empty() ? "default" : "case", out);
            skeleton_stmts(arm.body, depth + 2, out);
        }
        break;
    case GenStmt::Kind::Try:
        skeleton_line(depth, "try", out);
        skeleton_stmts(s.body, depth + 1, out);
        for (const auto& handler : s.catches) {
            skeleton_line(depth, "catch", out);
            skeleton_stmts(handler.body, depth + 1, out);
        }
        break;
    }
}

inline void skeleton_stmts(const std::vector<GenStmt>& stmts, int depth, std::string& out) {
    for (const auto& s : stmts) skeleton_stmt(s, depth, out);
}

inline std::string skeleton_class(const GenClass& cls) {
    std::string out;
    std::string head = cls.is_abstract ? "abstract class " : "class ";
    head += cls.name;
    if (!cls.superclass.empty()) head += " extends " + cls.superclass;
    skeleton_line(0, head, out);
    for (const auto& field : cls.fields) skeleton_line(1, "field " + field.name, out);
    for (const auto& method : cls.methods) {
        skeleton_line(1, "method " + method.name, out);
        skeleton_stmts(method.body, 2, out);
    }
    return out;
}

inline std::string skeleton_enum(const GenEnum& en) {
    std::string out;
    skeleton_line(0, "enum " + en.name, out);
    for (const auto& constant : en.constants) skeleton_line(1, "constant " + constant, out);
    return out;
}

inline CorpusFile class_file(const GenClass& cls, bool filler = false) {
    return CorpusFile{"src/" + cls.name + ".java", render_class(cls), skeleton_class(cls), filler};
}

inline CorpusFile enum_file(const GenEnum& en) {
    return CorpusFile{"src/" + en.name + ".java", render_enum(en), skeleton_enum(en), false};
}

// --- shared building blocks ---------------------------------------------------

/// [optional send; activation; optional trailing break] in one list.
inline std::vector<GenStmt> activation_group(const char* send_constant, const std::string& enum_name,
                                             const std::string& dst, bool trailing_break) {
    std::vector<GenStmt> group;
    if (send_constant) {
        group.push_back(GenStmt::expr("send(" + enum_name + "." + send_constant + ")"));
    }
    group.push_back(GenStmt::expr(dst + ".Instance().activate()"));
    if (trailing_break) group.push_back(GenStmt::brk());
    return group;
}

inline std::vector<GenStmt> wrap_in_blocks(std::vector<GenStmt> stmts, std::uint32_t levels) {
    for (std::uint32_t i = 0; i < levels; ++i) {
        GenStmt wrapped = GenStmt::block(std::move(stmts));
        stmts = {};
        stmts.push_back(std::move(wrapped));
    }
    return stmts;
}

/// The singleton scaffolding every generated state class shares.
inline void add_singleton_members(GenClass& cls) {
    cls.fields.push_back(
        {"private static " + cls.name + " instance = new " + cls.name + "()", "instance"});
    cls.methods.push_back({"private " + cls.name + "()", cls.name, {}});
    cls.methods.push_back({"public static " + cls.name + " Instance()", "Instance",
                           {GenStmt::ret("instance")}});
}

}  // namespace detail

// =============================================================================
// TCP tier
// =============================================================================

namespace detail {

struct TcpRule1 {
    const char* method;
    const char* send;  // null = no action
    const char* dst;
};
struct TcpRule2 {
    const char* constant;
    const char* send;
    const char* dst;
};
struct TcpStateTable {
    const char* name;
    std::vector<TcpRule1> methods;
    std::vector<TcpRule2> cases;
    const char* bare_dst;    // rule-4 transition, null = none
    const char* catch_exc;   // rule-3 transition, null = none
    const char* catch_dst;
};

/// The 21 edges of the standard TCP connection diagram over 11 states,
/// distributed to exercise all four trigger rules and both action rules.
inline const std::vector<TcpStateTable>& tcp_table() {
    static const std::vector<TcpStateTable> table = {
        {"CloseWait", {{"close", "FIN", "LastAck"}}, {}, nullptr, nullptr, nullptr},
        {"Closed", {{"listen", nullptr, "Listen"}, {"connect", "SYN", "SynSent"}}, {}, nullptr, nullptr, nullptr},
        {"Closing", {}, {}, "TimeWait", nullptr, nullptr},
        {"Established", {{"close", "FIN", "FinWait1"}}, {{"FIN", "ACK", "CloseWait"}}, nullptr, nullptr, nullptr},
        {"FinWait1", {}, {{"ACK", nullptr, "FinWait2"}, {"FIN", "ACK", "Closing"}, {"FIN_ACK", "ACK", "TimeWait"}}, nullptr, nullptr, nullptr},
        {"FinWait2", {}, {{"FIN", "ACK", "TimeWait"}}, nullptr, nullptr, nullptr},
        {"LastAck", {}, {{"ACK", nullptr, "Closed"}}, nullptr, nullptr, nullptr},
        {"Listen", {{"open", "SYN", "SynSent"}, {"close", nullptr, "Closed"}}, {{"SYN", "SYN_ACK", "SynReceived"}}, nullptr, nullptr, nullptr},
        {"SynReceived", {{"close", "FIN", "FinWait1"}}, {{"ACK", nullptr, "Established"}, {"RST", nullptr, "Listen"}}, nullptr, nullptr, nullptr},
        {"SynSent", {{"close", nullptr, "Closed"}}, {{"SYN", "SYN_ACK", "SynReceived"}, {"SYN_ACK", "ACK", "Established"}}, nullptr, nullptr, nullptr},
        {"TimeWait", {}, {}, nullptr, "TimeoutException", "Closed"},
    };
    return table;
}

/// The well-known singleton state class exactly as commonly published,
/// kept byte-for-byte in the flat tier (the deep tier regenerates it).
inline const char* tcp_synsent_verbatim() {
    return
        "public class SynSent extends ListeningState {\n"
        "  private static State instance = new SynSent();\n"
        "        public static State Instance() { return instance; }\n"
        "        public void close() { Closed.Instance().activate(); }\n"
        "        protected void run() {\n"
        "                switch (getReceivedFlag()) {\n"
        "                case SYN: send(Flag.SYN_ACK);\n"
        "                          SynReceived.Instance().activate();\n"
        "                          return;\n"
        "                case SYN_ACK: send(Flag.ACK);\n"
        "                              Established.Instance().activate();\n"
        "                              return;\n"
        "} } }\n";
}

/// IR mirror of the verbatim text above; supplies its skeleton.
inline GenClass tcp_synsent_verbatim_ir() {
    GenClass cls{"SynSent", false, "ListeningState", {}, {}};
    cls.fields.push_back({"private static State instance = new SynSent()", "instance"});
    cls.methods.push_back({"public static State Instance()", "Instance", {GenStmt::ret("instance")}});
    cls.methods.push_back(
        {"public void close()", "close", {GenStmt::expr("Closed.Instance().activate()")}});
    GenStmt sw = GenStmt::switch_("getReceivedFlag()");
    sw.cases.push_back({"SYN",
                        {GenStmt::expr("send(Flag.SYN_ACK)"),
                         GenStmt::expr("SynReceived.Instance().activate()"), GenStmt::ret()}});
    sw.cases.push_back({"SYN_ACK",
                        {GenStmt::expr("send(Flag.ACK)"),
                         GenStmt::expr("Established.Instance().activate()"), GenStmt::ret()}});
    GenMethod run{"protected void run()", "run", {}};
    run.body.push_back(std::move(sw));
    cls.methods.push_back(std::move(run));
    return cls;
}

inline GenClass tcp_root_class() {
    GenClass cls{"State", true, "", {}, {}};
    cls.fields.push_back({"protected static State current", "current"});
    cls.methods.push_back({"public void activate()", "activate", {GenStmt::expr("current = this")}});
    cls.methods.push_back({"public void send(Flag flag)", "send", {}});
    cls.methods.push_back(
        {"public Flag getReceivedFlag()", "getReceivedFlag", {GenStmt::ret("null")}});
    cls.methods.push_back({"protected void run()", "run", {}});
    return cls;
}

inline GenClass make_tcp_state(const TcpStateTable& plan, const TcpSpec& spec) {
    std::string super =
        spec.extra_depth > 0 ? plan.name + std::string("Layer1") : std::string("ListeningState");
    GenClass cls{plan.name, false, std::move(super), {}, {}};
    add_singleton_members(cls);

    for (const auto& entry : plan.methods) {
        cls.methods.push_back(
            {"public void " + std::string(entry.method) + "()", entry.method,
             wrap_in_blocks(activation_group(entry.send, "Flag", entry.dst, false),
                            spec.extra_nesting)});
    }

    if (!plan.cases.empty() || plan.bare_dst || plan.catch_dst) {
        GenMethod run{"protected void run()", "run", {}};
        if (!plan.cases.empty()) {
            GenStmt sw = GenStmt::switch_("getReceivedFlag()");
            for (const auto& arm : plan.cases) {
                sw.cases.push_back(
                    {arm.constant, wrap_in_blocks(activation_group(arm.send, "Flag", arm.dst, true),
                                                  spec.extra_nesting)});
            }
            sw.cases.push_back({"", {GenStmt::brk()}});
            run.body.push_back(std::move(sw));
        }
        if (plan.catch_dst) {
            run.body.push_back(GenStmt::try_(
                {GenStmt::expr("waitForTwoMsl()")}, plan.catch_exc, "e",
                wrap_in_blocks(activation_group(nullptr, "Flag", plan.catch_dst, false),
                               spec.extra_nesting)));
        }
        if (plan.bare_dst) {
            for (auto& s : wrap_in_blocks(activation_group(nullptr, "Flag", plan.bare_dst, false),
                                          spec.extra_nesting)) {
                run.body.push_back(std::move(s));
            }
        }
        cls.methods.push_back(std::move(run));
        if (plan.catch_dst) {
            cls.methods.push_back({"private void waitForTwoMsl()", "waitForTwoMsl", {}});
        }
    }
    return cls;
}

}  // namespace detail

/// Generates the TCP tier: 11 singleton state classes, the two abstract
/// bases, the flag enum, and a driver class whose activation call must be
/// ignored by extraction. The golden machine has 11 states and 21
/// transitions by construction.
inline GoldenBundle emit_tcp(const TcpSpec& spec = {}) {
    using namespace detail;
    GoldenBundle bundle;

    bundle.files.push_back(class_file(tcp_root_class()));
    bundle.files.push_back(class_file(GenClass{"ListeningState", true, "State", {}, {}}));
    bundle.files.push_back(
        enum_file(GenEnum{"Flag", {"SYN", "ACK", "SYN_ACK", "FIN", "FIN_ACK", "RST"}}));

    bool flat = spec.extra_depth == 0 && spec.extra_nesting == 0;
    for (const auto& plan : tcp_table()) {
        if (flat && std::string(plan.name) == "SynSent") {
            bundle.files.push_back(CorpusFile{"src/SynSent.java", tcp_synsent_verbatim(),
                                              skeleton_class(tcp_synsent_verbatim_ir()), false});
        } else {
            bundle.files.push_back(class_file(make_tcp_state(plan, spec)));
        }
        for (std::uint32_t layer = 1; layer <= spec.extra_depth; ++layer) {
            std::string name = plan.name + std::string("Layer") + std::to_string(layer);
            std::string super = layer == spec.extra_depth
                                    ? std::string("ListeningState")
                                    : plan.name + std::string("Layer") + std::to_string(layer + 1);
            GenClass cls{std::move(name), true, std::move(super), {}, {}};
            cls.methods.push_back(
                {"protected void onLayer" + std::to_string(layer) + "()",
                 "onLayer" + std::to_string(layer), {}});
            bundle.files.push_back(class_file(cls));
        }
    }

    GenClass driver{"TcpSimulator", false, "", {}, {}};
    driver.methods.push_back({"public static void main(String[] args)", "main",
                              {GenStmt::expr("Closed.Instance().activate()")}});
    bundle.files.push_back(class_file(driver));

    StateMachine golden;
    for (const auto& plan : tcp_table()) {
        golden.states.push_back(State{plan.name});
        for (const auto& entry : plan.methods) {
            golden.transitions.push_back(Transition{
                plan.name, entry.dst, entry.method,
                entry.send ? std::string(entry.send) : std::string("--")});
        }
        for (const auto& arm : plan.cases) {
            golden.transitions.push_back(Transition{
                plan.name, arm.dst, arm.constant,
                arm.send ? std::string(arm.send) : std::string("--")});
        }
        if (plan.bare_dst) {
            golden.transitions.push_back(Transition{plan.name, plan.bare_dst, "--", "--"});
        }
        if (plan.catch_dst) {
            golden.transitions.push_back(
                Transition{plan.name, plan.catch_dst, plan.catch_exc, "--"});
        }
    }
    bundle.golden = canonicalize(std::move(golden));
    return bundle;
}

// =============================================================================
// Scale tier
// =============================================================================

namespace detail {

inline const std::array<const char*, 8>& scale_events() {
    static const std::array<const char*, 8> events = {
        "OPEN", "CLOSE", "DATA", "RESET", "TIMEOUT", "SYNC", "READY", "ERROR"};
    return events;
}

inline const std::array<const char*, 4>& scale_exceptions() {
    static const std::array<const char*, 4> pool = {
        "TimeoutException", "IOException", "ProtocolException", "OverflowException"};
    return pool;
}

inline const std::array<const char*, 10>& scale_method_pool() {
    static const std::array<const char*, 10> pool = {
        "close", "open", "reset", "submit", "cancel",
        "refresh", "shutdown", "suspend", "resume", "detach"};
    return pool;
}

inline const std::array<const char*, 10>& filler_method_pool() {
    static const std::array<const char*, 10> pool = {
        "process", "update", "validate", "compute", "render",
        "flush", "persist", "load", "merge", "audit"};
    return pool;
}

inline const std::array<const char*, 4>& if_condition_pool() {
    static const std::array<const char*, 4> pool = {
        "isReady()", "count > 0", "hasPending()", "active"};
    return pool;
}

inline const std::array<const char*, 4>& while_condition_pool() {
    static const std::array<const char*, 4> pool = {
        "hasPending()", "retries > 0", "queue.hasNext()", "count < limit"};
    return pool;
}

inline const std::array<const char*, 4>& for_header_pool() {
    static const std::array<const char*, 4> pool = {
        "int i = 0; i < count; i++", "int k = 0; k < retries; k++",
        "int n = 0; n < limit; n++", "int j = 1; j < size; j++"};
    return pool;
}

inline const std::array<const char*, 4>& filler_call_pool() {
    static const std::array<const char*, 4> pool = {
        "listener.onUpdate(count)", "tracker.record(total)", "this.sync()", "logger.log(label)"};
    return pool;
}

inline const std::array<const char*, 4>& filler_word_pool() {
    static const std::array<const char*, 4> pool = {"alpha", "beta", "gamma", "delta"};
    return pool;
}

inline std::string nth_unique_name(const std::array<const char*, 10>& pool, std::size_t n) {
    std::string name = pool[n % pool.size()];
    if (n >= pool.size()) name += std::to_string(n / pool.size() + 1);
    return name;
}

enum class WrapKind : std::uint8_t { Block, If, While, For };

struct WrapperPlan {
    WrapKind kind;
    std::string text;  // condition / for header, empty for Block
};

struct TransitionPlan {
    std::string dst;
    int rule = 4;          // 1 method, 2 switch case, 3 catch, 4 bare
    std::string trigger;   // per rule; "--" for rule 4
    std::string action;    // constant or "--"
    std::vector<WrapperPlan> wrappers;  // outermost first
};

/// Applies planned wrappers plus wrap_blocks emission-time blocks around a
/// group. Wrapper kinds never introduce switch cases or catch clauses, so
/// the planned trigger is preserved at any depth.
inline std::vector<GenStmt> apply_wrappers(std::vector<GenStmt> group,
                                           const std::vector<WrapperPlan>& wrappers,
                                           std::uint32_t wrap_blocks) {
    group = wrap_in_blocks(std::move(group), wrap_blocks);
    for (auto it = wrappers.rbegin(); it != wrappers.rend(); ++it) {
        GenStmt wrapped;
        switch (it->kind) {
        case WrapKind::Block: wrapped = GenStmt::block(std::move(group)); break;
        case WrapKind::If: wrapped = GenStmt::if_(it->text, std::move(group)); break;
        case WrapKind::While: wrapped = GenStmt::while_(it->text, std::move(group)); break;
        case WrapKind::For: wrapped = GenStmt::for_(it->text, std::move(group)); break;
        }
        group = {};
        group.push_back(std::move(wrapped));
    }
    return group;
}

inline GenClass scale_root_class() {
    GenClass cls{"State", true, "", {}, {}};
    cls.fields.push_back({"protected static State current", "current"});
    cls.methods.push_back({"public void activate()", "activate", {GenStmt::expr("current = this")}});
    cls.methods.push_back({"public void send(Event event)", "send", {}});
    cls.methods.push_back({"public Event getEvent()", "getEvent", {GenStmt::ret("null")}});
    cls.methods.push_back({"protected void run()", "run", {}});
    cls.methods.push_back({"protected void poll()", "poll", {}});
    return cls;
}

/// One plausible statement for a filler method body. Consumes a fixed
/// number of draws per template so the emission plan stays stable.
inline GenStmt filler_statement(Rng& rng, std::size_t ordinal) {
    switch (rng.index(7)) {
    case 0:
        return GenStmt::local("int", "v" + std::to_string(ordinal),
                              std::to_string(rng.bounded(100)));
    case 1:
        return GenStmt::expr("count = count + " + std::to_string(1 + rng.bounded(9)));
    case 2:
        return GenStmt::expr(filler_call_pool()[rng.index(filler_call_pool().size())]);
    case 3:
        return GenStmt::if_(if_condition_pool()[rng.index(if_condition_pool().size())],
                            {GenStmt::expr("count = 0")},
                            {GenStmt::expr("count = count + 1")}, true);
    case 4:
        return GenStmt::for_(for_header_pool()[rng.index(for_header_pool().size())],
                             {GenStmt::expr("total = total + i")});
    case 5:
        return GenStmt::while_(while_condition_pool()[rng.index(while_condition_pool().size())],
                               {GenStmt::expr("count = count - 1")});
    default:
        return GenStmt::local("String", "tag" + std::to_string(ordinal),
                              "\"" + std::string(filler_word_pool()[rng.index(filler_word_pool().size())]) + "\"");
    }
}

}  // namespace detail

/// Generates the large tier: num_states singleton state classes over a
/// seeded abstract hierarchy, transitions_per_state planted activation
/// calls each, an event enum, and ~2 filler classes per state that contain
/// no activation patterns. The golden machine is recorded while planning,
/// never by running extraction.
inline GoldenBundle emit_scale(const ScaleSpec& spec, const ScaleOptions& options = {}) {
    using namespace detail;
    GoldenBundle bundle;
    Rng rng(spec.seed);

    const std::uint32_t S = spec.num_states;
    const std::uint32_t K = spec.transitions_per_state;
    const std::uint32_t M = spec.max_nesting;
    const std::uint32_t abstract_count = std::max<std::uint32_t>(1, S / 10);

    auto state_name = [](std::uint32_t i) { return "AppState" + std::to_string(i); };
    auto base_name = [](std::uint32_t i) { return "BaseState" + std::to_string(i); };

    bundle.files.push_back(class_file(scale_root_class()));
    {
        GenEnum events{"Event", {}};
        for (const char* constant : scale_events()) events.constants.push_back(constant);
        bundle.files.push_back(enum_file(events));
    }

    // Abstract hierarchy: each base extends the root or an earlier base.
    for (std::uint32_t i = 1; i <= abstract_count; ++i) {
        std::string super = "State";
        if (i > 1 && rng.bounded(100) >= 40) super = base_name(1 + static_cast<std::uint32_t>(rng.index(i - 1)));
        GenClass cls{base_name(i), true, std::move(super), {}, {}};
        cls.methods.push_back({"protected void onBase" + std::to_string(i) + "()",
                               "onBase" + std::to_string(i), {}});
        bundle.files.push_back(class_file(cls));
    }

    // State superclasses, drawn before transition planning.
    std::vector<std::string> state_supers(S);
    for (std::uint32_t i = 0; i < S; ++i) {
        std::size_t pick = rng.index(abstract_count + 1);
        state_supers[i] = pick == 0 ? "State" : base_name(static_cast<std::uint32_t>(pick));
    }

    StateMachine golden;
    for (std::uint32_t i = 1; i <= S; ++i) golden.states.push_back(State{state_name(i)});

    for (std::uint32_t i = 1; i <= S; ++i) {
        std::vector<TransitionPlan> plans(K);
        for (std::uint32_t t = 0; t < K; ++t) {
            plans[t].dst = state_name(1 + static_cast<std::uint32_t>(rng.index(S)));
            std::uint64_t p = rng.bounded(100);
            plans[t].rule = p < 25 ? 1 : p < 65 ? 2 : p < 80 ? 3 : 4;
        }

        // Rule-2 triggers: constants unique within each switch of up to 8 cases.
        {
            std::vector<const char*> available;
            std::size_t in_switch = 0;
            for (auto& plan : plans) {
                if (plan.rule != 2) continue;
                if (in_switch % scale_events().size() == 0) {
                    available.assign(scale_events().begin(), scale_events().end());
                }
                std::size_t pick = rng.index(available.size());
                plan.trigger = available[pick];
                available.erase(available.begin() + static_cast<std::ptrdiff_t>(pick));
                ++in_switch;
            }
        }

        std::size_t rule1_count = 0;
        for (auto& plan : plans) {
            if (plan.rule == 1) plan.trigger = nth_unique_name(scale_method_pool(), rule1_count++);
            if (plan.rule == 3) plan.trigger = scale_exceptions()[rng.index(scale_exceptions().size())];
            if (plan.rule == 4) plan.trigger = "--";

            plan.action = rng.bounded(100) < 60
                              ? std::string(scale_events()[rng.index(scale_events().size())])
                              : std::string("--");

            std::uint32_t depth = static_cast<std::uint32_t>(rng.bounded(M + 1));
            for (std::uint32_t d = 0; d < depth; ++d) {
                WrapperPlan w;
                switch (rng.index(4)) {
                case 0: w.kind = WrapKind::Block; break;
                case 1:
                    w.kind = WrapKind::If;
                    w.text = if_condition_pool()[rng.index(if_condition_pool().size())];
                    break;
                case 2:
                    w.kind = WrapKind::While;
                    w.text = while_condition_pool()[rng.index(while_condition_pool().size())];
                    break;
                default:
                    w.kind = WrapKind::For;
                    w.text = for_header_pool()[rng.index(for_header_pool().size())];
                    break;
                }
                plan.wrappers.push_back(std::move(w));
            }
        }

        // Assemble the class: rule-1 methods, then one run() holding the
        // switches, tries, and bare groups.
        GenClass cls{state_name(i), false, state_supers[i - 1], {}, {}};
        add_singleton_members(cls);

        auto planted_group = [&](const TransitionPlan& plan, bool trailing_break) {
            const char* send = plan.action == "--" ? nullptr : plan.action.c_str();
            return apply_wrappers(activation_group(send, "Event", plan.dst, trailing_break),
                                  plan.wrappers, options.wrap_blocks);
        };

        for (const auto& plan : plans) {
            if (plan.rule != 1) continue;
            cls.methods.push_back({"public void " + plan.trigger + "()", plan.trigger,
                                   planted_group(plan, false)});
        }

        GenMethod run{"protected void run()", "run", {}};
        {
            GenStmt sw = GenStmt::switch_("getEvent()");
            for (const auto& plan : plans) {
                if (plan.rule != 2) continue;
                if (sw.cases.size() == scale_events().size()) {
                    sw.cases.push_back({"", {GenStmt::brk()}});
                    run.body.push_back(std::move(sw));
                    sw = GenStmt::switch_("getEvent()");
                }
                sw.cases.push_back({plan.trigger, planted_group(plan, true)});
            }
            if (!sw.cases.empty()) {
                sw.cases.push_back({"", {GenStmt::brk()}});
                run.body.push_back(std::move(sw));
            }
        }
        for (const auto& plan : plans) {
            if (plan.rule != 3) continue;
            run.body.push_back(GenStmt::try_({GenStmt::expr("poll()")}, plan.trigger, "e",
                                             planted_group(plan, false)));
        }
        for (const auto& plan : plans) {
            if (plan.rule != 4) continue;
            // One isolating block keeps the group's sends out of run()'s
            // shared top-level list.
            run.body.push_back(GenStmt::block(planted_group(plan, false)));
        }
        if (!run.body.empty()) cls.methods.push_back(std::move(run));
        bundle.files.push_back(class_file(cls));

        for (const auto& plan : plans) {
            golden.transitions.push_back(
                Transition{state_name(i), plan.dst, plan.trigger, plan.action});
        }
    }

    // Filler classes: plausible code with no activation patterns, sized with
    // transitions_per_state so total bytes stay roughly linear in S * K.
    const std::size_t filler_methods = 2 * static_cast<std::size_t>(K) + 2;
    const std::size_t filler_stmts = 10;
    for (const char* prefix : {"Helper", "Service"}) {
        for (std::uint32_t i = 1; i <= S; ++i) {
            std::string super;
            if (i > 1 && rng.bounded(100) < 25) {
                super = prefix + std::to_string(1 + static_cast<std::uint32_t>(rng.index(i - 1)));
            }
            GenClass cls{prefix + std::to_string(i), false, std::move(super), {}, {}};
            cls.fields.push_back({"private int count = 0", "count"});
            cls.fields.push_back({"private int total = 0", "total"});
            cls.fields.push_back({"private String label = \"idle\"", "label"});
            for (std::size_t m = 0; m < filler_methods; ++m) {
                GenMethod method{"public void " + nth_unique_name(filler_method_pool(), m) + "()",
                                 nth_unique_name(filler_method_pool(), m), {}};
                for (std::size_t s = 0; s < filler_stmts; ++s) {
                    method.body.push_back(filler_statement(rng, s));
                }
                cls.methods.push_back(std::move(method));
            }
            bundle.files.push_back(class_file(cls, true));
        }
    }

    bundle.golden = canonicalize(std::move(golden));
    return bundle;
}

/// Writes the bundle under out_dir: sources below src/ and the golden
/// machine as golden.statemachine.json (model format plus final newline).
inline void write_bundle(const GoldenBundle& bundle, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    for (const auto& file : bundle.files) {
        fs::path path = out_dir / file.path;
        fs::create_directories(path.parent_path());
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        os << file.text;
    }
    fs::create_directories(out_dir);
    fs::path golden_path = out_dir / "golden.statemachine.json";
    std::ofstream os(golden_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + golden_path.string());
    os << to_json(bundle.golden) << "\n";
}

}  // namespace stateharvest
