/// @file state_machine.hpp
/// @brief The target model: states and transitions with canonical ordering,
/// JSON/DOT serialization, and multiset comparison.
///
/// Canonical form: states ascending by name; transitions ascending by
/// (src, dst, trigger, action) with absent fields before present ones.
/// Element order carries no meaning, so every consumer works on the
/// canonical form and serialization is byte-deterministic.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <compare>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stateharvest {

/// Violation of the model invariants (dangling reference, duplicate state
/// name, empty label) or a malformed model file.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct State {
    std::string name;

    friend auto operator<=>(const State&, const State&) = default;
};

/// The sentinel label "--" (no trigger / no action) is a stored value;
/// an unset optional means the field was never derived (task not selected).
struct Transition {
    std::string src;
    std::string dst;
    std::optional<std::string> trigger;
    std::optional<std::string> action;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct StateMachine {
    std::vector<State> states;
    std::vector<Transition> transitions;

    friend bool operator==(const StateMachine&, const StateMachine&) = default;
};

/// Returns the canonical form. Validates referential closure, state-name
/// uniqueness, and label non-emptiness; idempotent.
inline StateMachine canonicalize(StateMachine machine) {
    std::sort(machine.states.begin(), machine.states.end());
    std::sort(machine.transitions.begin(), machine.transitions.end());

    for (std::size_t i = 0; i < machine.states.size(); ++i) {
        if (machine.states[i].name.empty()) throw ModelError("state with empty name");
        if (i > 0 && machine.states[i].name == machine.states[i - 1].name) {
            throw ModelError("duplicate state name '" + machine.states[i].name + "'");
        }
    }
    auto declared = [&](const std::string& name) {
        return std::binary_search(machine.states.begin(), machine.states.end(), State{name});
    };
    for (const auto& t : machine.transitions) {
        if (!declared(t.src)) {
            throw ModelError("transition src references undeclared state '" + t.src + "'");
        }
        if (!declared(t.dst)) {
            throw ModelError("transition dst references undeclared state '" + t.dst + "'");
        }
        if (t.trigger && t.trigger->empty()) throw ModelError("transition with empty trigger");
        if (t.action && t.action->empty()) throw ModelError("transition with empty action");
    }
    return machine;
}

namespace detail {

inline void append_json_string(std::string& out, std::string_view text) {
    out += '"';
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

inline void append_dot_string(std::string& out, std::string_view text) {
    out += '"';
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
}

}  // namespace detail

/// Serializes a canonical machine. Key order is fixed
/// (states, transitions; src, dst, trigger, action), no insignificant
/// whitespace, unset trigger/action keys omitted.
inline std::string to_json(const StateMachine& machine) {
    std::string out = "{\"states\":[";
    for (std::size_t i = 0; i < machine.states.size(); ++i) {
        if (i > 0) out += ',';
        out += "{\"name\":";
        detail::append_json_string(out, machine.states[i].name);
        out += '}';
    }
    out += "],\"transitions\":[";
    for (std::size_t i = 0; i < machine.transitions.size(); ++i) {
        const Transition& t = machine.transitions[i];
        if (i > 0) out += ',';
        out += "{\"src\":";
        detail::append_json_string(out, t.src);
        out += ",\"dst\":";
        detail::append_json_string(out, t.dst);
        if (t.trigger) {
            out += ",\"trigger\":";
            detail::append_json_string(out, *t.trigger);
        }
        if (t.action) {
            out += ",\"action\":";
            detail::append_json_string(out, *t.action);
        }
        out += '}';
    }
    out += "]}";
    return out;
}

namespace detail {

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const char* where) {
    const auto& value = obj.at(key);
    if (!value.is_string()) {
        throw ModelError(std::string("model file: ") + where + " key '" + key +
                         "' must be a string");
    }
    std::string text = value.get<std::string>();
    if (text.empty()) {
        throw ModelError(std::string("model file: ") + where + " key '" + key +
                         "' must be non-empty");
    }
    return text;
}

}  // namespace detail

/// Parses the model format back into a StateMachine (element order as read,
/// not canonicalized). Rejects unknown or missing keys and empty strings.
inline StateMachine from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("model file: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ModelError("model file: top level must be an object");
    for (const auto& item : doc.items()) {
        if (item.key() != "states" && item.key() != "transitions") {
            throw ModelError("model file: unknown top-level key '" + item.key() + "'");
        }
    }
    if (!doc.contains("states") || !doc["states"].is_array()) {
        throw ModelError("model file: missing 'states' array");
    }
    if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
        throw ModelError("model file: missing 'transitions' array");
    }

    StateMachine machine;
    for (const auto& entry : doc["states"]) {
        if (!entry.is_object()) throw ModelError("model file: state entry must be an object");
        for (const auto& item : entry.items()) {
            if (item.key() != "name") {
                throw ModelError("model file: unknown state key '" + item.key() + "'");
            }
        }
        if (!entry.contains("name")) throw ModelError("model file: state entry missing 'name'");
        machine.states.push_back(State{detail::require_string(entry, "name", "state")});
    }
    for (const auto& entry : doc["transitions"]) {
        if (!entry.is_object()) throw ModelError("model file: transition entry must be an object");
        for (const auto& item : entry.items()) {
            const std::string& key = item.key();
            if (key != "src" && key != "dst" && key != "trigger" && key != "action") {
                throw ModelError("model file: unknown transition key '" + key + "'");
            }
        }
        if (!entry.contains("src") || !entry.contains("dst")) {
            throw ModelError("model file: transition entry missing 'src' or 'dst'");
        }
        Transition t;
        t.src = detail::require_string(entry, "src", "transition");
        t.dst = detail::require_string(entry, "dst", "transition");
        if (entry.contains("trigger")) t.trigger = detail::require_string(entry, "trigger", "transition");
        if (entry.contains("action")) t.action = detail::require_string(entry, "action", "transition");
        machine.transitions.push_back(std::move(t));
    }
    return machine;
}

/// Renders a canonical machine as Graphviz DOT: one node line per state and
/// one edge line per transition. Label = "trigger / action" where the "--"
/// sentinel and unset fields are dropped; the label attribute disappears
/// entirely when nothing remains.
inline std::string to_dot(const StateMachine& machine) {
    std::string out = "digraph statemachine {\n";
    for (const auto& s : machine.states) {
        out += "  ";
        detail::append_dot_string(out, s.name);
        out += ";\n";
    }
    for (const auto& t : machine.transitions) {
        out += "  ";
        detail::append_dot_string(out, t.src);
        out += " -> ";
        detail::append_dot_string(out, t.dst);
        std::string_view trigger = (t.trigger && *t.trigger != "--") ? *t.trigger : std::string_view{};
        std::string_view action = (t.action && *t.action != "--") ? *t.action : std::string_view{};
        if (!trigger.empty() || !action.empty()) {
            std::string label;
            if (!trigger.empty() && !action.empty()) {
                label = std::string(trigger) + " / " + std::string(action);
            } else {
                label = std::string(trigger.empty() ? action : trigger);
            }
            out += " [label=";
            detail::append_dot_string(out, label);
            out += ']';
        }
        out += ";\n";
    }
    out += "}\n";
    return out;
}

/// Set difference on state names, multiset difference on transition tuples.
/// "missing" = present in golden only; "extra" = present in actual only.
struct MismatchReport {
    std::vector<std::string> missing_states;
    std::vector<std::string> extra_states;
    std::vector<Transition> missing_transitions;
    std::vector<Transition> extra_transitions;

    bool equal() const {
        return missing_states.empty() && extra_states.empty() &&
               missing_transitions.empty() && extra_transitions.empty();
    }

    std::string to_string() const {
        auto transition_text = [](const Transition& t) {
            std::string text = t.src + " -> " + t.dst;
            if (t.trigger) text += " trigger=" + *t.trigger;
            if (t.action) text += " action=" + *t.action;
            return text;
        };
        std::string out;
        for (const auto& name : missing_states) out += "missing state " + name + "\n";
        for (const auto& name : extra_states) out += "extra state " + name + "\n";
        for (const auto& t : missing_transitions) out += "missing transition " + transition_text(t) + "\n";
        for (const auto& t : extra_transitions) out += "extra transition " + transition_text(t) + "\n";
        return out;
    }
};

/// Order-insensitive comparison: canonicalizes both sides, then diffs the
/// state-name sets and the transition multisets.
inline MismatchReport compare(const StateMachine& actual, const StateMachine& golden) {
    StateMachine a = canonicalize(actual);
    StateMachine g = canonicalize(golden);

    MismatchReport report;
    {
        std::size_t i = 0, j = 0;
        while (i < a.states.size() || j < g.states.size()) {
            if (j >= g.states.size() || (i < a.states.size() && a.states[i] < g.states[j])) {
                report.extra_states.push_back(a.states[i++].name);
            } else if (i >= a.states.size() || g.states[j] < a.states[i]) {
                report.missing_states.push_back(g.states[j++].name);
            } else {
                ++i;
                ++j;
            }
        }
    }
    {
        std::size_t i = 0, j = 0;
        while (i < a.transitions.size() || j < g.transitions.size()) {
            if (j >= g.transitions.size() ||
                (i < a.transitions.size() && a.transitions[i] < g.transitions[j])) {
                report.extra_transitions.push_back(a.transitions[i++]);
            } else if (i >= a.transitions.size() || g.transitions[j] < a.transitions[i]) {
                report.missing_transitions.push_back(g.transitions[j++]);
            } else {
                ++i;
                ++j;
            }
        }
    }
    return report;
}

}  // namespace stateharvest
