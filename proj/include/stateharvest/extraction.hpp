/// @file extraction.hpp
/// @brief The four convention groups turning a parsed project into a state
/// machine: state detection, transition detection, trigger derivation,
/// action derivation. One operation per convention so the convention text
/// stays visible in the code.

#pragma once

#include "stateharvest/state_machine.hpp"
#include "stateharvest/syntax_graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stateharvest {

enum class WarningKind : std::uint8_t {
    SkippedActivationInAbstractClass,
    UnresolvedDst,
    BrokenInheritanceChain,
    AmbiguousContext,
};

inline const char* to_string(WarningKind kind) {
    switch (kind) {
    case WarningKind::SkippedActivationInAbstractClass: return "skipped-activation-in-abstract-class";
    case WarningKind::UnresolvedDst: return "unresolved-dst";
    case WarningKind::BrokenInheritanceChain: return "broken-inheritance-chain";
    case WarningKind::AmbiguousContext: return "ambiguous-context";
    }
    return "unknown";
}

/// Warnings never alter the output model, only the diagnostics stream.
struct ExtractionWarning {
    SourceLocation location;
    WarningKind kind;
    std::string message;

    std::string to_line() const {
        return std::string("WARN ") + to_string(kind) + " " + location.to_string() + " " + message;
    }
};

/// Malformed convention usage (ambiguous class names, inheritance cycles,
/// non-reference case conditions or send arguments).
class ExtractionError : public std::runtime_error {
public:
    ExtractionError(SourceLocation loc, const std::string& message)
        : std::runtime_error(loc.to_string() + ": " + message), location(std::move(loc)) {}

    SourceLocation location;
};

/// The non-abstract classes transitively extending the abstract root state
/// class. The root itself is never a member.
struct StateSet {
    std::vector<std::string> names;        // ascending
    std::map<std::string, NodeId> nodes;   // name -> ClassDecl node

    bool contains(const std::string& name) const { return nodes.count(name) != 0; }
};

/// One occurrence of the exact chain `X.Instance().activate()` inside a
/// state class method; encodes one transition.
struct ActivationSite {
    NodeId node;                          // the matched ExprStmt
    const ClassDecl* src_class;
    std::string dst_name;
    const MethodDecl* enclosing_method;
    const StatementList* containing_list; // innermost list holding the call
    std::size_t index_in_list;
    SourceLocation location;
};

/// Cumulative task selection: Core fills only src/dst, Triggers adds the
/// trigger label, Actions adds both labels.
enum class TaskLevel : std::uint8_t { Core = 0, Triggers = 1, Actions = 2 };

namespace detail {

/// Matches `Head.Instance().activate()` exactly: a three-segment chain of a
/// plain identifier, a zero-argument call named Instance, and a
/// zero-argument call named activate. Returns the head identifier.
inline std::optional<std::string> activation_target(const Expression& expr) {
    const auto* chain = std::get_if<ReferenceChain>(&expr.value);
    if (!chain || chain->segments.size() != 3) return std::nullopt;
    const auto* head = std::get_if<IdentifierSegment>(&chain->segments[0].value);
    const auto* instance = std::get_if<CallSegment>(&chain->segments[1].value);
    const auto* activate = std::get_if<CallSegment>(&chain->segments[2].value);
    if (!head || !instance || !activate) return std::nullopt;
    if (instance->name != "Instance" || !instance->args.empty()) return std::nullopt;
    if (activate->name != "activate" || !activate->args.empty()) return std::nullopt;
    return head->name;
}

/// Matches `send(ARG)` or `this.send(ARG)` with exactly one argument.
/// Returns the argument expression.
inline const Expression* send_argument(const Expression& expr) {
    const auto* chain = std::get_if<ReferenceChain>(&expr.value);
    if (!chain) return nullptr;
    const CallSegment* call = nullptr;
    if (chain->segments.size() == 1) {
        call = std::get_if<CallSegment>(&chain->segments[0].value);
    } else if (chain->segments.size() == 2) {
        const auto* head = std::get_if<IdentifierSegment>(&chain->segments[0].value);
        if (!head || head->name != "this") return nullptr;
        call = std::get_if<CallSegment>(&chain->segments[1].value);
    }
    if (!call || call->name != "send" || call->args.size() != 1) return nullptr;
    return &call->args[0];
}

/// The final identifier of a reference-chain expression (`SYN` from `SYN`
/// or `Flag.SYN`). Nothing when the expression is not a chain or does not
/// end in a plain identifier.
inline std::optional<std::string> trailing_identifier(const Expression& expr) {
    const auto* chain = std::get_if<ReferenceChain>(&expr.value);
    if (!chain || chain->segments.empty()) return std::nullopt;
    const auto* last = std::get_if<IdentifierSegment>(&chain->segments.back().value);
    if (!last) return std::nullopt;
    return last->name;
}

}  // namespace detail

/// State detection: collects the non-abstract classes whose superclass
/// chain (followed by simple name) reaches the abstract root class. A
/// superclass name resolving to zero declarations breaks the chain with a
/// warning; resolving to several is an error, as are inheritance cycles, a
/// non-abstract root, and two qualifying classes sharing one name.
inline StateSet collect_state_classes(const Project& project,
                                      const std::string& root_name = "State",
                                      std::vector<ExtractionWarning>* warnings = nullptr) {
    StateSet states;
    auto warn = [&](SourceLocation loc, WarningKind kind, std::string message) {
        if (warnings) warnings->push_back({std::move(loc), kind, std::move(message)});
    };

    const auto& index = project.class_index();
    auto root_it = index.find(root_name);
    if (root_it == index.end()) {
        warn(SourceLocation{"<project>", 0, 0}, WarningKind::BrokenInheritanceChain,
             "root state class '" + root_name + "' is not declared");
        return states;
    }
    if (root_it->second.size() > 1) {
        throw ExtractionError(project.location(root_it->second[1]),
                              "root state class '" + root_name + "' is declared more than once");
    }
    NodeId root_id = root_it->second.front();
    if (!project.class_at(root_id).is_abstract) {
        throw ExtractionError(project.location(root_id),
                              "root state class '" + root_name + "' must be abstract");
    }

    enum class Reach : std::uint8_t { Visiting, Yes, No };
    std::map<NodeId, Reach> memo;
    memo[root_id] = Reach::Yes;

    // Whether the chain from this class reaches the root. Memoized so each
    // broken link warns exactly once.
    auto reaches = [&](auto&& self, NodeId id) -> bool {
        auto it = memo.find(id);
        if (it != memo.end()) {
            if (it->second == Reach::Visiting) {
                throw ExtractionError(project.location(id),
                                      "inheritance cycle involving class '" +
                                          project.class_at(id).name + "'");
            }
            return it->second == Reach::Yes;
        }
        const ClassDecl& cls = project.class_at(id);
        if (!cls.superclass_name) {
            memo[id] = Reach::No;
            return false;
        }
        auto super_it = index.find(*cls.superclass_name);
        if (super_it == index.end()) {
            warn(project.location(id), WarningKind::BrokenInheritanceChain,
                 "superclass '" + *cls.superclass_name + "' of '" + cls.name +
                     "' is not declared");
            memo[id] = Reach::No;
            return false;
        }
        if (super_it->second.size() > 1) {
            throw ExtractionError(project.location(id),
                                  "superclass name '" + *cls.superclass_name + "' of '" +
                                      cls.name + "' is ambiguous (" +
                                      std::to_string(super_it->second.size()) + " declarations)");
        }
        memo[id] = Reach::Visiting;
        bool result = self(self, super_it->second.front());
        memo[id] = result ? Reach::Yes : Reach::No;
        return result;
    };

    for (const auto& [name, ids] : index) {
        for (NodeId id : ids) {
            const ClassDecl& cls = project.class_at(id);
            if (cls.is_abstract || id == root_id) continue;
            if (!reaches(reaches, id)) continue;
            auto [it, inserted] = states.nodes.emplace(name, id);
            (void)it;
            if (!inserted) {
                throw ExtractionError(project.location(id),
                                      "state class name '" + name + "' is declared more than once");
            }
            states.names.push_back(name);
        }
    }
    return states;
}

namespace detail {

/// Statement walker shared by site collection and the abstract-class
/// warning sweep: visits every statement at every nesting depth, tracking
/// the innermost statement list and index.
template <typename Visitor>
inline void walk_method_lists(const StatementList& list, Visitor&& visit) {
    for (std::size_t i = 0; i < list.statements.size(); ++i) {
        const Statement& stmt = list.statements[i];
        visit(list, i, stmt);
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, BlockStmt>) {
                    walk_method_lists(s.body, visit);
                } else if constexpr (std::is_same_v<S, SwitchStmt>) {
                    for (const auto& arm : s.cases) walk_method_lists(arm.body, visit);
                } else if constexpr (std::is_same_v<S, TryStmt>) {
                    walk_method_lists(s.body, visit);
                    for (const auto& handler : s.catches) walk_method_lists(handler.body, visit);
                } else if constexpr (std::is_same_v<S, IfStmt>) {
                    walk_method_lists(s.then_body, visit);
                    if (s.else_body) walk_method_lists(*s.else_body, visit);
                } else if constexpr (std::is_same_v<S, WhileStmt>) {
                    walk_method_lists(s.body, visit);
                } else if constexpr (std::is_same_v<S, ForStmt>) {
                    walk_method_lists(s.body, visit);
                }
            },
            stmt.value);
    }
}

}  // namespace detail

/// Transition detection: walks every statement of every method of every
/// state class and records one site per exact activation call whose target
/// is a known state. Activation-shaped calls elsewhere only warn: unknown
/// targets inside state classes (unresolved-dst) and any occurrence inside
/// an abstract class (skipped-activation-in-abstract-class). Sites are
/// ordered by (source class name, file, line).
inline std::vector<ActivationSite> find_activation_sites(
    const Project& project, const StateSet& states,
    std::vector<ExtractionWarning>* warnings = nullptr) {
    std::vector<ActivationSite> sites;
    auto warn = [&](SourceLocation loc, WarningKind kind, std::string message) {
        if (warnings) warnings->push_back({std::move(loc), kind, std::move(message)});
    };

    for (const auto& [name, ids] : project.class_index()) {
        for (NodeId id : ids) {
            const ClassDecl& cls = project.class_at(id);
            bool is_state = false;
            if (auto it = states.nodes.find(name); it != states.nodes.end()) {
                is_state = it->second == id;
            }
            if (!is_state && !cls.is_abstract) continue;

            for (const MethodDecl& method : cls.methods) {
                const StatementList* body = method.body_list();
                if (!body) continue;  // opaque body from lenient parsing
                detail::walk_method_lists(
                    *body,
                    [&](const StatementList& list, std::size_t index, const Statement& stmt) {
                        const auto* es = std::get_if<ExprStmt>(&stmt.value);
                        if (!es) return;
                        auto target = detail::activation_target(es->expr);
                        if (!target) return;
                        SourceLocation loc = project.location(stmt.node);
                        if (cls.is_abstract) {
                            warn(std::move(loc), WarningKind::SkippedActivationInAbstractClass,
                                 "activation call in abstract class '" + cls.name +
                                     "' yields no transition");
                            return;
                        }
                        if (!states.contains(*target)) {
                            warn(std::move(loc), WarningKind::UnresolvedDst,
                                 "activation target '" + *target +
                                     "' is not a known state class");
                            return;
                        }
                        sites.push_back(ActivationSite{stmt.node, &cls, std::move(*target),
                                                       &method, &list, index, std::move(loc)});
                    });
            }
        }
    }
    return sites;
}

/// Trigger derivation, rules in order:
///   1. the method name, when the enclosing method is not run()
///   2. the constant of the nearest enclosing non-default switch case
///   3. the exception class simple name of the nearest enclosing catch
///   4. "--" (unconditional)
/// Rules 2 and 3 compete on the ancestor chain inside run(); the nearest
/// match wins, and an ambiguous-context warning is emitted whenever both
/// kinds enclose the site.
inline std::string derive_trigger(const Project& project, const ActivationSite& site,
                                  std::vector<ExtractionWarning>* warnings = nullptr) {
    if (site.enclosing_method->name != "run") return site.enclosing_method->name;

    std::optional<std::string> label;
    bool saw_normal_case = false;
    bool saw_catch = false;

    for (NodeId id : project.ancestors(site.node)) {
        NodeKind kind = project.kind(id);
        if (kind == NodeKind::MethodDecl) break;
        if (kind == NodeKind::SwitchCase) {
            const SwitchCase& arm = project.switch_case_at(id);
            if (arm.is_default()) continue;  // rule 2 is explicitly non-default
            saw_normal_case = true;
            if (!label) {
                auto constant = detail::trailing_identifier(*arm.condition);
                if (!constant) {
                    throw ExtractionError(project.location(id),
                                          "switch case condition is not a constant reference");
                }
                label = std::move(*constant);
            }
        } else if (kind == NodeKind::CatchClause) {
            saw_catch = true;
            if (!label) label = project.catch_at(id).exception_type_name;
        }
    }
    if (saw_normal_case && saw_catch && warnings) {
        warnings->push_back({site.location, WarningKind::AmbiguousContext,
                             "both a switch case and a catch clause enclose this activation; "
                             "the nearest determines the trigger"});
    }
    return label ? std::move(*label) : "--";
}

/// Action derivation: scans the innermost statement list holding the
/// activation for one-argument send(...) calls (this.send(...) included)
/// and picks the nearest one preceding the activation, else the first one
/// following, else "--". The action is the final identifier of the send
/// argument.
inline std::string derive_action(const Project& project, const ActivationSite& site) {
    const StatementList& list = *site.containing_list;
    std::optional<std::string> preceding;
    std::optional<std::string> following;

    for (std::size_t i = 0; i < list.statements.size(); ++i) {
        if (i == site.index_in_list) continue;
        const auto* es = std::get_if<ExprStmt>(&list.statements[i].value);
        if (!es) continue;
        const Expression* arg = detail::send_argument(es->expr);
        if (!arg) continue;
        auto constant = detail::trailing_identifier(*arg);
        if (!constant) {
            throw ExtractionError(project.location(list.statements[i].node),
                                  "send argument is not a constant reference");
        }
        if (i < site.index_in_list) {
            preceding = std::move(*constant);  // overwritten: nearest preceding wins
        } else if (!following) {
            following = std::move(*constant);
        }
    }
    if (preceding) return std::move(*preceding);
    if (following) return std::move(*following);
    return "--";
}

struct ExtractionResult {
    StateMachine machine;
    std::vector<ExtractionWarning> warnings;
};

/// Runs the full pipeline: states, sites, then one transition per site with
/// trigger/action filled per task selection (absent fields stay unset).
/// Duplicate transitions from distinct sites are kept: each activation call
/// is one transition. The result is canonical.
inline ExtractionResult build_state_machine(const Project& project,
                                            const std::string& root_name = "State",
                                            TaskLevel tasks = TaskLevel::Actions) {
    ExtractionResult result;
    StateSet states = collect_state_classes(project, root_name, &result.warnings);
    std::vector<ActivationSite> sites = find_activation_sites(project, states, &result.warnings);

    StateMachine machine;
    machine.states.reserve(states.names.size());
    for (const auto& name : states.names) machine.states.push_back(State{name});
    machine.transitions.reserve(sites.size());
    for (const auto& site : sites) {
        Transition t;
        t.src = site.src_class->name;
        t.dst = site.dst_name;
        if (tasks >= TaskLevel::Triggers) t.trigger = derive_trigger(project, site, &result.warnings);
        if (tasks >= TaskLevel::Actions) t.action = derive_action(project, site);
        machine.transitions.push_back(std::move(t));
    }
    result.machine = canonicalize(std::move(machine));
    return result;
}

}  // namespace stateharvest
