/// @file syntax_graph.hpp
/// @brief Immutable abstract syntax graph for the supported Java subset.
///
/// The graph is a forest of compilation units. Every structural node
/// (declarations, statement lists, statements, switch cases, catch clauses,
/// enum constants) carries a NodeId and an explicit parent link, so context
/// queries like ancestors() and enclosing_context() are O(depth) walks with
/// O(1) parent lookup. Expressions are plain values owned by their statement;
/// they have no identity of their own but are counted for graph statistics.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stateharvest {

// ---------------------------------------------------------------------------
// Identity and locations
// ---------------------------------------------------------------------------

/// Identifies one structural node within one Project. Ids are assigned in
/// pre-order per compilation unit and are never reused.
struct NodeId {
    static constexpr std::uint32_t npos = 0xffffffffu;

    std::uint32_t unit = npos;
    std::uint32_t local = npos;

    bool valid() const { return unit != npos && local != npos; }

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Line/column pair stored on every node; both are 1-based.
struct SourcePos {
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Full position used in diagnostics. Nodes store only SourcePos; the file
/// comes from the owning compilation unit.
struct SourceLocation {
    std::string file;
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    std::string to_string() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(column);
    }
};

/// Thrown on lookups with an unknown NodeId.
struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expression;

/// Literal token text as written (numbers, strings, chars, true/false/null).
struct Literal {
    std::string text;
};

struct IdentifierSegment {
    std::string name;
};

struct CallSegment {
    std::string name;
    std::vector<Expression> args;
};

struct NewSegment {
    std::string type_name;
    std::vector<Expression> args;
};

/// One link of a dotted reference chain, e.g. `Closed` . `Instance()` . `activate()`.
struct Segment {
    std::variant<IdentifierSegment, CallSegment, NewSegment> value;

    const IdentifierSegment* as_identifier() const { return std::get_if<IdentifierSegment>(&value); }
    const CallSegment* as_call() const { return std::get_if<CallSegment>(&value); }
};

struct ReferenceChain {
    std::vector<Segment> segments;  // never empty
};

struct BinaryExpr {
    std::unique_ptr<Expression> left;
    std::string op;
    std::unique_ptr<Expression> right;
};

struct Assignment {
    ReferenceChain target;
    std::unique_ptr<Expression> value;
};

struct Expression {
    std::variant<ReferenceChain, Literal, BinaryExpr, Assignment> value;

    const ReferenceChain* as_chain() const { return std::get_if<ReferenceChain>(&value); }
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Statement;

/// Ordered list of statements; the innermost holder of any statement. Method
/// bodies, block bodies, case bodies and catch bodies are all StatementLists.
struct StatementList {
    NodeId node;
    SourcePos pos;
    std::vector<Statement> statements;
};

struct BlockStmt {
    StatementList body;
};

/// A `case X:` or `default:` arm. condition is empty exactly for default.
struct SwitchCase {
    NodeId node;
    SourcePos pos;
    std::optional<Expression> condition;
    StatementList body;

    bool is_default() const { return !condition.has_value(); }
};

struct SwitchStmt {
    Expression selector;
    std::vector<SwitchCase> cases;
};

struct CatchClause {
    NodeId node;
    SourcePos pos;
    std::string exception_type_name;  // last dotted segment if qualified
    std::string param_name;
    StatementList body;
};

struct TryStmt {
    StatementList body;
    std::vector<CatchClause> catches;
};

struct IfStmt {
    Expression condition;
    StatementList then_body;
    std::optional<StatementList> else_body;
};

struct WhileStmt {
    Expression condition;
    StatementList body;
};

struct ForStmt {
    std::string header;  // raw text between the parentheses
    StatementList body;
};

struct ExprStmt {
    Expression expr;
};

struct ReturnStmt {
    std::optional<Expression> value;
};

struct LocalVarDecl {
    std::string name;
    std::string type_name;
    std::optional<Expression> initializer;
};

struct BreakStmt {};

struct Statement {
    NodeId node;
    SourcePos pos;
    std::variant<BlockStmt, SwitchStmt, TryStmt, IfStmt, WhileStmt, ForStmt,
                 ExprStmt, ReturnStmt, LocalVarDecl, BreakStmt>
        value;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct Param {
    std::string type_name;
    std::string name;
};

/// Placeholder for a member body that failed to parse in lenient mode. An
/// opaque body contributes no statements to any traversal.
struct OpaqueBody {};

struct MethodDecl {
    NodeId node;
    SourcePos pos;
    std::string name;
    bool is_static = false;
    std::string return_type_name;  // empty for constructors
    std::vector<Param> params;
    std::variant<StatementList, OpaqueBody> body;

    const StatementList* body_list() const { return std::get_if<StatementList>(&body); }
};

struct FieldDecl {
    NodeId node;
    SourcePos pos;
    std::string name;
    std::string type_name;
    std::optional<Expression> initializer;
    bool is_static = false;
};

struct ClassDecl {
    NodeId node;
    SourcePos pos;
    std::string name;
    bool is_abstract = false;
    std::optional<std::string> superclass_name;  // absent iff no extends clause
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
};

struct EnumConstant {
    NodeId node;
    SourcePos pos;
    std::string name;
};

struct EnumDecl {
    NodeId node;
    SourcePos pos;
    std::string name;
    std::vector<EnumConstant> constants;  // names unique within the enum
};

using TypeDecl = std::variant<ClassDecl, EnumDecl>;

// ---------------------------------------------------------------------------
// Node registry
// ---------------------------------------------------------------------------

enum class NodeKind : std::uint8_t {
    CompilationUnit,
    ClassDecl,
    EnumDecl,
    EnumConstant,
    MethodDecl,
    FieldDecl,
    StatementList,
    BlockStmt,
    SwitchStmt,
    SwitchCase,
    TryStmt,
    CatchClause,
    IfStmt,
    WhileStmt,
    ForStmt,
    ExprStmt,
    ReturnStmt,
    LocalVarDecl,
    BreakStmt,
};

inline bool is_statement_kind(NodeKind k) {
    switch (k) {
    case NodeKind::BlockStmt:
    case NodeKind::SwitchStmt:
    case NodeKind::TryStmt:
    case NodeKind::IfStmt:
    case NodeKind::WhileStmt:
    case NodeKind::ForStmt:
    case NodeKind::ExprStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::LocalVarDecl:
    case NodeKind::BreakStmt:
        return true;
    default:
        return false;
    }
}

inline const char* to_string(NodeKind k) {
    switch (k) {
    case NodeKind::CompilationUnit: return "CompilationUnit";
    case NodeKind::ClassDecl: return "ClassDecl";
    case NodeKind::EnumDecl: return "EnumDecl";
    case NodeKind::EnumConstant: return "EnumConstant";
    case NodeKind::MethodDecl: return "MethodDecl";
    case NodeKind::FieldDecl: return "FieldDecl";
    case NodeKind::StatementList: return "StatementList";
    case NodeKind::BlockStmt: return "BlockStmt";
    case NodeKind::SwitchStmt: return "SwitchStmt";
    case NodeKind::SwitchCase: return "SwitchCase";
    case NodeKind::TryStmt: return "TryStmt";
    case NodeKind::CatchClause: return "CatchClause";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::WhileStmt: return "WhileStmt";
    case NodeKind::ForStmt: return "ForStmt";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::LocalVarDecl: return "LocalVarDecl";
    case NodeKind::BreakStmt: return "BreakStmt";
    }
    return "?";
}

/// Registry row for one structural node. `node` points into the owning
/// unit's tree; it is null only for the unit root, which is resolved through
/// Project::units() instead.
struct NodeEntry {
    NodeKind kind;
    SourcePos pos;
    NodeId parent;
    const void* node;
};

// ---------------------------------------------------------------------------
// Compilation unit
// ---------------------------------------------------------------------------

struct CompilationUnit {
    NodeId node;
    std::string file;
    std::optional<std::string> package_name;  // recorded, not used for resolution
    std::vector<std::string> imports;         // recorded, not used for resolution
    std::vector<TypeDecl> types;
    std::uint32_t line_count = 0;

    // Filled by finalize_unit. `nodes[i]` describes the node with local id i;
    // local id 0 is the unit itself.
    std::vector<NodeEntry> nodes;
    std::uint64_t expression_node_count = 0;
};

namespace detail {

/// Assigns NodeIds, parent links and registry entries for one parsed unit.
/// Ids follow pre-order over the tree, so registry order equals source order.
class UnitFinalizer {
public:
    explicit UnitFinalizer(CompilationUnit& unit, std::uint32_t unit_index)
        : unit_(unit), index_(unit_index) {}

    void run() {
        unit_.nodes.clear();
        unit_.expression_node_count = 0;
        unit_.node = add(NodeKind::CompilationUnit, SourcePos{1, 1}, NodeId{}, nullptr);
        for (auto& type : unit_.types) {
            if (auto* cls = std::get_if<ClassDecl>(&type)) {
                visit_class(*cls, unit_.node);
            } else {
                visit_enum(std::get<EnumDecl>(type), unit_.node);
            }
        }
    }

private:
    NodeId add(NodeKind kind, SourcePos pos, NodeId parent, const void* node) {
        NodeId id{index_, static_cast<std::uint32_t>(unit_.nodes.size())};
        unit_.nodes.push_back(NodeEntry{kind, pos, parent, node});
        return id;
    }

    void visit_class(ClassDecl& cls, NodeId parent) {
        cls.node = add(NodeKind::ClassDecl, cls.pos, parent, &cls);
        for (auto& field : cls.fields) {
            field.node = add(NodeKind::FieldDecl, field.pos, cls.node, &field);
            if (field.initializer) count_expr(*field.initializer);
        }
        for (auto& method : cls.methods) {
            method.node = add(NodeKind::MethodDecl, method.pos, cls.node, &method);
            if (auto* body = std::get_if<StatementList>(&method.body)) {
                visit_list(*body, method.node);
            }
        }
    }

    void visit_enum(EnumDecl& en, NodeId parent) {
        en.node = add(NodeKind::EnumDecl, en.pos, parent, &en);
        for (auto& constant : en.constants) {
            constant.node = add(NodeKind::EnumConstant, constant.pos, en.node, &constant);
        }
    }

    void visit_list(StatementList& list, NodeId parent) {
        list.node = add(NodeKind::StatementList, list.pos, parent, &list);
        for (auto& stmt : list.statements) visit_stmt(stmt, list.node);
    }

    void visit_stmt(Statement& stmt, NodeId parent) {
        NodeKind kind = std::visit(
            [](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, BlockStmt>) return NodeKind::BlockStmt;
                else if constexpr (std::is_same_v<T, SwitchStmt>) return NodeKind::SwitchStmt;
                else if constexpr (std::is_same_v<T, TryStmt>) return NodeKind::TryStmt;
                else if constexpr (std::is_same_v<T, IfStmt>) return NodeKind::IfStmt;
                else if constexpr (std::is_same_v<T, WhileStmt>) return NodeKind::WhileStmt;
                else if constexpr (std::is_same_v<T, ForStmt>) return NodeKind::ForStmt;
                else if constexpr (std::is_same_v<T, ExprStmt>) return NodeKind::ExprStmt;
                else if constexpr (std::is_same_v<T, ReturnStmt>) return NodeKind::ReturnStmt;
                else if constexpr (std::is_same_v<T, LocalVarDecl>) return NodeKind::LocalVarDecl;
                else return NodeKind::BreakStmt;
            },
            stmt.value);
        stmt.node = add(kind, stmt.pos, parent, &stmt);

        std::visit(
            [&](auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, BlockStmt>) {
                    visit_list(v.body, stmt.node);
                } else if constexpr (std::is_same_v<T, SwitchStmt>) {
                    count_expr(v.selector);
                    for (auto& arm : v.cases) {
                        arm.node = add(NodeKind::SwitchCase, arm.pos, stmt.node, &arm);
                        if (arm.condition) count_expr(*arm.condition);
                        visit_list(arm.body, arm.node);
                    }
                } else if constexpr (std::is_same_v<T, TryStmt>) {
                    visit_list(v.body, stmt.node);
                    for (auto& handler : v.catches) {
                        handler.node = add(NodeKind::CatchClause, handler.pos, stmt.node, &handler);
                        visit_list(handler.body, handler.node);
                    }
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    count_expr(v.condition);
                    visit_list(v.then_body, stmt.node);
                    if (v.else_body) visit_list(*v.else_body, stmt.node);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    count_expr(v.condition);
                    visit_list(v.body, stmt.node);
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    visit_list(v.body, stmt.node);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    count_expr(v.expr);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (v.value) count_expr(*v.value);
                } else if constexpr (std::is_same_v<T, LocalVarDecl>) {
                    if (v.initializer) count_expr(*v.initializer);
                }
            },
            stmt.value);
    }

    void count_expr(const Expression& expr) {
        ++unit_.expression_node_count;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, ReferenceChain>) {
                    count_chain(v);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    count_expr(*v.left);
                    count_expr(*v.right);
                } else if constexpr (std::is_same_v<T, Assignment>) {
                    count_chain(v.target);
                    count_expr(*v.value);
                }
            },
            expr.value);
    }

    void count_chain(const ReferenceChain& chain) {
        for (const auto& seg : chain.segments) {
            ++unit_.expression_node_count;
            std::visit(
                [&](const auto& s) {
                    using S = std::decay_t<decltype(s)>;
                    if constexpr (!std::is_same_v<S, IdentifierSegment>) {
                        for (const auto& arg : s.args) count_expr(arg);
                    }
                },
                seg.value);
        }
    }

    CompilationUnit& unit_;
    std::uint32_t index_;
};

}  // namespace detail

inline void finalize_unit(CompilationUnit& unit, std::uint32_t unit_index) {
    detail::UnitFinalizer(unit, unit_index).run();
}

// ---------------------------------------------------------------------------
// Project
// ---------------------------------------------------------------------------

/// Immutable forest of compilation units with name indexes. Safe to query
/// from multiple threads once constructed. Move-only: registry entries point
/// into the unit trees, which copying would detach.
class Project {
public:
    Project() = default;

    /// Takes ownership of finalized units. Units must already be sorted by
    /// file path and finalized with their position as unit index.
    explicit Project(std::vector<CompilationUnit> units) : units_(std::move(units)) {
        for (const auto& unit : units_) {
            for (const auto& type : unit.types) {
                if (const auto* cls = std::get_if<ClassDecl>(&type)) {
                    class_index_[cls->name].push_back(cls->node);
                } else {
                    const auto& en = std::get<EnumDecl>(type);
                    enum_index_[en.name].push_back(en.node);
                }
            }
        }
    }

    Project(Project&&) = default;
    Project& operator=(Project&&) = default;
    Project(const Project&) = delete;
    Project& operator=(const Project&) = delete;

    const std::vector<CompilationUnit>& units() const { return units_; }

    /// Simple class name -> declarations, in unit order. A name declared
    /// twice keeps both entries; extraction decides what to do with them.
    const std::map<std::string, std::vector<NodeId>>& class_index() const { return class_index_; }
    const std::map<std::string, std::vector<NodeId>>& enum_index() const { return enum_index_; }

    const std::vector<NodeId>* find_classes(const std::string& name) const {
        auto it = class_index_.find(name);
        return it == class_index_.end() ? nullptr : &it->second;
    }

    const NodeEntry& entry(NodeId id) const {
        if (id.unit >= units_.size() || id.local >= units_[id.unit].nodes.size()) {
            throw GraphError("unknown node id " + std::to_string(id.unit) + ":" +
                             std::to_string(id.local));
        }
        return units_[id.unit].nodes[id.local];
    }

    NodeKind kind(NodeId id) const { return entry(id).kind; }
    NodeId parent(NodeId id) const { return entry(id).parent; }

    SourceLocation location(NodeId id) const {
        const NodeEntry& e = entry(id);
        return SourceLocation{units_[id.unit].file, e.pos.line, e.pos.column};
    }

    const CompilationUnit& unit_at(NodeId id) const {
        check_kind(id, NodeKind::CompilationUnit);
        return units_[id.unit];
    }

    const ClassDecl& class_at(NodeId id) const { return node_at<ClassDecl>(id, NodeKind::ClassDecl); }
    const EnumDecl& enum_at(NodeId id) const { return node_at<EnumDecl>(id, NodeKind::EnumDecl); }
    const MethodDecl& method_at(NodeId id) const { return node_at<MethodDecl>(id, NodeKind::MethodDecl); }
    const StatementList& list_at(NodeId id) const { return node_at<StatementList>(id, NodeKind::StatementList); }
    const SwitchCase& switch_case_at(NodeId id) const { return node_at<SwitchCase>(id, NodeKind::SwitchCase); }
    const CatchClause& catch_at(NodeId id) const { return node_at<CatchClause>(id, NodeKind::CatchClause); }
    const Statement& statement_at(NodeId id) const {
        const NodeEntry& e = entry(id);
        if (!is_statement_kind(e.kind)) {
            throw GraphError(std::string("node is not a statement: ") + to_string(e.kind));
        }
        return *static_cast<const Statement*>(e.node);
    }

    /// Parent chain of `node`, nearest first, ending at its compilation unit.
    /// The unit root itself has no ancestors.
    std::vector<NodeId> ancestors(NodeId node) const {
        std::vector<NodeId> chain;
        NodeId cur = entry(node).parent;
        while (cur.valid()) {
            chain.push_back(cur);
            cur = entry(cur).parent;
        }
        return chain;
    }

    struct EnclosingContext {
        const MethodDecl* method = nullptr;
        const ClassDecl* class_decl = nullptr;
    };

    /// Nearest enclosing method and class declarations on the ancestor chain.
    /// A node is not its own ancestor, so asking for a ClassDecl's context
    /// yields neither.
    EnclosingContext enclosing_context(NodeId node) const {
        EnclosingContext ctx;
        NodeId cur = entry(node).parent;
        while (cur.valid()) {
            const NodeEntry& e = entry(cur);
            if (e.kind == NodeKind::MethodDecl && !ctx.method) {
                ctx.method = static_cast<const MethodDecl*>(e.node);
            } else if (e.kind == NodeKind::ClassDecl) {
                ctx.class_decl = static_cast<const ClassDecl*>(e.node);
                break;  // methods never nest inside other methods in this subset
            }
            cur = e.parent;
        }
        return ctx;
    }

private:
    void check_kind(NodeId id, NodeKind expected) const {
        const NodeEntry& e = entry(id);
        if (e.kind != expected) {
            throw GraphError(std::string("expected ") + to_string(expected) + ", node is " +
                             to_string(e.kind));
        }
    }

    template <typename T>
    const T& node_at(NodeId id, NodeKind expected) const {
        check_kind(id, expected);
        return *static_cast<const T*>(entry(id).node);
    }

    std::vector<CompilationUnit> units_;
    std::map<std::string, std::vector<NodeId>> class_index_;
    std::map<std::string, std::vector<NodeId>> enum_index_;
};

// ---------------------------------------------------------------------------
// Graph statistics
// ---------------------------------------------------------------------------

/// Element accounting for the `stats` command. Every registry node and every
/// expression node counts as one node; every node except unit roots hangs off
/// its parent by exactly one edge.
struct GraphCounts {
    std::uint64_t files = 0;
    std::uint64_t classes = 0;
    std::uint64_t methods = 0;
    std::uint64_t statement_nodes = 0;
    std::uint64_t expression_nodes = 0;
    std::uint64_t total_nodes = 0;
    std::uint64_t parent_edges = 0;

    std::uint64_t nodes_plus_edges() const { return total_nodes + parent_edges; }
};

inline GraphCounts count_graph(const Project& project) {
    GraphCounts counts;
    counts.files = project.units().size();
    for (const auto& unit : project.units()) {
        for (const auto& e : unit.nodes) {
            switch (e.kind) {
            case NodeKind::ClassDecl: ++counts.classes; break;
            case NodeKind::MethodDecl: ++counts.methods; break;
            default:
                if (is_statement_kind(e.kind)) ++counts.statement_nodes;
                break;
            }
        }
        std::uint64_t registry_nodes = unit.nodes.size();
        counts.total_nodes += registry_nodes + unit.expression_node_count;
        counts.parent_edges += (registry_nodes - 1) + unit.expression_node_count;
        counts.expression_nodes += unit.expression_node_count;
    }
    return counts;
}

}  // namespace stateharvest
