/// @file skeleton.hpp
/// @brief Flattens a compilation unit to its declaration skeleton:
/// declaration names, nesting, and statement kinds in source order, one
/// line per element, two-space indentation per depth.
///
/// The corpus generator records the same skeleton while writing Java, so
/// comparing the two texts validates the parse structurally without
/// comparing token-level syntax.

#pragma once

#include "stateharvest/syntax_graph.hpp"

#include <string>

namespace stateharvest {
namespace detail {

class SkeletonPrinter {
public:
    std::string take() { return std::move(out_); }

    void line(int depth, const std::string& text) {
        out_.append(static_cast<std::size_t>(depth) * 2, ' ');
        out_ += text;
        out_ += '\n';
    }

    void print_unit(const CompilationUnit& unit) {
        for (const auto& type : unit.types) {
            std::visit([&](const auto& decl) { print_type(decl); }, type);
        }
    }

private:
    void print_type(const ClassDecl& cls) {
        std::string head = cls.is_abstract ? "abstract class " : "class ";
        head += cls.name;
        if (cls.superclass_name) head += " extends " + *cls.superclass_name;
        line(0, head);
        for (const auto& field : cls.fields) line(1, "field " + field.name);
        for (const auto& method : cls.methods) {
            line(1, "method " + method.name);
            if (const StatementList* body = method.body_list()) {
                print_list(*body, 2);
            } else {
                line(2, "opaque");
            }
        }
    }

    void print_type(const EnumDecl& en) {
        line(0, "enum " + en.name);
        for (const auto& constant : en.constants) line(1, "constant " + constant.name);
    }

    void print_list(const StatementList& list, int depth) {
        for (const auto& stmt : list.statements) print_statement(stmt, depth);
    }

    void print_statement(const Statement& stmt, int depth) {
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, BlockStmt>) {
                    line(depth, "block");
                    print_list(s.body, depth + 1);
                } else if constexpr (std::is_same_v<S, SwitchStmt>) {
                    line(depth, "switch");
                    for (const auto& arm : s.cases) {
                        line(depth + 1, arm.is_default() ? "default" : "case");
                        print_list(arm.body, depth + 2);
                    }
                } else if constexpr (std::is_same_v<S, TryStmt>) {
                    line(depth, "try");
                    print_list(s.body, depth + 1);
                    for (const auto& handler : s.catches) {
                        line(depth, "catch");
                        print_list(handler.body, depth + 1);
                    }
                } else if constexpr (std::is_same_v<S, IfStmt>) {
                    line(depth, "if");
                    print_list(s.then_body, depth + 1);
                    if (s.else_body) {
                        line(depth, "else");
                        print_list(*s.else_body, depth + 1);
                    }
                } else if constexpr (std::is_same_v<S, WhileStmt>) {
                    line(depth, "while");
                    print_list(s.body, depth + 1);
                } else if constexpr (std::is_same_v<S, ForStmt>) {
                    line(depth, "for");
                    print_list(s.body, depth + 1);
                } else if constexpr (std::is_same_v<S, ExprStmt>) {
                    line(depth, "expr");
                } else if constexpr (std::is_same_v<S, ReturnStmt>) {
                    line(depth, "return");
                } else if constexpr (std::is_same_v<S, LocalVarDecl>) {
                    line(depth, "local " + s.name);
                } else if constexpr (std::is_same_v<S, BreakStmt>) {
                    line(depth, "break");
                }
            },
            stmt.value);
    }

    std::string out_;
};

}  // namespace detail

inline std::string skeleton_of(const CompilationUnit& unit) {
    detail::SkeletonPrinter printer;
    printer.print_unit(unit);
    return printer.take();
}

}  // namespace stateharvest
