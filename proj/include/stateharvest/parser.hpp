/// @file parser.hpp
/// @brief Recursive-descent parser translating Java source files in the
/// supported subset into syntax_graph structures.
///
/// The grammar is documented in docs/grammar.md. Two modes:
///   - strict: the first syntax error aborts the unit.
///   - lenient: a member body that fails to parse is consumed to its matching
///     closing brace and recorded as an opaque body (with a warning);
///     declarations outside method bodies still fail hard.

#pragma once

#include "stateharvest/lexer.hpp"
#include "stateharvest/syntax_graph.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace stateharvest {

enum class ParseMode : std::uint8_t { Strict, Lenient };

struct ParseWarning {
    SourceLocation location;
    std::string message;

    std::string to_line() const {
        return "WARN opaque-member-body " + location.to_string() + " " + message;
    }
};

struct UnitParseResult {
    std::optional<CompilationUnit> unit;
    std::vector<ParseError> errors;
    std::vector<ParseWarning> warnings;

    bool ok() const { return unit.has_value(); }
};

namespace detail {

class JavaParser {
public:
    JavaParser(std::string_view source, std::string file, ParseMode mode)
        : file_(std::move(file)), mode_(mode), tokens_(tokenize(source, file_)) {
        line_count_ = 1;
        for (char c : source) {
            if (c == '\n') ++line_count_;
        }
    }

    CompilationUnit parse_unit() {
        CompilationUnit unit;
        unit.file = file_;
        unit.line_count = line_count_;

        if (at_keyword("package")) {
            next();
            unit.package_name = parse_qualified_name();
            expect_punct(";");
        }
        while (at_keyword("import")) {
            next();
            if (at_keyword("static")) next();
            std::string name = parse_qualified_name();
            if (at_punct(".")) {  // wildcard import
                next();
                expect_punct("*");
                name += ".*";
            }
            expect_punct(";");
            unit.imports.push_back(std::move(name));
        }
        while (!at_end()) {
            if (at_punct(";")) {  // stray semicolon between declarations
                next();
                continue;
            }
            unit.types.push_back(parse_type_decl());
        }
        return unit;
    }

    std::vector<ParseWarning>& warnings() { return warnings_; }

private:
    // --- token access ------------------------------------------------------

    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek(std::size_t k = 1) const {
        return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
    }
    void next() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    bool at_end() const { return cur().kind == TokenKind::EndOfFile; }
    bool at_punct(std::string_view t) const { return cur().is_punct(t); }
    bool at_keyword(std::string_view t) const { return cur().is_keyword(t); }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = at_end() ? "end of file" : "'" + cur().text + "'";
        throw ParseError(location(cur().pos), expected, found);
    }

    SourceLocation location(SourcePos pos) const {
        return SourceLocation{file_, pos.line, pos.column};
    }

    void expect_punct(std::string_view t) {
        if (!at_punct(t)) fail("'" + std::string(t) + "'");
        next();
    }

    void expect_keyword(std::string_view t) {
        if (!at_keyword(t)) fail("'" + std::string(t) + "'");
        next();
    }

    std::string expect_identifier(const char* what = "identifier") {
        if (cur().kind != TokenKind::Identifier) fail(what);
        std::string name = cur().text;
        next();
        return name;
    }

    // --- names and types ----------------------------------------------------

    std::string parse_qualified_name() {
        std::string name = expect_identifier();
        while (at_punct(".") && peek().kind == TokenKind::Identifier) {
            next();
            name += "." + expect_identifier();
        }
        return name;
    }

    /// Parses a type: qualified name (or void) with optional generic
    /// arguments and array brackets, returned as raw text. Generic argument
    /// text is appended verbatim.
    std::string parse_type_name() {
        std::string text;
        if (at_keyword("void")) {
            next();
            return "void";
        }
        text = expect_identifier("type name");
        while (at_punct(".") && peek().kind == TokenKind::Identifier) {
            next();
            text += "." + expect_identifier();
        }
        if (at_punct("<")) text += consume_generic_args();
        while (at_punct("[")) {
            next();
            expect_punct("]");
            text += "[]";
        }
        return text;
    }

    /// Consumes a balanced `<...>` group and returns its raw text. Only
    /// type-argument tokens are allowed inside; anything else fails, which
    /// lets the speculative local-variable lookahead back out of plain
    /// less-than comparisons.
    std::string consume_generic_args() {
        std::string text = "<";
        expect_punct("<");
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail("'>'");
            if (at_punct("<")) {
                ++depth;
                text += "<";
                next();
            } else if (at_punct(">")) {
                --depth;
                text += ">";
                next();
            } else if (cur().kind == TokenKind::Identifier || at_punct(",") || at_punct(".") ||
                       at_punct("?") || at_punct("[") || at_punct("]") || at_keyword("extends")) {
                text += cur().text;
                next();
            } else {
                fail("type argument");
            }
        }
        return text;
    }

    static std::string simple_name(const std::string& qualified) {
        auto dot = qualified.rfind('.');
        return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
    }

    /// Strips generic arguments and array brackets from a raw type text,
    /// keeping the last dotted segment.
    static std::string simple_type_name(const std::string& raw) {
        std::string base = raw.substr(0, raw.find_first_of("<["));
        return simple_name(base);
    }

    // --- declarations -------------------------------------------------------

    struct Modifiers {
        bool is_abstract = false;
        bool is_static = false;
    };

    Modifiers parse_modifiers() {
        Modifiers mods;
        for (;;) {
            if (at_keyword("abstract")) {
                mods.is_abstract = true;
                next();
            } else if (at_keyword("static")) {
                mods.is_static = true;
                next();
            } else if (at_keyword("public") || at_keyword("private") || at_keyword("protected") ||
                       at_keyword("final")) {
                next();
            } else if (at_punct("@")) {
                consume_annotation();
            } else {
                return mods;
            }
        }
    }

    void consume_annotation() {
        expect_punct("@");
        parse_qualified_name();
        if (at_punct("(")) {
            int depth = 0;
            do {
                if (at_end()) fail("')'");
                if (at_punct("(")) ++depth;
                if (at_punct(")")) --depth;
                next();
            } while (depth > 0);
        }
    }

    TypeDecl parse_type_decl() {
        Modifiers mods = parse_modifiers();
        if (at_keyword("class")) return parse_class(mods);
        if (at_keyword("enum")) return parse_enum();
        fail("'class' or 'enum'");
    }

    ClassDecl parse_class(const Modifiers& mods) {
        expect_keyword("class");
        ClassDecl cls;
        cls.pos = cur().pos;
        cls.name = expect_identifier("class name");
        cls.is_abstract = mods.is_abstract;
        if (at_punct("<")) consume_generic_args();
        if (at_keyword("extends")) {
            next();
            cls.superclass_name = simple_type_name(parse_type_name());
        }
        if (at_keyword("implements")) {
            next();
            parse_type_name();
            while (at_punct(",")) {
                next();
                parse_type_name();
            }
        }
        expect_punct("{");
        while (!at_punct("}")) {
            if (at_end()) fail("'}'");
            if (at_punct(";")) {
                next();
                continue;
            }
            parse_member(cls);
        }
        next();  // '}'
        return cls;
    }

    EnumDecl parse_enum() {
        expect_keyword("enum");
        EnumDecl en;
        en.pos = cur().pos;
        en.name = expect_identifier("enum name");
        expect_punct("{");
        if (cur().kind == TokenKind::Identifier) {
            for (;;) {
                EnumConstant constant;
                constant.pos = cur().pos;
                constant.name = expect_identifier("enum constant");
                en.constants.push_back(std::move(constant));
                if (at_punct(",")) {
                    next();
                    if (at_punct("}") || at_punct(";")) break;  // trailing comma
                    continue;
                }
                break;
            }
        }
        if (at_punct(";")) next();
        expect_punct("}");
        for (std::size_t a = 0; a < en.constants.size(); ++a) {
            for (std::size_t b = a + 1; b < en.constants.size(); ++b) {
                if (en.constants[a].name == en.constants[b].name) {
                    throw ParseError(location(en.constants[b].pos), "unique enum constant",
                                     "duplicate '" + en.constants[b].name + "'");
                }
            }
        }
        return en;
    }

    void parse_member(ClassDecl& cls) {
        Modifiers mods = parse_modifiers();

        // Constructor: the class name directly followed by '('.
        if (cur().kind == TokenKind::Identifier && cur().text == cls.name && peek().is_punct("(")) {
            MethodDecl ctor;
            ctor.pos = cur().pos;
            ctor.name = expect_identifier();
            ctor.is_static = mods.is_static;
            ctor.params = parse_params();
            ctor.body = parse_member_body(ctor.name);
            cls.methods.push_back(std::move(ctor));
            return;
        }

        std::string type = parse_type_name();
        SourcePos name_pos = cur().pos;
        std::string name = expect_identifier("member name");

        if (at_punct("(")) {
            MethodDecl method;
            method.pos = name_pos;
            method.name = std::move(name);
            method.is_static = mods.is_static;
            method.return_type_name = std::move(type);
            method.params = parse_params();
            method.body = parse_member_body(method.name);
            cls.methods.push_back(std::move(method));
            return;
        }

        FieldDecl field;
        field.pos = name_pos;
        field.name = std::move(name);
        field.type_name = std::move(type);
        field.is_static = mods.is_static;
        if (at_punct("=")) {
            next();
            field.initializer = parse_expression();
        }
        expect_punct(";");
        cls.fields.push_back(std::move(field));
    }

    std::vector<Param> parse_params() {
        expect_punct("(");
        std::vector<Param> params;
        if (!at_punct(")")) {
            for (;;) {
                Param p;
                p.type_name = parse_type_name();
                p.name = expect_identifier("parameter name");
                params.push_back(std::move(p));
                if (at_punct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        return params;
    }

    /// Parses a `{...}` member body. In lenient mode a body that fails to
    /// parse is skipped to its matching closing brace and recorded opaque.
    std::variant<StatementList, OpaqueBody> parse_member_body(const std::string& member_name) {
        if (!at_punct("{")) fail("'{'");
        std::size_t body_start = pos_;
        SourcePos body_pos = cur().pos;
        try {
            return parse_statement_list();
        } catch (const ParseError& e) {
            if (mode_ != ParseMode::Lenient) throw;
            pos_ = body_start;
            skip_balanced_braces();
            warnings_.push_back(ParseWarning{
                location(body_pos),
                "body of '" + member_name + "' not in the supported subset, recorded opaque (" +
                    e.expected + " expected at " + e.location.to_string() + ")"});
            return OpaqueBody{};
        }
    }

    /// Skips one balanced `{...}` group. Literals were tokenized up front,
    /// so braces inside strings or comments cannot confuse the counter.
    void skip_balanced_braces() {
        int depth = 0;
        do {
            if (at_end()) fail("'}'");
            if (at_punct("{")) ++depth;
            if (at_punct("}")) --depth;
            next();
        } while (depth > 0);
    }

    // --- statements ---------------------------------------------------------

    StatementList parse_statement_list() {
        StatementList list;
        list.pos = cur().pos;
        expect_punct("{");
        while (!at_punct("}")) {
            if (at_end()) fail("'}'");
            if (at_punct(";")) {
                next();
                continue;
            }
            list.statements.push_back(parse_statement());
        }
        next();  // '}'
        return list;
    }

    /// A loop/branch body: either a braced list or a single statement
    /// wrapped in a one-element list.
    StatementList parse_body() {
        if (at_punct("{")) return parse_statement_list();
        StatementList list;
        list.pos = cur().pos;
        list.statements.push_back(parse_statement());
        return list;
    }

    Statement parse_statement() {
        Statement stmt;
        stmt.pos = cur().pos;

        if (at_punct("{")) {
            stmt.value = BlockStmt{parse_statement_list()};
            return stmt;
        }
        if (at_keyword("switch")) {
            next();
            expect_punct("(");
            SwitchStmt sw;
            sw.selector = parse_expression();
            expect_punct(")");
            expect_punct("{");
            while (!at_punct("}")) {
                if (at_end()) fail("'}'");
                sw.cases.push_back(parse_switch_case());
            }
            next();  // '}'
            stmt.value = std::move(sw);
            return stmt;
        }
        if (at_keyword("try")) {
            next();
            TryStmt tr;
            tr.body = parse_statement_list();
            while (at_keyword("catch")) {
                tr.catches.push_back(parse_catch_clause());
            }
            if (tr.catches.empty()) fail("'catch'");
            stmt.value = std::move(tr);
            return stmt;
        }
        if (at_keyword("if")) {
            next();
            expect_punct("(");
            IfStmt branch;
            branch.condition = parse_expression();
            expect_punct(")");
            branch.then_body = parse_body();
            if (at_keyword("else")) {
                next();
                branch.else_body = parse_body();
            }
            stmt.value = std::move(branch);
            return stmt;
        }
        if (at_keyword("while")) {
            next();
            expect_punct("(");
            WhileStmt loop;
            loop.condition = parse_expression();
            expect_punct(")");
            loop.body = parse_body();
            stmt.value = std::move(loop);
            return stmt;
        }
        if (at_keyword("for")) {
            next();
            expect_punct("(");
            ForStmt loop;
            loop.header = consume_raw_parens_content();
            loop.body = parse_body();
            stmt.value = std::move(loop);
            return stmt;
        }
        if (at_keyword("return")) {
            next();
            ReturnStmt ret;
            if (!at_punct(";")) ret.value = parse_expression();
            expect_punct(";");
            stmt.value = std::move(ret);
            return stmt;
        }
        if (at_keyword("break")) {
            next();
            expect_punct(";");
            stmt.value = BreakStmt{};
            return stmt;
        }

        if (auto decl = try_parse_local_var_decl()) {
            stmt.value = std::move(*decl);
            return stmt;
        }

        ExprStmt es;
        es.expr = parse_expression();
        expect_punct(";");
        stmt.value = std::move(es);
        return stmt;
    }

    SwitchCase parse_switch_case() {
        SwitchCase arm;
        arm.pos = cur().pos;
        if (at_keyword("case")) {
            next();
            arm.condition = parse_expression();
            expect_punct(":");
        } else if (at_keyword("default")) {
            next();
            expect_punct(":");
        } else {
            fail("'case' or 'default'");
        }
        arm.body.pos = cur().pos;
        while (!at_punct("}") && !at_keyword("case") && !at_keyword("default")) {
            if (at_end()) fail("'}'");
            if (at_punct(";")) {
                next();
                continue;
            }
            arm.body.statements.push_back(parse_statement());
        }
        return arm;
    }

    CatchClause parse_catch_clause() {
        CatchClause handler;
        handler.pos = cur().pos;
        expect_keyword("catch");
        expect_punct("(");
        handler.exception_type_name = simple_type_name(parse_type_name());
        handler.param_name = expect_identifier("exception variable");
        expect_punct(")");
        handler.body = parse_statement_list();
        return handler;
    }

    /// Raw text between the parentheses of a for header, tokens joined with
    /// single spaces.
    std::string consume_raw_parens_content() {
        std::string text;
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail("')'");
            if (at_punct("(")) ++depth;
            if (at_punct(")")) {
                --depth;
                if (depth == 0) {
                    next();
                    break;
                }
            }
            if (!text.empty()) text += ' ';
            text += cur().text;
            next();
        }
        return text;
    }

    /// Speculative parse of `Type name = ...;` or `Type name;`. Backtracks
    /// and returns nothing when the statement is not a declaration.
    std::optional<LocalVarDecl> try_parse_local_var_decl() {
        if (cur().kind != TokenKind::Identifier) return std::nullopt;
        std::size_t saved = pos_;
        try {
            LocalVarDecl decl;
            decl.type_name = parse_type_name();
            if (cur().kind != TokenKind::Identifier) {
                pos_ = saved;
                return std::nullopt;
            }
            decl.name = cur().text;
            next();
            if (at_punct("=")) {
                next();
                decl.initializer = parse_expression();
                expect_punct(";");
                return decl;
            }
            if (at_punct(";")) {
                next();
                return decl;
            }
            pos_ = saved;
            return std::nullopt;
        } catch (const ParseError&) {
            pos_ = saved;
            return std::nullopt;
        }
    }

    // --- expressions ----------------------------------------------------------

    Expression parse_expression() {
        Expression lhs = parse_binary(0);
        if (at_punct("=")) {
            auto* chain = std::get_if<ReferenceChain>(&lhs.value);
            if (!chain) fail("assignable reference before '='");
            next();
            Assignment assign;
            assign.target = std::move(*chain);
            assign.value = std::make_unique<Expression>(parse_expression());
            return Expression{std::move(assign)};
        }
        return lhs;
    }

    static int precedence_of(const Token& t) {
        if (t.kind != TokenKind::Punct) return -1;
        const std::string& op = t.text;
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=") return 3;
        if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
        if (op == "+" || op == "-") return 5;
        if (op == "*" || op == "/" || op == "%") return 6;
        return -1;
    }

    Expression parse_binary(int min_prec) {
        Expression lhs = parse_primary();
        for (;;) {
            int prec = precedence_of(cur());
            if (prec < 0 || prec < min_prec) return lhs;
            std::string op = cur().text;
            next();
            Expression rhs = parse_binary(prec + 1);
            BinaryExpr bin;
            bin.left = std::make_unique<Expression>(std::move(lhs));
            bin.op = std::move(op);
            bin.right = std::make_unique<Expression>(std::move(rhs));
            lhs = Expression{std::move(bin)};
        }
    }

    Expression parse_primary() {
        const Token& t = cur();
        switch (t.kind) {
        case TokenKind::NumberLiteral:
        case TokenKind::StringLiteral:
        case TokenKind::CharLiteral: {
            Literal lit{t.text};
            next();
            return Expression{std::move(lit)};
        }
        case TokenKind::Keyword:
            if (t.text == "null" || t.text == "true" || t.text == "false") {
                Literal lit{t.text};
                next();
                return Expression{std::move(lit)};
            }
            if (t.text == "this" || t.text == "new") return Expression{parse_reference_chain()};
            fail("expression");
        case TokenKind::Identifier:
            return Expression{parse_reference_chain()};
        case TokenKind::Punct:
            if (t.text == "(") {
                next();
                Expression inner = parse_expression();  // parentheses are transparent
                expect_punct(")");
                return inner;
            }
            if (t.text == "-" && peek().kind == TokenKind::NumberLiteral) {
                Literal lit{"-" + peek().text};
                next();
                next();
                return Expression{std::move(lit)};
            }
            fail("expression");
        default:
            fail("expression");
        }
    }

    ReferenceChain parse_reference_chain() {
        ReferenceChain chain;
        chain.segments.push_back(parse_segment(true));
        while (at_punct(".") && (peek().kind == TokenKind::Identifier || peek().is_keyword("this"))) {
            next();
            chain.segments.push_back(parse_segment(false));
        }
        return chain;
    }

    Segment parse_segment(bool head) {
        if (head && at_keyword("new")) {
            next();
            NewSegment seg;
            seg.type_name = parse_type_name();
            seg.args = parse_call_args();
            return Segment{std::move(seg)};
        }
        std::string name;
        if (at_keyword("this")) {
            name = "this";
            next();
        } else {
            name = expect_identifier("reference");
        }
        if (at_punct("(")) {
            CallSegment seg;
            seg.name = std::move(name);
            seg.args = parse_call_args();
            return Segment{std::move(seg)};
        }
        return Segment{IdentifierSegment{std::move(name)}};
    }

    std::vector<Expression> parse_call_args() {
        expect_punct("(");
        std::vector<Expression> args;
        if (!at_punct(")")) {
            for (;;) {
                args.push_back(parse_expression());
                if (at_punct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        return args;
    }

    std::string file_;
    ParseMode mode_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::uint32_t line_count_ = 0;
    std::vector<ParseWarning> warnings_;
};

}  // namespace detail

/// Parses one source file. On success the unit is finalized (node ids and
/// parent links assigned) with the given unit index.
inline UnitParseResult parse_unit(std::string_view source, std::string file,
                                  ParseMode mode = ParseMode::Strict,
                                  std::uint32_t unit_index = 0) {
    UnitParseResult result;
    try {
        detail::JavaParser parser(source, std::move(file), mode);
        CompilationUnit unit = parser.parse_unit();
        result.warnings = std::move(parser.warnings());
        finalize_unit(unit, unit_index);
        result.unit = std::move(unit);
    } catch (const ParseError& e) {
        result.errors.push_back(e);
    }
    return result;
}

struct SourceFile {
    std::string path;
    std::string text;
};

struct ProjectParseResult {
    std::optional<Project> project;
    std::vector<ParseError> errors;    // aggregated across units, path order
    std::vector<ParseWarning> warnings;

    bool ok() const { return project.has_value(); }
};

/// Parses a file set into one Project. Units are ordered by path, so the
/// result does not depend on input order or on how parsing is scheduled.
/// `threads` caps worker threads; 0 picks a default.
inline ProjectParseResult parse_project(std::vector<SourceFile> files,
                                        ParseMode mode = ParseMode::Strict,
                                        unsigned threads = 0) {
    ProjectParseResult result;

    std::sort(files.begin(), files.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
    for (std::size_t i = 1; i < files.size(); ++i) {
        if (files[i].path == files[i - 1].path) {
            throw std::invalid_argument("duplicate input path: " + files[i].path);
        }
    }

    std::vector<UnitParseResult> outcomes(files.size());
    unsigned worker_count = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (worker_count == 0) worker_count = 1;
    worker_count = static_cast<unsigned>(
        std::min<std::size_t>(worker_count, std::max<std::size_t>(files.size(), 1)));

    auto parse_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            outcomes[i] = parse_unit(files[i].text, files[i].path, mode,
                                     static_cast<std::uint32_t>(i));
        }
    };

    if (worker_count <= 1 || files.size() <= 1) {
        parse_range(0, files.size());
    } else {
        std::vector<std::thread> workers;
        std::size_t chunk = (files.size() + worker_count - 1) / worker_count;
        for (unsigned w = 0; w < worker_count; ++w) {
            std::size_t begin = w * chunk;
            std::size_t end = std::min(files.size(), begin + chunk);
            if (begin >= end) break;
            workers.emplace_back(parse_range, begin, end);
        }
        for (auto& worker : workers) worker.join();
    }

    std::vector<CompilationUnit> units;
    units.reserve(files.size());
    bool failed = false;
    for (auto& outcome : outcomes) {
        for (auto& w : outcome.warnings) result.warnings.push_back(std::move(w));
        if (!outcome.ok()) {
            failed = true;
            for (auto& e : outcome.errors) result.errors.push_back(std::move(e));
        } else if (!failed) {
            units.push_back(std::move(*outcome.unit));
        }
    }
    if (!failed) result.project = Project(std::move(units));
    return result;
}

}  // namespace stateharvest
