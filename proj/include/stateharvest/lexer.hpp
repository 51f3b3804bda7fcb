/// @file lexer.hpp
/// @brief Tokenizer for the supported Java subset.
///
/// Tokens cover the input except whitespace and comments; line and block
/// comments are discarded. String and char literals are lexed as single
/// tokens, so braces inside them never reach the parser.

#pragma once

#include "stateharvest/syntax_graph.hpp"

#include <array>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stateharvest {

enum class TokenKind : std::uint8_t {
    Keyword,
    Identifier,
    Punct,
    StringLiteral,
    CharLiteral,
    NumberLiteral,
    EndOfFile,
};

struct Token {
    TokenKind kind;
    std::string text;
    SourcePos pos;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
    bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
};

/// Raised by the tokenizer and parser; `expected`/`found` describe the
/// failure in terms of the grammar.
struct ParseError : std::runtime_error {
    ParseError(SourceLocation loc, std::string expected_what, std::string found_what)
        : std::runtime_error(loc.to_string() + ": expected " + expected_what + ", found " +
                             found_what),
          location(std::move(loc)),
          expected(std::move(expected_what)),
          found(std::move(found_what)) {}

    SourceLocation location;
    std::string expected;
    std::string found;
};

namespace detail {

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

inline bool is_ident_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

inline bool is_java_keyword(std::string_view word) {
    static constexpr std::array<std::string_view, 27> keywords = {
        "abstract", "break",   "case",    "catch",   "class",  "default", "else",
        "enum",     "extends", "final",   "for",     "if",     "implements",
        "import",   "new",     "package", "private", "protected", "public",
        "return",   "static",  "switch",  "this",    "try",    "void",
        "while",    "null",
    };
    for (auto k : keywords) {
        if (k == word) return true;
    }
    return word == "true" || word == "false";
}

}  // namespace detail

/// Tokenizes one source file. Throws ParseError on unterminated string, char
/// or block-comment. Any otherwise-unknown character becomes a one-character
/// punctuation token; the parser rejects it where it matters.
inline std::vector<Token> tokenize(std::string_view source, const std::string& file) {
    std::vector<Token> tokens;
    tokens.reserve(source.size() / 4 + 8);

    std::size_t i = 0;
    std::uint32_t line = 1, col = 1;

    auto here = [&] { return SourcePos{line, col}; };
    auto fail = [&](SourcePos pos, const char* expected, std::string found) -> void {
        throw ParseError(SourceLocation{file, pos.line, pos.column}, expected, std::move(found));
    };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (source[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };

    static constexpr std::array<std::string_view, 14> two_char_ops = {
        "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "->",
    };

    while (i < source.size()) {
        char c = source[i];

        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }

        // Comments
        if (c == '/' && i + 1 < source.size()) {
            if (source[i + 1] == '/') {
                while (i < source.size() && source[i] != '\n') advance(1);
                continue;
            }
            if (source[i + 1] == '*') {
                SourcePos start = here();
                advance(2);
                bool closed = false;
                while (i + 1 < source.size()) {
                    if (source[i] == '*' && source[i + 1] == '/') {
                        advance(2);
                        closed = true;
                        break;
                    }
                    advance(1);
                }
                if (!closed) fail(start, "closing '*/'", "end of file");
                continue;
            }
        }

        SourcePos start = here();

        if (detail::is_ident_start(c)) {
            std::size_t begin = i;
            while (i < source.size() && detail::is_ident_part(source[i])) advance(1);
            std::string word(source.substr(begin, i - begin));
            TokenKind kind =
                detail::is_java_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
            tokens.push_back(Token{kind, std::move(word), start});
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t begin = i;
            while (i < source.size()) {
                char d = source[i];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    advance(1);
                } else if ((d == '+' || d == '-') && (source[i - 1] == 'e' || source[i - 1] == 'E')) {
                    advance(1);  // exponent sign
                } else {
                    break;
                }
            }
            tokens.push_back(Token{TokenKind::NumberLiteral,
                                   std::string(source.substr(begin, i - begin)), start});
            continue;
        }

        if (c == '"' || c == '\'') {
            char quote = c;
            std::size_t begin = i;
            advance(1);
            bool closed = false;
            while (i < source.size() && source[i] != '\n') {
                if (source[i] == '\\' && i + 1 < source.size()) {
                    advance(2);
                    continue;
                }
                if (source[i] == quote) {
                    advance(1);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) {
                fail(start, quote == '"' ? "closing '\"'" : "closing \"'\"", "end of line");
            }
            tokens.push_back(Token{quote == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral,
                                   std::string(source.substr(begin, i - begin)), start});
            continue;
        }

        // Punctuation, longest match first.
        if (i + 1 < source.size()) {
            std::string_view pair = source.substr(i, 2);
            bool matched = false;
            for (auto op : two_char_ops) {
                if (pair == op) {
                    tokens.push_back(Token{TokenKind::Punct, std::string(op), start});
                    advance(2);
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
        }
        tokens.push_back(Token{TokenKind::Punct, std::string(1, c), start});
        advance(1);
    }

    tokens.push_back(Token{TokenKind::EndOfFile, "", here()});
    return tokens;
}

}  // namespace stateharvest
