#pragma once

#include "clonescope/ingest.hpp"

#include <array>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace clonescope {

enum class TokenKind { Identifier, Keyword, Number, String, Punct, Newline };

struct Token {
    TokenKind kind;
    std::string text;
    int line = 1;    // 1-based physical line of the first character
    int column = 0;  // 0-based byte column

    bool operator==(const Token&) const = default;
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<std::string> diagnostics;
};

namespace detail {

inline const std::unordered_set<std::string_view>& keywords(Language lang) {
    static const std::unordered_set<std::string_view> c = {
        "auto", "break", "case", "char", "const", "continue", "default", "do", "double",
        "else", "enum", "extern", "float", "for", "goto", "if", "inline", "int", "long",
        "register", "restrict", "return", "short", "signed", "sizeof", "static", "struct",
        "switch", "typedef", "union", "unsigned", "void", "volatile", "while", "_Bool",
        "bool", "NULL", "true", "false",
    };
    static const std::unordered_set<std::string_view> csharp = {
        "abstract", "as", "base", "bool", "break", "byte", "case", "catch", "char", "checked",
        "class", "const", "continue", "decimal", "default", "delegate", "do", "double", "else",
        "enum", "event", "explicit", "extern", "false", "finally", "fixed", "float", "for",
        "foreach", "goto", "if", "implicit", "in", "int", "interface", "internal", "is", "lock",
        "long", "namespace", "new", "null", "object", "operator", "out", "override", "params",
        "private", "protected", "public", "readonly", "ref", "return", "sbyte", "sealed",
        "short", "sizeof", "stackalloc", "static", "string", "struct", "switch", "this",
        "throw", "true", "try", "typeof", "uint", "ulong", "unchecked", "unsafe", "ushort",
        "using", "virtual", "void", "volatile", "while", "var", "async", "await", "yield",
        "get", "set", "partial", "where",
    };
    static const std::unordered_set<std::string_view> java = {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class",
        "const", "continue", "default", "do", "double", "else", "enum", "extends", "final",
        "finally", "float", "for", "goto", "if", "implements", "import", "instanceof", "int",
        "interface", "long", "native", "new", "package", "private", "protected", "public",
        "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
        "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false",
        "null", "var",
    };
    static const std::unordered_set<std::string_view> python = {
        "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
        "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
        "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise",
        "return", "try", "while", "with", "yield",
    };
    static const std::unordered_set<std::string_view> none;
    switch (lang) {
        case Language::C:      return c;
        case Language::CSharp: return csharp;
        case Language::Java:   return java;
        case Language::Python: return python;
        case Language::Other:  return none;
    }
    return none;
}

inline bool ident_start(unsigned char ch) {
    return std::isalpha(ch) || ch == '_' || ch >= 0x80;
}

inline bool ident_char(unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch >= 0x80;
}

class Lexer {
public:
    Lexer(std::string_view src, Language lang) : src_(src), lang_(lang) {}

    LexResult run() {
        while (pos_ < src_.size()) step();
        if (lang_ == Language::Python) end_logical_line();
        return std::move(out_);
    }

private:
    std::string_view src_;
    Language lang_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::size_t line_start_ = 0;
    int depth_ = 0;          // bracket depth, drives Python logical lines
    bool at_line_start_ = true;
    LexResult out_;

    bool python() const { return lang_ == Language::Python; }
    bool c_like() const { return !python(); }

    char peek(std::size_t k = 0) const {
        return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
    }

    void newline() {
        ++line_;
        line_start_ = pos_;
        at_line_start_ = true;
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            const char ch = src_[pos_++];
            if (ch == '\n') newline();
        }
    }

    void emit(TokenKind kind, std::size_t begin, int line, int column) {
        std::string text(src_.substr(begin, pos_ - begin));
        if (kind == TokenKind::Identifier && keywords(lang_).count(text)) kind = TokenKind::Keyword;
        out_.tokens.push_back({kind, std::move(text), line, column});
    }

    void end_logical_line() {
        if (!out_.tokens.empty() && out_.tokens.back().kind != TokenKind::Newline) {
            out_.tokens.push_back({TokenKind::Newline, "", out_.tokens.back().line, 0});
        }
    }

    void skip_line() {
        // Preprocessor directive, honouring backslash continuations.
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && peek(1) == '\n') advance();
            advance();
        }
    }

    void step() {
        const char ch = src_[pos_];
        if (ch == '\n') {
            advance();
            if (python() && depth_ == 0) end_logical_line();
            return;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v') {
            advance();
            return;
        }
        if (ch == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
            advance(peek(1) == '\r' ? 3 : 2);
            at_line_start_ = false;
            return;
        }
        const bool first_on_line = at_line_start_;
        at_line_start_ = false;

        if (c_like() && ch == '#' && first_on_line) {
            skip_line();
            return;
        }
        if (python() && ch == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            return;
        }
        if (c_like() && ch == '/' && peek(1) == '/') {
            while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            return;
        }
        if (c_like() && ch == '/' && peek(1) == '*') {
            const int start = line_;
            advance(2);
            while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
            if (pos_ >= src_.size()) {
                out_.diagnostics.push_back("unterminated block comment starting at line " +
                                           std::to_string(start));
                return;
            }
            advance(2);
            return;
        }

        const std::size_t begin = pos_;
        const int line = line_;
        const int column = static_cast<int>(pos_ - line_start_);

        if (string_start()) {
            lex_string();
            emit(TokenKind::String, begin, line, column);
            return;
        }
        if (ident_start(static_cast<unsigned char>(ch)) ||
            (ch == '@' && lang_ == Language::CSharp && ident_start(static_cast<unsigned char>(peek(1))))) {
            advance();
            while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) advance();
            emit(TokenKind::Identifier, begin, line, column);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            lex_number();
            emit(TokenKind::Number, begin, line, column);
            return;
        }
        lex_punct();
        emit(TokenKind::Punct, begin, line, column);
    }

    // Recognises the opening of a string or character literal at pos_,
    // including prefixes (@"", $"", r"", f'''...''').
    bool string_start() const {
        const char ch = peek();
        if (ch == '"' || ch == '\'') return true;
        if (lang_ == Language::CSharp) {
            if ((ch == '@' || ch == '$') && peek(1) == '"') return true;
            if ((ch == '@' || ch == '$') && (peek(1) == '@' || peek(1) == '$') && peek(2) == '"') return true;
        }
        if (python()) {
            std::size_t k = 0;
            while (k < 2 && std::string_view("rRbBuUfF").find(peek(k)) != std::string_view::npos) ++k;
            if (k > 0 && (peek(k) == '"' || peek(k) == '\'')) return true;
        }
        return false;
    }

    void lex_string() {
        bool verbatim = false;
        while (peek() != '"' && peek() != '\'') {
            const char p = peek();
            if (p == '@' || p == 'r' || p == 'R') verbatim = true;
            advance();
        }
        const char quote = peek();
        const int start = line_;
        const bool triple = peek(1) == quote && peek(2) == quote && (python() || quote == '"');
        if (triple) {
            advance(3);
            while (pos_ < src_.size()) {
                if (src_[pos_] == '\\' && !verbatim) {
                    advance(2);
                    continue;
                }
                if (src_[pos_] == quote && peek(1) == quote && peek(2) == quote) {
                    advance(3);
                    while (peek() == quote) advance();
                    return;
                }
                advance();
            }
            out_.diagnostics.push_back("unterminated string starting at line " + std::to_string(start));
            return;
        }
        advance();
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (verbatim && lang_ == Language::CSharp) {
                if (c == quote && peek(1) == quote) {
                    advance(2);
                    continue;
                }
            } else if (c == '\\') {
                advance(2);
                continue;
            }
            if (c == quote) {
                advance();
                return;
            }
            if (c == '\n' && !(verbatim && lang_ == Language::CSharp)) break;
            advance();
        }
        out_.diagnostics.push_back("unterminated string starting at line " + std::to_string(start));
    }

    void lex_number() {
        const std::size_t begin = pos_;
        const bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
        advance();
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                advance();
                continue;
            }
            const char prev = src_[pos_ - 1];
            if ((c == '+' || c == '-') && (prev == 'e' || prev == 'E') && !hex && pos_ - 1 > begin) {
                advance();
                continue;
            }
            break;
        }
    }

    void lex_punct() {
        static constexpr std::array<std::string_view, 8> three = {
            ">>=", "<<=", "...", "**=", "//=", "===", "!==", ">>>"};
        static constexpr std::array<std::string_view, 29> two = {
            "->", "=>", "++", "--", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "/=",
            "%=", "&=", "|=", "^=", "<<", ">>", "::", "??", "?.", "**", "//", ":=", "@=", "->", "<>"};
        const std::string_view rest = src_.substr(pos_);
        for (auto op : three) {
            if (rest.substr(0, 3) == op) {
                advance(3);
                return;
            }
        }
        for (auto op : two) {
            if (rest.substr(0, 2) == op) {
                advance(2);
                return;
            }
        }
        const char ch = src_[pos_];
        if (ch == '(' || ch == '[' || ch == '{') ++depth_;
        if ((ch == ')' || ch == ']' || ch == '}') && depth_ > 0) --depth_;
        advance();
    }
};

} // namespace detail

/**
 * Tokenizes source text for one of the supported languages. Comments and
 * preprocessor lines are dropped. For Python a Newline token closes every
 * logical line (bracket continuations and backslash joins are folded in).
 */
inline LexResult lex(std::string_view source, Language lang) {
    return detail::Lexer(source, lang).run();
}

} // namespace clonescope
