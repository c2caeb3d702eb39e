/*   Copyright 2026 The fuzzykb Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */
#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzy/fcl/diagnostic.hpp"

namespace fuzzy::fcl {

enum class TokenKind {
    Identifier,
    Number,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Colon,
    Assign,  // :=
    DotDot,  // ..
    Plus,
    Minus,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number = 0.0;
    SourceLoc loc;
};

inline std::string_view describe(TokenKind kind) {
    switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Assign: return "':='";
    case TokenKind::DotDot: return "'..'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::End: return "end of input";
    }
    return "token";
}

/// Tokenizes one source file. Comments are `// ...`, `(* ... *)` and
/// `/* ... */`. Lexical errors are reported to `sink` and the offending
/// character skipped. The End token is not appended.
class Lexer {
public:
    Lexer(std::string_view source, std::size_t file, DiagnosticSink& sink)
        : src_(source), file_(file), sink_(sink) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (eof()) break;
            if (auto tok = lex_one()) out.push_back(std::move(*tok));
        }
        return out;
    }

    SourceLoc end_loc() const { return {line_, col_, file_}; }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char cur() const { return eof() ? '\0' : src_[pos_]; }
    char at(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
    SourceLoc here() const { return {line_, col_, file_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_block_comment(char close1, char close2) {
        SourceLoc start = here();
        advance();
        advance();
        while (!eof() && !(cur() == close1 && at(1) == close2)) advance();
        if (eof()) {
            sink_.error(start, "unterminated comment");
            return;
        }
        advance();
        advance();
    }

    void skip_trivia() {
        while (!eof()) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                advance();
            } else if (c == '/' && at(1) == '/') {
                while (!eof() && cur() != '\n') advance();
            } else if (c == '(' && at(1) == '*') {
                skip_block_comment('*', ')');
            } else if (c == '/' && at(1) == '*') {
                skip_block_comment('*', '/');
            } else {
                break;
            }
        }
    }

    static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    Token make(TokenKind kind, SourceLoc loc, std::size_t begin) const {
        return Token{kind, std::string(src_.substr(begin, pos_ - begin)), 0.0, loc};
    }

    std::optional<Token> lex_one() {
        SourceLoc loc = here();
        std::size_t begin = pos_;
        char c = cur();

        if (is_ident_start(c)) {
            while (!eof() && is_ident_char(cur())) advance();
            return make(TokenKind::Identifier, loc, begin);
        }
        if (is_digit(c)) return lex_number(loc, begin);

        auto single = [&](TokenKind kind) {
            advance();
            return make(kind, loc, begin);
        };
        switch (c) {
        case '(': return single(TokenKind::LParen);
        case ')': return single(TokenKind::RParen);
        case ',': return single(TokenKind::Comma);
        case ';': return single(TokenKind::Semicolon);
        case '+': return single(TokenKind::Plus);
        case '-': return single(TokenKind::Minus);
        case ':':
            if (at(1) == '=') {
                advance();
                return single(TokenKind::Assign);
            }
            return single(TokenKind::Colon);
        case '.':
            if (at(1) == '.') {
                advance();
                return single(TokenKind::DotDot);
            }
            break;
        default: break;
        }

        advance();
        // swallow the rest of a multi-byte sequence so it yields one error
        while (!eof() && (static_cast<unsigned char>(cur()) & 0xC0) == 0x80) advance();
        std::string shown(src_.substr(begin, pos_ - begin));
        sink_.error(loc, "unexpected character '" + shown + "'");
        return std::nullopt;
    }

    Token lex_number(SourceLoc loc, std::size_t begin) {
        while (is_digit(cur())) advance();
        if (cur() == '.' && is_digit(at(1))) {
            advance();
            while (is_digit(cur())) advance();
        }
        if ((cur() == 'e' || cur() == 'E') &&
            (is_digit(at(1)) || ((at(1) == '+' || at(1) == '-') && is_digit(at(2))))) {
            advance();
            if (cur() == '+' || cur() == '-') advance();
            while (is_digit(cur())) advance();
        }
        Token tok = make(TokenKind::Number, loc, begin);
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
        if (ec != std::errc{}) sink_.error(loc, "number out of range '" + tok.text + "'");
        return tok;
    }

    std::string_view src_;
    std::size_t file_;
    DiagnosticSink& sink_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace fuzzy::fcl
