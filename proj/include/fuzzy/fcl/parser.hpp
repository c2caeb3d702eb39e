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

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzy/fcl/diagnostic.hpp"
#include "fuzzy/fcl/lexer.hpp"
#include "fuzzy/membership.hpp"
#include "fuzzy/operators.hpp"
#include "fuzzy/rulebase.hpp"

namespace fuzzy::fcl {

/// Syntax tree with names still unresolved and source positions attached.
namespace ast {

struct AtomRef {
    std::string variable;
    SourceLoc variable_loc;
    std::vector<Hedge> hedges;
    std::string term;
    SourceLoc term_loc;

    friend bool operator==(const AtomRef&, const AtomRef&) = default;
};

using Expr = BasicExpr<AtomRef>;

struct ConsequentRef {
    std::string variable;
    SourceLoc variable_loc;
    std::string term;
    SourceLoc term_loc;
};

struct RuleDecl {
    std::optional<std::string> id;
    SourceLoc loc;
    Expr antecedent;
    std::vector<ConsequentRef> consequents;
    double weight = 1.0;
    SourceLoc weight_loc;
};

struct RuleBlockDecl {
    std::string name;  // empty for rules written outside any RULEBLOCK
    SourceLoc loc;
    std::optional<AndMethod> and_method;
    std::optional<OrMethod> or_method;
    std::optional<ImplicationMethod> activation;
    std::optional<AccumulationMethod> accumulation;
    SourceLoc accumulation_loc;
    std::vector<RuleDecl> rules;
};

struct TermDecl {
    std::string name;
    SourceLoc loc;
    MembershipFunction shape;
};

/// FUZZIFY or DEFUZZIFY block.
struct VariableBody {
    bool output = false;
    std::string name;
    SourceLoc loc;
    std::vector<TermDecl> terms;
    std::optional<Universe> range;
    SourceLoc range_loc;
    std::optional<AccumulationMethod> accumulation;
    std::optional<DefuzzMethod> method;
    std::optional<DefaultValue> fallback;
};

struct VariableDecl {
    std::string name;
    bool output = false;
    SourceLoc loc;
};

struct File {
    std::string name;  // FUNCTION_BLOCK name, if any
    std::vector<VariableDecl> declarations;
    std::vector<VariableBody> bodies;
    std::vector<RuleBlockDecl> blocks;
};

}  // namespace ast

namespace detail {

inline constexpr std::array<std::string_view, 27> reserved_words{
    "FUNCTION_BLOCK", "END_FUNCTION_BLOCK", "VAR_INPUT", "VAR_OUTPUT", "END_VAR",
    "FUZZIFY",        "END_FUZZIFY",        "DEFUZZIFY", "END_DEFUZZIFY", "RULEBLOCK",
    "END_RULEBLOCK",  "TERM",               "RANGE",     "ACCU",       "METHOD",
    "DEFAULT",        "ACT",                "AND",       "OR",         "NOT",
    "IF",             "THEN",               "IS",        "WITH",       "RULE",
    "NC",             "REAL",
};

inline bool is_reserved(std::string_view word) {
    return std::any_of(reserved_words.begin(), reserved_words.end(),
                       [&](std::string_view k) { return fuzzy::detail::iequals(k, word); });
}

}  // namespace detail

/// Recursive-descent parser for both FCL dialects: a FUNCTION_BLOCK wrapper
/// around the sections, or bare sections at top level with rules either in
/// a RULEBLOCK or written directly. Syntax errors are reported to the sink;
/// the parser then resynchronises at the next statement or section.
class Parser {
public:
    Parser(std::vector<Token> tokens, DiagnosticSink& sink) : toks_(std::move(tokens)), sink_(sink) {
        if (toks_.empty() || toks_.back().kind != TokenKind::End) toks_.push_back(Token{});
    }

    ast::File parse() {
        ast::File file;
        bool in_function_block = false;
        bool closed_function_block = false;
        while (!at_end()) {
            try {
                if (closed_function_block) {
                    error(peek().loc, "unexpected " + spell(peek()) + " after END_FUNCTION_BLOCK");
                }
                if (accept_keyword("FUNCTION_BLOCK")) {
                    if (in_function_block || !file.declarations.empty() || !file.bodies.empty() ||
                        !file.blocks.empty())
                        error(prev().loc, "FUNCTION_BLOCK must enclose the whole rule base");
                    in_function_block = true;
                    if (peek().kind == TokenKind::Identifier && !detail::is_reserved(peek().text))
                        file.name = next().text;
                } else if (accept_keyword("END_FUNCTION_BLOCK")) {
                    if (!in_function_block) error(prev().loc, "END_FUNCTION_BLOCK without FUNCTION_BLOCK");
                    in_function_block = false;
                    closed_function_block = true;
                } else if (at_keyword("VAR_INPUT") || at_keyword("VAR_OUTPUT")) {
                    parse_declarations(file);
                } else if (at_keyword("FUZZIFY") || at_keyword("DEFUZZIFY")) {
                    file.bodies.push_back(parse_variable_body());
                } else if (at_keyword("RULEBLOCK")) {
                    file.blocks.push_back(parse_rule_block());
                } else if (at_keyword("RULE") || at_keyword("IF")) {
                    if (file.blocks.empty() || !file.blocks.back().name.empty()) {
                        ast::RuleBlockDecl bare;
                        bare.loc = peek().loc;
                        file.blocks.push_back(std::move(bare));
                    }
                    file.blocks.back().rules.push_back(parse_rule());
                } else {
                    error(peek().loc, "unexpected " + spell(peek()) + " at top level");
                }
            } catch (const syntax_error&) {
                synchronize_top_level();
            }
        }
        if (in_function_block) error_at_end("missing END_FUNCTION_BLOCK");
        return file;
    }

private:
    struct syntax_error {};

    // -- token access -------------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    bool at_end() const { return peek().kind == TokenKind::End; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (!at_end()) ++pos_;
        return t;
    }

    bool at_keyword(std::string_view kw, std::size_t k = 0) const {
        const Token& t = peek(k);
        return t.kind == TokenKind::Identifier && fuzzy::detail::iequals(t.text, kw);
    }
    bool accept_keyword(std::string_view kw) {
        if (!at_keyword(kw)) return false;
        ++pos_;
        return true;
    }
    bool accept(TokenKind kind) {
        if (peek().kind != kind) return false;
        next();
        return true;
    }

    static std::string spell(const Token& t) {
        if (t.kind == TokenKind::End) return "end of input";
        return "'" + t.text + "'";
    }

    // -- errors -------------------------------------------------------------

    [[noreturn]] void error(SourceLoc loc, std::string msg) {
        report(loc, std::move(msg));
        throw syntax_error{};
    }

    /// Errors at end of input are mostly fallout from an earlier error, so
    /// they are only reported when nothing else has been.
    void report(SourceLoc loc, std::string msg) {
        if (at_end() && sink_.has_errors()) return;
        sink_.error(loc, std::move(msg));
    }

    void error_at_end(std::string msg) {
        if (!sink_.has_errors()) sink_.error(peek().loc, std::move(msg));
    }

    [[noreturn]] void unexpected(std::string_view wanted) {
        error(peek().loc, "expected " + std::string(wanted) + ", found " + spell(peek()));
    }

    const Token& expect(TokenKind kind) {
        if (peek().kind != kind) unexpected(describe(kind));
        return next();
    }

    void expect_keyword(std::string_view kw) {
        if (!accept_keyword(kw)) unexpected(std::string(kw));
    }

    const Token& expect_identifier(std::string_view what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) unexpected(what);
        if (detail::is_reserved(t.text))
            error(t.loc, "expected " + std::string(what) + ", found keyword '" + t.text + "'");
        return next();
    }

    double expect_number() {
        bool negative = false;
        if (accept(TokenKind::Minus)) {
            negative = true;
        } else {
            accept(TokenKind::Plus);
        }
        if (peek().kind != TokenKind::Number) unexpected("number");
        double v = next().number;
        return negative ? -v : v;
    }

    bool at_number() const {
        auto k = peek().kind;
        return k == TokenKind::Number ||
               ((k == TokenKind::Minus || k == TokenKind::Plus) && peek(1).kind == TokenKind::Number);
    }

    // -- recovery -----------------------------------------------------------

    static constexpr std::array<std::string_view, 7> section_starts{
        "FUNCTION_BLOCK", "END_FUNCTION_BLOCK", "VAR_INPUT", "VAR_OUTPUT", "FUZZIFY", "DEFUZZIFY",
        "RULEBLOCK",
    };

    bool at_section_start() const {
        return std::any_of(section_starts.begin(), section_starts.end(),
                           [&](std::string_view kw) { return at_keyword(kw); });
    }

    void synchronize_top_level() {
        if (!at_end()) next();
        while (!at_end() && !at_section_start() && !at_keyword("RULE") && !at_keyword("IF")) next();
    }

    /// Skips past the current statement. Stops before the block terminator
    /// or any token that opens a new section.
    void synchronize_statement(std::string_view terminator) {
        while (!at_end()) {
            if (at_keyword(terminator) || at_section_start()) return;
            if (accept(TokenKind::Semicolon)) return;
            next();
        }
    }

    // -- sections -----------------------------------------------------------

    void parse_declarations(ast::File& file) {
        bool output = at_keyword("VAR_OUTPUT");
        next();
        while (!accept_keyword("END_VAR")) {
            if (at_end() || at_section_start()) {
                report(peek().loc, "missing END_VAR");
                return;
            }
            try {
                const Token& name = expect_identifier("variable name");
                ast::VariableDecl decl{name.text, output, name.loc};
                expect(TokenKind::Colon);
                if (peek().kind != TokenKind::Identifier) unexpected("type");
                const Token& type = next();
                if (!fuzzy::detail::iequals(type.text, "REAL"))
                    error(type.loc, "unsupported type '" + type.text + "' (expected REAL)");
                expect(TokenKind::Semicolon);
                file.declarations.push_back(std::move(decl));
            } catch (const syntax_error&) {
                synchronize_statement("END_VAR");
            }
        }
    }

    ast::VariableBody parse_variable_body() {
        ast::VariableBody body;
        body.output = at_keyword("DEFUZZIFY");
        std::string_view terminator = body.output ? "END_DEFUZZIFY" : "END_FUZZIFY";
        body.loc = next().loc;
        const Token& name = expect_identifier("variable name");
        body.name = name.text;
        body.loc = name.loc;

        while (!accept_keyword(terminator)) {
            if (at_end() || at_section_start()) {
                report(peek().loc, "missing " + std::string(terminator));
                return body;
            }
            try {
                parse_body_statement(body);
            } catch (const syntax_error&) {
                synchronize_statement(terminator);
            }
        }
        return body;
    }

    template <class T>
    void set_once(std::optional<T>& slot, T value, const Token& kw) {
        if (slot) error(kw.loc, "duplicate " + kw.text + " setting");
        slot = std::move(value);
    }

    template <class Method, class Lookup>
    Method parse_method(Lookup lookup, std::string_view what, std::string_view allowed) {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) unexpected(what);
        auto m = lookup(t.text);
        if (!m)
            error(t.loc, "unknown " + std::string(what) + " '" + t.text + "' (expected " +
                             std::string(allowed) + ")");
        next();
        return *m;
    }

    void parse_body_statement(ast::VariableBody& body) {
        const Token& kw = peek();
        if (accept_keyword("TERM")) {
            const Token& name = expect_identifier("term name");
            ast::TermDecl term{name.text, name.loc, {}};
            expect(TokenKind::Assign);
            term.shape = parse_shape();
            expect(TokenKind::Semicolon);
            body.terms.push_back(std::move(term));
        } else if (accept_keyword("RANGE")) {
            if (body.range) error(kw.loc, "duplicate RANGE setting");
            body.range_loc = kw.loc;
            expect(TokenKind::Assign);
            expect(TokenKind::LParen);
            double lo = expect_number();
            expect(TokenKind::DotDot);
            double hi = expect_number();
            expect(TokenKind::RParen);
            expect(TokenKind::Semicolon);
            body.range = Universe{lo, hi};
        } else if (at_keyword("ACCU") || at_keyword("METHOD") || at_keyword("DEFAULT")) {
            if (!body.output) error(kw.loc, kw.text + " is only allowed in DEFUZZIFY blocks");
            const Token& key = next();
            if (fuzzy::detail::iequals(key.text, "DEFAULT")) {
                expect(TokenKind::Assign);
                DefaultValue v;
                if (accept_keyword("NC")) {
                    v = DefaultValue::no_change();
                } else {
                    v = DefaultValue::of(expect_number());
                }
                set_once(body.fallback, v, key);
            } else {
                expect(TokenKind::Colon);
                if (fuzzy::detail::iequals(key.text, "ACCU")) {
                    auto m = parse_method<AccumulationMethod>(parse_accumulation_method, "accumulation method",
                                                              "MAX, BSUM, NSUM, SUM, PROBOR");
                    set_once(body.accumulation, m, key);
                } else {
                    auto m = parse_method<DefuzzMethod>(parse_defuzz_method, "defuzzification method",
                                                        "COG, COGS, COA, LM, RM, MM");
                    set_once(body.method, m, key);
                }
            }
            expect(TokenKind::Semicolon);
        } else {
            error(kw.loc, "unexpected " + spell(kw) + " in " +
                              (body.output ? std::string("DEFUZZIFY") : std::string("FUZZIFY")) +
                              " block");
        }
    }

    MembershipFunction parse_shape() {
        if (peek().kind == TokenKind::LParen) {
            PiecewiseLinear poly;
            while (peek().kind == TokenKind::LParen) {
                const Token& open = next();
                auto step = [&](TokenKind kind) {
                    if (at_end()) error(open.loc, "unclosed point");
                    return expect(kind);
                };
                if (at_end()) error(open.loc, "unclosed point");
                double x = expect_number();
                step(TokenKind::Comma);
                if (at_end()) error(open.loc, "unclosed point");
                double mu = expect_number();
                step(TokenKind::RParen);
                poly.points.push_back({x, mu});
            }
            return poly;
        }
        if (at_number()) return Singleton{expect_number()};

        const Token& t = peek();
        if (t.kind == TokenKind::Identifier) {
            auto is = [&](std::string_view kw) { return fuzzy::detail::iequals(t.text, kw); };
            if (is("TRIAN")) {
                next();
                double a = expect_number(), b = expect_number(), c = expect_number();
                return Triangular{a, b, c};
            }
            if (is("TRAPE")) {
                next();
                double a = expect_number(), b = expect_number(), c = expect_number(), d = expect_number();
                return Trapezoidal{a, b, c, d};
            }
            if (is("GAUSS")) {
                next();
                double m = expect_number(), s = expect_number();
                return Gaussian{m, s};
            }
            if (is("GBELL")) {
                next();
                double a = expect_number(), b = expect_number(), m = expect_number();
                return GeneralizedBell{a, b, m};
            }
            if (is("SIGM")) {
                next();
                double g = expect_number(), c = expect_number();
                return Sigmoidal{g, c};
            }
            error(t.loc, "unknown membership function '" + t.text +
                             "' (expected points, a singleton, TRIAN, TRAPE, GAUSS, GBELL or SIGM)");
        }
        unexpected("membership function");
    }

    ast::RuleBlockDecl parse_rule_block() {
        ast::RuleBlockDecl block;
        next();
        const Token& name = expect_identifier("rule block name");
        block.name = name.text;
        block.loc = name.loc;

        while (!accept_keyword("END_RULEBLOCK")) {
            if (at_end() || at_section_start()) {
                report(peek().loc, "missing END_RULEBLOCK");
                return block;
            }
            try {
                const Token& kw = peek();
                if (at_keyword("RULE") || at_keyword("IF")) {
                    block.rules.push_back(parse_rule());
                } else if (accept_keyword("AND")) {
                    expect(TokenKind::Colon);
                    auto m = parse_method<AndMethod>(parse_and_method, "AND method", "MIN, PROD, BDIF");
                    set_once(block.and_method, m, kw);
                    expect(TokenKind::Semicolon);
                } else if (accept_keyword("OR")) {
                    expect(TokenKind::Colon);
                    auto m = parse_method<OrMethod>(parse_or_method, "OR method", "MAX, ASUM, BSUM");
                    set_once(block.or_method, m, kw);
                    expect(TokenKind::Semicolon);
                } else if (accept_keyword("ACT")) {
                    expect(TokenKind::Colon);
                    auto m = parse_method<ImplicationMethod>(parse_implication_method, "activation method",
                                                             "MIN, PROD");
                    set_once(block.activation, m, kw);
                    expect(TokenKind::Semicolon);
                } else if (accept_keyword("ACCU")) {
                    expect(TokenKind::Colon);
                    auto m = parse_method<AccumulationMethod>(parse_accumulation_method, "accumulation method",
                                                              "MAX, BSUM, NSUM, SUM, PROBOR");
                    set_once(block.accumulation, m, kw);
                    block.accumulation_loc = kw.loc;
                    expect(TokenKind::Semicolon);
                } else {
                    error(kw.loc, "unexpected " + spell(kw) + " in RULEBLOCK");
                }
            } catch (const syntax_error&) {
                synchronize_statement("END_RULEBLOCK");
            }
        }
        return block;
    }

    // RULE id : IF expr THEN out IS term {, out IS term} [WITH w] ;
    ast::RuleDecl parse_rule() {
        ast::RuleDecl rule;
        rule.loc = peek().loc;
        if (accept_keyword("RULE")) {
            const Token& id = peek();
            if (id.kind == TokenKind::Number) {
                rule.id = next().text;
            } else {
                rule.id = expect_identifier("rule id").text;
            }
            rule.loc = id.loc;
            expect(TokenKind::Colon);
        }
        expect_keyword("IF");
        rule.antecedent = parse_or();
        expect_keyword("THEN");
        do {
            const Token& var = expect_identifier("output variable");
            ast::ConsequentRef c{var.text, var.loc, {}, {}};
            expect_keyword("IS");
            const Token& term = expect_identifier("term name");
            c.term = term.text;
            c.term_loc = term.loc;
            rule.consequents.push_back(std::move(c));
        } while (accept(TokenKind::Comma));
        if (accept_keyword("WITH")) {
            rule.weight_loc = peek().loc;
            rule.weight = expect_number();
        }
        expect(TokenKind::Semicolon);
        return rule;
    }

    ast::Expr parse_or() {
        ast::Expr lhs = parse_and();
        while (accept_keyword("OR")) {
            ast::Expr rhs = parse_and();
            lhs = ast::Expr{BasicBinary<ast::AtomRef>{BinaryOp::Or, std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    ast::Expr parse_and() {
        ast::Expr lhs = parse_unary();
        while (accept_keyword("AND")) {
            ast::Expr rhs = parse_unary();
            lhs = ast::Expr{BasicBinary<ast::AtomRef>{BinaryOp::And, std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    ast::Expr parse_unary() {
        if (accept_keyword("NOT")) return ast::Expr{BasicNot<ast::AtomRef>{parse_unary()}};
        if (accept(TokenKind::LParen)) {
            ast::Expr inner = parse_or();
            expect(TokenKind::RParen);
            return inner;
        }
        return ast::Expr{parse_atom()};
    }

    ast::AtomRef parse_atom() {
        ast::AtomRef atom;
        const Token& var = expect_identifier("input variable");
        atom.variable = var.text;
        atom.variable_loc = var.loc;
        expect_keyword("IS");
        // a hedge word is only a hedge when another identifier follows it
        while (peek().kind == TokenKind::Identifier && peek(1).kind == TokenKind::Identifier &&
               (!detail::is_reserved(peek(1).text) || parse_hedge(peek(1).text))) {
            auto h = parse_hedge(peek().text);
            if (!h) break;
            atom.hedges.push_back(*h);
            next();
        }
        const Token& term = expect_identifier("term name");
        atom.term = term.text;
        atom.term_loc = term.loc;
        return atom;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    DiagnosticSink& sink_;
};

}  // namespace fuzzy::fcl
