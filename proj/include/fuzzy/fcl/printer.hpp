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

#include <charconv>
#include <string>
#include <variant>

#include "fuzzy/membership.hpp"
#include "fuzzy/rulebase.hpp"

namespace fuzzy {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace fuzzy

namespace fuzzy::fcl {

namespace detail {

inline std::string print_shape(const MembershipFunction& mf) {
    using fuzzy::detail::overloaded;
    auto n = format_number;
    return std::visit(
        overloaded{
            [&](const PiecewiseLinear& s) {
                std::string out;
                for (const auto& p : s.points) {
                    if (!out.empty()) out += ' ';
                    out += '(' + n(p.x) + ", " + n(p.mu) + ')';
                }
                return out;
            },
            [&](const Singleton& s) { return n(s.x); },
            [&](const Triangular& s) { return "TRIAN " + n(s.a) + ' ' + n(s.b) + ' ' + n(s.c); },
            [&](const Trapezoidal& s) {
                return "TRAPE " + n(s.a) + ' ' + n(s.b) + ' ' + n(s.c) + ' ' + n(s.d);
            },
            [&](const Gaussian& s) { return "GAUSS " + n(s.mean) + ' ' + n(s.sigma); },
            [&](const GeneralizedBell& s) { return "GBELL " + n(s.a) + ' ' + n(s.b) + ' ' + n(s.mean); },
            [&](const Sigmoidal& s) { return "SIGM " + n(s.gain) + ' ' + n(s.center); },
        },
        mf);
}

inline std::string print_expr(const RuleBase& rb, const FuzzyExpression& e) {
    if (const auto* atom = std::get_if<Atom>(&e.node)) {
        const auto& var = rb.inputs()[atom->variable];
        std::string out = var.name + " IS ";
        for (auto h : atom->hedges) out += std::string(keyword(h)) + ' ';
        return out + var.terms[atom->term].name;
    }
    auto operand = [&](const FuzzyExpression& sub) {
        std::string s = print_expr(rb, sub);
        return std::holds_alternative<Atom>(sub.node) ? s : '(' + s + ')';
    };
    if (const auto* bin = std::get_if<BasicBinary<Atom>>(&e.node)) {
        return operand(*bin->lhs) + (bin->op == BinaryOp::And ? " AND " : " OR ") + operand(*bin->rhs);
    }
    return "NOT " + operand(*std::get<BasicNot<Atom>>(e.node).operand);
}

inline void print_variable_body(std::string& out, const LinguisticVariable& var) {
    bool output = var.role == VariableRole::Output;
    out += output ? "DEFUZZIFY " : "FUZZIFY ";
    out += var.name + '\n';
    if (var.range_declared)
        out += "    RANGE := (" + format_number(var.universe.lo) + " .. " + format_number(var.universe.hi) + ");\n";
    for (const auto& t : var.terms) out += "    TERM " + t.name + " := " + print_shape(t.shape) + ";\n";
    if (output && var.output) {
        out += "    ACCU : " + std::string(keyword(var.output->accumulation)) + ";\n";
        out += "    METHOD : " + std::string(keyword(var.output->method)) + ";\n";
        const auto& fb = var.output->fallback;
        if (fb.kind == DefaultValue::Kind::Value) out += "    DEFAULT := " + format_number(fb.value) + ";\n";
        if (fb.kind == DefaultValue::Kind::NoChange) out += "    DEFAULT := NC;\n";
    }
    out += output ? "END_DEFUZZIFY\n\n" : "END_FUZZIFY\n\n";
}

}  // namespace detail

/// Canonical FCL text for a rule base, always in FUNCTION_BLOCK form.
/// Parsing the result yields a structurally equal rule base.
inline std::string pretty_print(const RuleBase& rb) {
    std::string out = "FUNCTION_BLOCK";
    if (!rb.name().empty()) out += ' ' + rb.name();
    out += "\n\n";

    out += "VAR_INPUT\n";
    for (const auto& v : rb.inputs()) out += "    " + v.name + " : REAL;\n";
    out += "END_VAR\n\n";
    out += "VAR_OUTPUT\n";
    for (const auto& v : rb.outputs()) out += "    " + v.name + " : REAL;\n";
    out += "END_VAR\n\n";

    for (const auto& v : rb.inputs()) detail::print_variable_body(out, v);
    for (const auto& v : rb.outputs()) detail::print_variable_body(out, v);

    for (const auto& block : rb.blocks()) {
        out += "RULEBLOCK " + block.name + '\n';
        out += "    AND : " + std::string(keyword(block.connectives.and_method)) + ";\n";
        out += "    OR : " + std::string(keyword(block.connectives.or_method)) + ";\n";
        out += "    ACT : " + std::string(keyword(block.activation)) + ";\n";
        for (const auto& rule : block.rules) {
            out += "    RULE " + rule.id + " : IF " + detail::print_expr(rb, rule.antecedent) + " THEN ";
            for (std::size_t i = 0; i < rule.consequents.size(); ++i) {
                const auto& c = rule.consequents[i];
                const auto& var = rb.outputs()[c.variable];
                if (i) out += ", ";
                out += var.name + " IS " + var.terms[c.term].name;
            }
            if (rule.weight != 1.0) out += " WITH " + format_number(rule.weight);
            out += ";\n";
        }
        out += "END_RULEBLOCK\n\n";
    }
    out += "END_FUNCTION_BLOCK\n";
    return out;
}

}  // namespace fuzzy::fcl
