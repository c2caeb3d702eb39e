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

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzy/boxed.hpp"
#include "fuzzy/membership.hpp"
#include "fuzzy/operators.hpp"

namespace fuzzy {

struct Universe {
    double lo = 0.0;
    double hi = 1.0;

    friend bool operator==(const Universe&, const Universe&) = default;
};

struct Term {
    std::string name;
    MembershipFunction shape;

    friend bool operator==(const Term&, const Term&) = default;
};

enum class VariableRole { Input, Output };

/// Fallback for an output when no rule fires. NoChange (`NC`) tells the
/// caller to keep whatever value it had before; the engine itself is
/// stateless and reports it like a missing default.
struct DefaultValue {
    enum class Kind { None, Value, NoChange };
    Kind kind = Kind::None;
    double value = 0.0;

    static DefaultValue none() { return {}; }
    static DefaultValue of(double v) { return {Kind::Value, v}; }
    static DefaultValue no_change() { return {Kind::NoChange, 0.0}; }

    bool has_value() const { return kind == Kind::Value; }

    friend bool operator==(const DefaultValue& a, const DefaultValue& b) {
        return a.kind == b.kind && (a.kind != Kind::Value || a.value == b.value);
    }
};

struct OutputSettings {
    AccumulationMethod accumulation = AccumulationMethod::Max;
    DefuzzMethod method = DefuzzMethod::CenterOfGravity;
    DefaultValue fallback;

    friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

struct LinguisticVariable {
    std::string name;
    VariableRole role = VariableRole::Input;
    std::vector<Term> terms;
    Universe universe;
    /// true when the universe came from an explicit RANGE declaration
    bool range_declared = false;
    std::optional<OutputSettings> output;

    std::optional<std::size_t> find_term(std::string_view term) const {
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i].name == term) return i;
        return std::nullopt;
    }

    friend bool operator==(const LinguisticVariable&, const LinguisticVariable&) = default;
};

/// Output terms are either all singletons (defuzzified with COGS) or all
/// continuous shapes (any other method).
inline std::optional<std::string> check_output_shapes(const LinguisticVariable& var) {
    std::size_t singletons = 0;
    for (const auto& t : var.terms) singletons += is_singleton(t.shape) ? 1 : 0;
    if (singletons != 0 && singletons != var.terms.size())
        return "output '" + var.name + "' mixes singleton and continuous terms";
    bool cogs = var.output && var.output->method == DefuzzMethod::CenterOfGravitySingletons;
    if (cogs && singletons == 0)
        return "METHOD : COGS on '" + var.name + "' requires singleton terms";
    if (!cogs && singletons != 0)
        return "singleton terms on output '" + var.name + "' require METHOD : COGS";
    return std::nullopt;
}

/// Universe spanned by the terms' extents. Throws std::invalid_argument when
/// there are no terms or the extents collapse to a point.
inline Universe derive_universe(const std::vector<Term>& terms) {
    if (terms.empty()) throw std::invalid_argument("cannot derive a universe without terms");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& t : terms) {
        auto [a, b] = derived_extent(t.shape);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    if (!(lo < hi)) throw std::invalid_argument("terms span a single point; declare a RANGE");
    return {lo, hi};
}

/// Declared range when present, otherwise derived from the terms.
inline Universe derive_universe(const LinguisticVariable& var) {
    if (var.range_declared) return var.universe;
    return derive_universe(var.terms);
}

// ---------------------------------------------------------------------------
// Antecedent expressions. Parameterised on the atom so the parser can keep
// unresolved names with source positions and the rule base resolved indices.

enum class BinaryOp { And, Or };

template <class AtomT>
struct BasicExpr;

template <class AtomT>
struct BasicBinary {
    BinaryOp op = BinaryOp::And;
    boxed<BasicExpr<AtomT>> lhs;
    boxed<BasicExpr<AtomT>> rhs;

    friend bool operator==(const BasicBinary&, const BasicBinary&) = default;
};

template <class AtomT>
struct BasicNot {
    boxed<BasicExpr<AtomT>> operand;

    friend bool operator==(const BasicNot&, const BasicNot&) = default;
};

template <class AtomT>
struct BasicExpr {
    std::variant<AtomT, BasicBinary<AtomT>, BasicNot<AtomT>> node;

    friend bool operator==(const BasicExpr&, const BasicExpr&) = default;
};

/// Rewrites every atom through `fn`, keeping the tree shape.
template <class To, class From, class Fn>
BasicExpr<To> map_atoms(const BasicExpr<From>& expr, Fn&& fn) {
    if (const auto* atom = std::get_if<From>(&expr.node)) return BasicExpr<To>{fn(*atom)};
    if (const auto* bin = std::get_if<BasicBinary<From>>(&expr.node)) {
        return BasicExpr<To>{BasicBinary<To>{bin->op, map_atoms<To>(*bin->lhs, fn),
                                             map_atoms<To>(*bin->rhs, fn)}};
    }
    const auto& neg = std::get<BasicNot<From>>(expr.node);
    return BasicExpr<To>{BasicNot<To>{map_atoms<To>(*neg.operand, fn)}};
}

template <class AtomT, class Fn>
void for_each_atom(const BasicExpr<AtomT>& expr, Fn&& fn) {
    if (const auto* atom = std::get_if<AtomT>(&expr.node)) {
        fn(*atom);
    } else if (const auto* bin = std::get_if<BasicBinary<AtomT>>(&expr.node)) {
        for_each_atom(*bin->lhs, fn);
        for_each_atom(*bin->rhs, fn);
    } else {
        for_each_atom(*std::get<BasicNot<AtomT>>(expr.node).operand, fn);
    }
}

/// `input IS [hedges] term`, resolved to indices into the rule base.
/// Hedges are stored in source order and applied right to left.
struct Atom {
    std::size_t variable = 0;
    std::size_t term = 0;
    std::vector<Hedge> hedges;

    friend bool operator==(const Atom&, const Atom&) = default;
};

using FuzzyExpression = BasicExpr<Atom>;

struct Consequent {
    std::size_t variable = 0;  // index into outputs
    std::size_t term = 0;

    friend bool operator==(const Consequent&, const Consequent&) = default;
};

struct Rule {
    std::string id;
    FuzzyExpression antecedent;
    std::vector<Consequent> consequents;
    double weight = 1.0;

    friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleBlock {
    std::string name;
    ConnectiveSet connectives;
    ImplicationMethod activation = ImplicationMethod::Min;
    std::vector<Rule> rules;

    friend bool operator==(const RuleBlock&, const RuleBlock&) = default;
};

/// Compiled function block. Construction checks every cross-reference, so
/// an instance is always internally consistent; it is immutable afterwards.
class RuleBase {
public:
    RuleBase(std::string name, std::vector<LinguisticVariable> inputs,
             std::vector<LinguisticVariable> outputs, std::vector<RuleBlock> blocks,
             std::string source_name = {})
        : name_(std::move(name)),
          inputs_(std::move(inputs)),
          outputs_(std::move(outputs)),
          blocks_(std::move(blocks)),
          source_name_(std::move(source_name)) {
        check();
    }

    const std::string& name() const { return name_; }
    const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
    const std::vector<LinguisticVariable>& outputs() const { return outputs_; }
    const std::vector<RuleBlock>& blocks() const { return blocks_; }
    const std::string& source_name() const { return source_name_; }

    std::size_t rule_count() const {
        std::size_t n = 0;
        for (const auto& b : blocks_) n += b.rules.size();
        return n;
    }

    std::optional<std::size_t> find_input(std::string_view name) const { return find(inputs_, name); }
    std::optional<std::size_t> find_output(std::string_view name) const { return find(outputs_, name); }

    /// Structural equality; the source name is provenance, not structure.
    friend bool operator==(const RuleBase& a, const RuleBase& b) {
        return a.name_ == b.name_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_ &&
               a.blocks_ == b.blocks_;
    }

private:
    static std::optional<std::size_t> find(const std::vector<LinguisticVariable>& vars,
                                           std::string_view name) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name == name) return i;
        return std::nullopt;
    }

    void check() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
        if (outputs_.empty()) fail("no output variable declared");

        std::set<std::string, std::less<>> names;
        auto check_var = [&](const LinguisticVariable& v, VariableRole role) {
            if (!names.insert(v.name).second) fail("duplicate variable '" + v.name + "'");
            if (v.role != role) fail("variable '" + v.name + "' has the wrong role");
            if (v.terms.empty()) fail("variable '" + v.name + "' declares no terms");
            if (!(v.universe.lo < v.universe.hi)) fail("variable '" + v.name + "' has an empty universe");
            std::set<std::string, std::less<>> terms;
            for (const auto& t : v.terms) {
                if (!terms.insert(t.name).second)
                    fail("duplicate term '" + t.name + "' in '" + v.name + "'");
                if (auto err = validate(t.shape)) fail("term '" + t.name + "': " + *err);
                auto [a, b] = anchor_span(t.shape);
                if (a < v.universe.lo || b > v.universe.hi)
                    fail("term '" + t.name + "' lies outside the universe of '" + v.name + "'");
            }
            if (role == VariableRole::Output) {
                if (!v.output) fail("output '" + v.name + "' has no defuzzifier");
                if (auto err = check_output_shapes(v)) fail(*err);
            }
        };
        for (const auto& v : inputs_) check_var(v, VariableRole::Input);
        for (const auto& v : outputs_) check_var(v, VariableRole::Output);

        std::set<std::string, std::less<>> block_names;
        for (const auto& b : blocks_) {
            if (!block_names.insert(b.name).second) fail("duplicate rule block '" + b.name + "'");
            std::set<std::string, std::less<>> ids;
            for (const auto& r : b.rules) {
                if (!ids.insert(r.id).second) fail("duplicate rule '" + r.id + "' in block '" + b.name + "'");
                if (!(r.weight > 0.0 && r.weight <= 1.0)) fail("rule '" + r.id + "' weight outside (0, 1]");
                if (r.consequents.empty()) fail("rule '" + r.id + "' has no consequent");
                for_each_atom(r.antecedent, [&](const Atom& a) {
                    if (a.variable >= inputs_.size() || a.term >= inputs_[a.variable].terms.size())
                        fail("rule '" + r.id + "' references an unknown input term");
                });
                for (const auto& c : r.consequents)
                    if (c.variable >= outputs_.size() || c.term >= outputs_[c.variable].terms.size())
                        fail("rule '" + r.id + "' references an unknown output term");
            }
        }
    }

    std::string name_;
    std::vector<LinguisticVariable> inputs_;
    std::vector<LinguisticVariable> outputs_;
    std::vector<RuleBlock> blocks_;
    std::string source_name_;
};

}  // namespace fuzzy
