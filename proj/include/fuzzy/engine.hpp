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
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzy/membership.hpp"
#include "fuzzy/operators.hpp"
#include "fuzzy/rulebase.hpp"

namespace fuzzy {

class evaluation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No rule contributed to an output and it declares no numeric DEFAULT.
class no_rules_fired : public evaluation_error {
public:
    using evaluation_error::evaluation_error;
};

using Inputs = std::map<std::string, double, std::less<>>;

inline constexpr std::size_t default_samples = 1000;

// ---------------------------------------------------------------------------
// Fuzzification

struct FuzzifiedValue {
    std::string variable;
    double crisp = 0.0;
    /// one entry per term, in declaration order
    std::vector<std::pair<std::string, Degree>> degrees;

    Degree degree(std::string_view term) const {
        for (const auto& [name, d] : degrees)
            if (name == term) return d;
        throw std::out_of_range("no term '" + std::string(term) + "' in '" + variable + "'");
    }
};

inline FuzzifiedValue fuzzify(const LinguisticVariable& var, double x) {
    FuzzifiedValue out{var.name, x, {}};
    out.degrees.reserve(var.terms.size());
    for (const auto& t : var.terms) out.degrees.emplace_back(t.name, eval_membership(t.shape, x));
    return out;
}

/// Fuzzifies every input of `rb`, in declaration order. Every input needs a
/// value and unknown names are rejected.
inline std::vector<FuzzifiedValue> fuzzify_all(const RuleBase& rb, const Inputs& inputs) {
    for (const auto& [name, value] : inputs) {
        if (!rb.find_input(name)) throw evaluation_error("unknown input variable '" + name + "'");
    }
    std::vector<FuzzifiedValue> out;
    out.reserve(rb.inputs().size());
    for (const auto& var : rb.inputs()) {
        auto it = inputs.find(var.name);
        if (it == inputs.end()) throw evaluation_error("missing input " + var.name);
        if (!std::isfinite(it->second)) throw evaluation_error("input " + var.name + " is not a finite number");
        out.push_back(fuzzify(var, it->second));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rule evaluation

inline Degree evaluate_expression(const FuzzyExpression& expr, std::span<const FuzzifiedValue> fuzzified,
                                  const ConnectiveSet& connectives) {
    if (const auto* atom = std::get_if<Atom>(&expr.node)) {
        Degree d = fuzzified[atom->variable].degrees[atom->term].second;
        for (auto h = atom->hedges.rbegin(); h != atom->hedges.rend(); ++h) d = apply_hedge(*h, d);
        return d;
    }
    if (const auto* bin = std::get_if<BasicBinary<Atom>>(&expr.node)) {
        Degree a = evaluate_expression(*bin->lhs, fuzzified, connectives);
        Degree b = evaluate_expression(*bin->rhs, fuzzified, connectives);
        return bin->op == BinaryOp::And ? and_connect(a, b, connectives.and_method)
                                        : or_connect(a, b, connectives.or_method);
    }
    const auto& neg = std::get<BasicNot<Atom>>(expr.node);
    return 1.0 - evaluate_expression(*neg.operand, fuzzified, connectives);
}

/// Firing degree of a rule: antecedent degree times the rule weight.
inline Degree evaluate_rule(const Rule& rule, std::span<const FuzzifiedValue> fuzzified,
                            const ConnectiveSet& connectives) {
    return evaluate_expression(rule.antecedent, fuzzified, connectives) * rule.weight;
}

// ---------------------------------------------------------------------------
// Implication and accumulation

/// One consequent term shaped by its net activation.
struct OutputComponent {
    std::string term;
    MembershipFunction shape;
    Degree activation = 0.0;
    ImplicationMethod implication = ImplicationMethod::Min;

    Degree at(double x) const { return implicate(activation, eval_membership(shape, x), implication); }
};

/// Point-wise accumulation of the implicated consequent curves of one output.
class AggregatedOutput {
public:
    AggregatedOutput() = default;
    AggregatedOutput(std::string variable, Universe universe, AccumulationMethod accumulation,
                     DefaultValue fallback, std::vector<OutputComponent> components)
        : variable_(std::move(variable)),
          universe_(universe),
          accumulation_(accumulation),
          fallback_(fallback),
          components_(std::move(components)) {}

    const std::string& variable() const { return variable_; }
    const Universe& universe() const { return universe_; }
    AccumulationMethod accumulation() const { return accumulation_; }
    const DefaultValue& fallback() const { return fallback_; }
    const std::vector<OutputComponent>& components() const { return components_; }

    Degree membership(double x) const {
        Degree acc = 0.0;
        for (const auto& c : components_) acc = accumulate_step(acc, c.at(x), accumulation_);
        return acc;
    }

    bool fired() const {
        return std::any_of(components_.begin(), components_.end(),
                           [](const OutputComponent& c) { return c.activation > 0.0; });
    }

    /// Net activation of a term, folded over every component naming it.
    Degree term_activation(std::string_view term) const {
        Degree acc = 0.0;
        for (const auto& c : components_)
            if (c.term == term) acc = accumulate_step(acc, c.activation, accumulation_);
        return acc;
    }

    void append(const AggregatedOutput& other) {
        components_.insert(components_.end(), other.components_.begin(), other.components_.end());
    }

private:
    std::string variable_;
    Universe universe_;
    AccumulationMethod accumulation_ = AccumulationMethod::Max;
    DefaultValue fallback_;
    std::vector<OutputComponent> components_;
};

struct TermActivation {
    std::size_t term = 0;  // index into the output variable's terms
    Degree degree = 0.0;
};

/// Folds each term's activations with the accumulation method, then shapes
/// the term curve by the implication method. Every term of `var` gets a
/// component, with activation 0 when no rule concluded it.
inline AggregatedOutput accumulate(const LinguisticVariable& var, std::span<const TermActivation> activations,
                                   ImplicationMethod implication, AccumulationMethod accumulation) {
    std::vector<OutputComponent> components;
    components.reserve(var.terms.size());
    for (std::size_t t = 0; t < var.terms.size(); ++t) {
        Degree net = 0.0;
        for (const auto& a : activations)
            if (a.term == t) net = accumulate_step(net, a.degree, accumulation);
        components.push_back({var.terms[t].name, var.terms[t].shape, net, implication});
    }
    DefaultValue fallback = var.output ? var.output->fallback : DefaultValue{};
    return AggregatedOutput(var.name, var.universe, accumulation, fallback, std::move(components));
}

// ---------------------------------------------------------------------------
// Defuzzification

namespace detail {

inline double fallback_or_throw(const AggregatedOutput& agg) {
    const auto& fb = agg.fallback();
    if (fb.has_value()) return fb.value;
    std::string msg = "no rules fired for '" + agg.variable() + "'";
    if (fb.kind == DefaultValue::Kind::NoChange) msg += " (DEFAULT NC: keep the previous value)";
    else msg += " and no DEFAULT is declared";
    throw no_rules_fired(msg);
}

struct Grid {
    std::vector<double> x;
    std::vector<Degree> mu;
    double step = 0.0;
};

inline Grid sample(const AggregatedOutput& agg, std::size_t samples) {
    Grid g;
    const auto [lo, hi] = agg.universe();
    g.step = (hi - lo) / static_cast<double>(samples - 1);
    g.x.resize(samples);
    g.mu.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        g.x[i] = i + 1 == samples ? hi : lo + g.step * static_cast<double>(i);
        g.mu[i] = agg.membership(g.x[i]);
    }
    return g;
}

/// Bisects [a, b] for the boundary of `pred`, assuming pred(a) != pred(b).
/// Returns the end of the final bracket on which pred holds.
template <class Pred>
double bisect_boundary(double a, double b, Pred pred) {
    bool pa = pred(a);
    for (int i = 0; i < 200 && b - a > 0.0; ++i) {
        double m = a + 0.5 * (b - a);
        if (m <= a || m >= b) break;
        if (pred(m) == pa) a = m;
        else b = m;
    }
    return pa ? a : b;
}

inline double center_of_singletons(const AggregatedOutput& agg) {
    double num = 0.0, den = 0.0;
    for (const auto& c : agg.components()) {
        const auto* s = std::get_if<Singleton>(&c.shape);
        if (!s) throw evaluation_error("COGS requires singleton terms on '" + agg.variable() + "'");
        double w = implicate(c.activation, 1.0, c.implication);
        num += s->x * w;
        den += w;
    }
    if (!(den > 0.0)) return fallback_or_throw(agg);
    return num / den;
}

}  // namespace detail

/// Crisp value of an aggregated output. Continuous methods sample the curve
/// on `samples` evenly spaced points over the universe (trapezoidal rule);
/// LM and RM locate the maximum on the grid plus the term knots, then refine
/// its boundary by bisection between neighbouring sample points. Falls back to DEFAULT when nothing fired.
inline double defuzzify(const AggregatedOutput& agg, DefuzzMethod method, std::size_t samples = default_samples) {
    if (samples < 2) throw std::invalid_argument("defuzzification needs at least 2 samples");
    if (method == DefuzzMethod::CenterOfGravitySingletons) return detail::center_of_singletons(agg);

    for (const auto& c : agg.components())
        if (is_singleton(c.shape))
            throw evaluation_error("singleton terms on '" + agg.variable() + "' can only be defuzzified with COGS");
    if (!agg.fired()) return detail::fallback_or_throw(agg);

    const detail::Grid g = detail::sample(agg, samples);
    const double h = g.step;
    const std::size_t n = g.x.size();

    double area = 0.0, moment = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        area += 0.5 * h * (g.mu[i] + g.mu[i + 1]);
        moment += 0.5 * h * (g.x[i] * g.mu[i] + g.x[i + 1] * g.mu[i + 1]);
    }
    if (!(area > 0.0)) return detail::fallback_or_throw(agg);

    switch (method) {
    case DefuzzMethod::CenterOfGravity: return moment / area;

    case DefuzzMethod::CenterOfArea: {
        const double half = 0.5 * area;
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double seg = 0.5 * h * (g.mu[i] + g.mu[i + 1]);
            if (cum + seg >= half) {
                const double m0 = g.mu[i], m1 = g.mu[i + 1], need = half - cum;
                if (need <= 0.0) return g.x[i];
                auto partial = [&](double t) { return m0 * t + (m1 - m0) * t * t / (2.0 * h); };
                double t = detail::bisect_boundary(0.0, h, [&](double s) { return partial(s) >= need; });
                return g.x[i] + t;
            }
            cum += seg;
        }
        return g.x.back();
    }

    case DefuzzMethod::LeftMostMax:
    case DefuzzMethod::RightMostMax:
    case DefuzzMethod::MeanMax: {
        // the grid may straddle a sharp peak, so term knots are sampled too
        std::vector<std::pair<double, Degree>> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pts.emplace_back(g.x[i], g.mu[i]);
        for (const auto& c : agg.components())
            for (double k : knots(c.shape))
                if (k > g.x.front() && k < g.x.back()) pts.emplace_back(k, agg.membership(k));
        std::sort(pts.begin(), pts.end());

        Degree peak = 0.0;
        for (const auto& p : pts) peak = std::max(peak, p.second);
        const double level = peak - 1e-12 * std::max(1.0, peak);
        auto on_top = [&](double x) { return agg.membership(x) >= level; };
        std::size_t first = 0, last = pts.size() - 1;
        while (pts[first].second < level) ++first;
        while (pts[last].second < level) --last;
        double left = first == 0 ? pts[0].first : detail::bisect_boundary(pts[first - 1].first, pts[first].first, on_top);
        double right = last + 1 == pts.size() ? pts[last].first
                                              : detail::bisect_boundary(pts[last].first, pts[last + 1].first, on_top);
        if (method == DefuzzMethod::LeftMostMax) return left;
        if (method == DefuzzMethod::RightMostMax) return right;
        return 0.5 * (left + right);
    }

    case DefuzzMethod::CenterOfGravitySingletons: break;
    }
    return moment / area;
}

// ---------------------------------------------------------------------------
// Inference

struct TraceEntry {
    std::string block;
    std::string rule;
    Degree activation = 0.0;
    std::string output;
    std::string term;
};

struct OutputResult {
    AggregatedOutput aggregate;
    std::optional<double> crisp;
    /// false iff every activation concluding this output was 0
    bool fired = false;
    /// set when no crisp value could be produced
    std::string error;
};

struct EvaluationContext {
    Inputs inputs;
    std::vector<FuzzifiedValue> fuzzified;  // rb.inputs() order
    std::vector<TraceEntry> trace;          // rule order, one entry per consequent
    std::vector<OutputResult> outputs;      // rb.outputs() order

    const FuzzifiedValue& fuzzified_value(std::string_view var) const {
        for (const auto& f : fuzzified)
            if (f.variable == var) return f;
        throw std::out_of_range("no input '" + std::string(var) + "'");
    }

    const OutputResult& output(std::string_view var) const {
        for (const auto& o : outputs)
            if (o.aggregate.variable() == var) return o;
        throw std::out_of_range("no output '" + std::string(var) + "'");
    }
};

struct InferenceOptions {
    std::size_t samples = default_samples;
};

/// Full Mamdani pass. Input errors throw evaluation_error; an output that
/// cannot be defuzzified is reported in its OutputResult instead.
inline EvaluationContext infer(const RuleBase& rb, const Inputs& inputs, const InferenceOptions& options = {}) {
    EvaluationContext ctx;
    ctx.inputs = inputs;
    ctx.fuzzified = fuzzify_all(rb, inputs);

    // activations grouped per output and per implication method
    using Key = std::pair<std::size_t, ImplicationMethod>;
    std::map<Key, std::vector<TermActivation>> activations;

    for (const auto& block : rb.blocks()) {
        for (const auto& rule : block.rules) {
            Degree a = evaluate_rule(rule, ctx.fuzzified, block.connectives);
            for (const auto& c : rule.consequents) {
                const auto& var = rb.outputs()[c.variable];
                ctx.trace.push_back({block.name, rule.id, a, var.name, var.terms[c.term].name});
                activations[{c.variable, block.activation}].push_back({c.term, a});
            }
        }
    }

    for (std::size_t o = 0; o < rb.outputs().size(); ++o) {
        const auto& var = rb.outputs()[o];
        const auto& settings = *var.output;
        OutputResult result;
        bool first = true;
        for (const auto& [key, acts] : activations) {
            if (key.first != o) continue;
            auto part = accumulate(var, acts, key.second, settings.accumulation);
            if (first) result.aggregate = std::move(part);
            else result.aggregate.append(part);
            first = false;
        }
        if (first) result.aggregate = accumulate(var, {}, ImplicationMethod::Min, settings.accumulation);
        result.fired = result.aggregate.fired();
        try {
            result.crisp = defuzzify(result.aggregate, settings.method, options.samples);
        } catch (const evaluation_error& e) {
            result.error = e.what();
        }
        ctx.outputs.push_back(std::move(result));
    }
    return ctx;
}

}  // namespace fuzzy
