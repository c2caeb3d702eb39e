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
#include <gtest/gtest.h>

#include <future>
#include <random>
#include <thread>

#include "fuzzy/engine.hpp"
#include "fuzzy/fcl.hpp"
#include "support/oracle.hpp"
#include "support/worked_case.hpp"
#include "support/random_rulebase.hpp"

namespace fuzzy {
namespace {

using namespace fuzzy::testing;

RuleBase worked_rulebase() {
    auto r = fcl::parse_fcl(std::string(therapy_listing) + std::string(therapy_rules));
    if (!r.ok()) throw std::runtime_error("worked rule base does not parse");
    return std::move(*r.rulebase);
}

Inputs worked_inputs() {
    return {{"speech_problems_level", worked_speech_level},
            {"child_age", worked_child_age},
            {"family_implication", worked_family}};
}

TEST(Fuzzify, WorkedCase) {
    auto rb = worked_rulebase();
    auto f = fuzzify_all(rb, worked_inputs());
    ASSERT_EQ(f.size(), 3u);
    EXPECT_NEAR(f[0].degree("low"), 0.38, 1e-12);
    EXPECT_NEAR(f[0].degree("normal"), 0.62, 1e-12);
    EXPECT_EQ(f[0].degree("high"), 0.0);
    EXPECT_NEAR(f[1].degree("small"), 0.25, 1e-12);
    EXPECT_NEAR(f[1].degree("medium"), 0.5, 1e-12);
    EXPECT_EQ(f[1].degree("big"), 0.0);
    EXPECT_EQ(f[2].degree("reduce"), 0.0);
    EXPECT_EQ(f[2].degree("moderate"), 1.0);
    EXPECT_EQ(f[2].degree("high"), 0.0);
}

TEST(Fuzzify, InputErrors) {
    auto rb = worked_rulebase();
    auto in = worked_inputs();
    in.erase("child_age");
    try {
        fuzzify_all(rb, in);
        FAIL();
    } catch (const evaluation_error& e) {
        EXPECT_STREQ(e.what(), "missing input child_age");
    }
    auto extra = worked_inputs();
    extra["children_age"] = 4.5;
    try {
        fuzzify_all(rb, extra);
        FAIL();
    } catch (const evaluation_error& e) {
        EXPECT_STREQ(e.what(), "unknown input variable 'children_age'");
    }
    auto nan = worked_inputs();
    nan["child_age"] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(fuzzify_all(rb, nan), evaluation_error);
}

TEST(Rules, WorkedActivations) {
    auto rb = worked_rulebase();
    auto f = fuzzify_all(rb, worked_inputs());
    const auto& block = rb.blocks()[0];
    std::vector<double> expected{0.0, 0.25, 0.38, 0.25, 0.5};
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_NEAR(evaluate_rule(block.rules[i], f, block.connectives), expected[i], 1e-12) << i;
}

TEST(Rules, WeightScalesActivation) {
    auto r = fcl::parse_fcl(std::string(therapy_listing) +
                            "IF speech_problems_level IS normal AND child_age IS medium "
                            "THEN weekly_session_number IS normal WITH 0.5;");
    ASSERT_TRUE(r.ok());
    auto f = fuzzify_all(*r.rulebase, worked_inputs());
    const auto& block = r.rulebase->blocks()[0];
    EXPECT_NEAR(evaluate_rule(block.rules[0], f, block.connectives), 0.25, 1e-12);
}

TEST(Rules, HedgesAndNegation) {
    auto r = fcl::parse_fcl(std::string(therapy_listing) +
                            "IF speech_problems_level IS very normal THEN weekly_session_number IS normal;\n"
                            "IF speech_problems_level IS somewhat low THEN weekly_session_number IS normal;\n"
                            "IF speech_problems_level IS not very normal THEN weekly_session_number IS normal;\n"
                            "IF NOT (speech_problems_level IS normal OR child_age IS small) "
                            "THEN weekly_session_number IS normal;\n");
    ASSERT_TRUE(r.ok());
    auto f = fuzzify_all(*r.rulebase, worked_inputs());
    const auto& b = r.rulebase->blocks()[0];
    EXPECT_NEAR(evaluate_rule(b.rules[0], f, b.connectives), 0.62 * 0.62, 1e-12);
    EXPECT_NEAR(evaluate_rule(b.rules[1], f, b.connectives), std::sqrt(0.38), 1e-12);
    EXPECT_NEAR(evaluate_rule(b.rules[2], f, b.connectives), 1 - 0.62 * 0.62, 1e-12);
    EXPECT_NEAR(evaluate_rule(b.rules[3], f, b.connectives), 1 - 0.62, 1e-12);
}

TEST(Accumulate, WorkedNetActivations) {
    auto rb = worked_rulebase();
    auto ctx = infer(rb, worked_inputs());
    const auto& agg = ctx.outputs[0].aggregate;
    EXPECT_EQ(agg.term_activation("high"), 0.0);
    EXPECT_NEAR(agg.term_activation("low"), 0.38, 1e-12);
    EXPECT_NEAR(agg.term_activation("normal"), 0.5, 1e-12);
}

TEST(Accumulate, Methods) {
    auto rb = worked_rulebase();
    const auto& var = rb.outputs()[0];
    std::vector<TermActivation> acts{{1, 0.6}, {1, 0.7}};
    auto max = accumulate(var, acts, ImplicationMethod::Min, AccumulationMethod::Max);
    EXPECT_DOUBLE_EQ(max.term_activation("normal"), 0.7);
    auto bsum = accumulate(var, acts, ImplicationMethod::Min, AccumulationMethod::BoundedSum);
    EXPECT_DOUBLE_EQ(bsum.term_activation("normal"), 1.0);
    auto probor = accumulate(var, acts, ImplicationMethod::Min, AccumulationMethod::ProbOr);
    EXPECT_NEAR(probor.term_activation("normal"), 0.88, 1e-12);
    auto sum = accumulate(var, acts, ImplicationMethod::Min, AccumulationMethod::Sum);
    EXPECT_NEAR(sum.term_activation("normal"), 1.3, 1e-12);
    auto nsum = accumulate(var, acts, ImplicationMethod::Min, AccumulationMethod::NormedSum);
    EXPECT_NEAR(nsum.term_activation("normal"), 1.0, 1e-12);
}

TEST(Accumulate, AggregateCurve) {
    auto rb = worked_rulebase();
    auto ctx = infer(rb, worked_inputs());
    const auto& agg = ctx.outputs[0].aggregate;
    oracle::WorkedCase ref(worked_speech_level, worked_child_age, worked_family);
    for (int i = 0; i <= 350; ++i) {
        double x = 0.5 + i * 0.01;
        EXPECT_NEAR(agg.membership(x), ref.aggregate(x), 1e-12) << x;
    }
    EXPECT_NEAR(agg.membership(2.0), 0.5, 1e-12);
    EXPECT_NEAR(agg.membership(0.75), 0.38, 1e-12);
}

TEST(Infer, TraceAndCrisp) {
    auto rb = worked_rulebase();
    auto ctx = infer(rb, worked_inputs());
    ASSERT_EQ(ctx.trace.size(), 5u);
    std::vector<std::string> terms{"high", "low", "low", "normal", "normal"};
    std::vector<double> acts{0.0, 0.25, 0.38, 0.25, 0.5};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(ctx.trace[i].rule, std::to_string(i + 1));
        EXPECT_EQ(ctx.trace[i].output, "weekly_session_number");
        EXPECT_EQ(ctx.trace[i].term, terms[i]);
        EXPECT_NEAR(ctx.trace[i].activation, acts[i], 1e-12);
    }
    const auto& out = ctx.output("weekly_session_number");
    ASSERT_TRUE(out.crisp.has_value());
    EXPECT_TRUE(out.fired);
    oracle::WorkedCase ref(worked_speech_level, worked_child_age, worked_family);
    EXPECT_NEAR(*out.crisp, ref.cog(0.5, 4.0, 1'000'000), 1e-3);
}

TEST(Infer, NoRuleFiresUsesDefault) {
    auto rb = worked_rulebase();
    Inputs in{{"speech_problems_level", 3.4}, {"child_age", 7}, {"family_implication", 1}};
    auto ctx = infer(rb, in);
    const auto& out = ctx.outputs[0];
    EXPECT_FALSE(out.fired);
    ASSERT_TRUE(out.crisp.has_value());
    EXPECT_EQ(*out.crisp, 0.0);
    for (const auto& t : ctx.trace) EXPECT_EQ(t.activation, 0.0);
}

TEST(Infer, NoRuleFiresWithoutDefaultIsAnError) {
    std::string src = std::string(therapy_listing) + std::string(therapy_rules);
    src.erase(src.find("DEFAULT := 0;"), 13);
    auto r = fcl::parse_fcl(src);
    ASSERT_TRUE(r.ok());
    Inputs in{{"speech_problems_level", 3.4}, {"child_age", 7}, {"family_implication", 1}};
    auto ctx = infer(*r.rulebase, in);
    EXPECT_FALSE(ctx.outputs[0].crisp.has_value());
    EXPECT_EQ(ctx.outputs[0].error, "no rules fired for 'weekly_session_number' and no DEFAULT is declared");
    EXPECT_THROW(defuzzify(ctx.outputs[0].aggregate, DefuzzMethod::CenterOfGravity), no_rules_fired);
}

TEST(Infer, Deterministic) {
    auto rb = worked_rulebase();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> spl(0.5, 3.5), age(3, 8);
    for (int i = 0; i < 200; ++i) {
        Inputs in{{"speech_problems_level", spl(rng)}, {"child_age", age(rng)}, {"family_implication", 1.0 + i % 3}};
        auto a = infer(rb, in), b = infer(rb, in);
        ASSERT_EQ(a.outputs[0].crisp, b.outputs[0].crisp);
        for (std::size_t k = 0; k < a.trace.size(); ++k) ASSERT_EQ(a.trace[k].activation, b.trace[k].activation);
    }
}

TEST(Infer, ConcurrentCallsAgree) {
    auto rb = worked_rulebase();
    auto expected = *infer(rb, worked_inputs()).outputs[0].crisp;
    std::vector<std::future<double>> runs;
    for (int t = 0; t < 8; ++t)
        runs.push_back(std::async(std::launch::async, [&] {
            double v = 0;
            for (int i = 0; i < 50; ++i) v = *infer(rb, worked_inputs()).outputs[0].crisp;
            return v;
        }));
    for (auto& f : runs) EXPECT_EQ(f.get(), expected);
}

// Rule activations stay in [0, 1], and for net activations within [0, 1]
// product implication never exceeds min implication.
TEST(Properties, ActivationBoundsAndImplicationOrder) {
    RandomRuleBase gen(99);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int i = 0; i < 300; ++i) {
        auto rb = gen();
        Inputs in;
        for (const auto& v : rb.inputs()) in[v.name] = u(rng);
        auto f = fuzzify_all(rb, in);
        for (const auto& fv : f)
            for (const auto& [t, d] : fv.degrees) ASSERT_TRUE(d >= 0.0 && d <= 1.0);
        for (const auto& block : rb.blocks())
            for (const auto& rule : block.rules) {
                double a = evaluate_rule(rule, f, block.connectives);
                ASSERT_GE(a, 0.0);
                ASSERT_LE(a, 1.0);
            }
        auto ctx = infer(rb, in);
        for (const auto& out : ctx.outputs)
            for (const auto& c : out.aggregate.components()) {
                if (c.activation > 1.0) continue;  // unclamped SUM accumulation
                for (double x = -6; x <= 6; x += 0.37) {
                    double mu = eval_membership(c.shape, x);
                    ASSERT_LE(implicate(c.activation, mu, ImplicationMethod::Product),
                              implicate(c.activation, mu, ImplicationMethod::Min) + 1e-15);
                }
            }
    }
}

// Under MAX accumulation, raising one activation never lowers the aggregate.
TEST(Properties, MaxAccumulationIsMonotone) {
    auto rb = worked_rulebase();
    const auto& var = rb.outputs()[0];
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
        std::vector<TermActivation> acts{{0, u(rng)}, {1, u(rng)}, {2, u(rng)}, {1, u(rng)}};
        auto raised = acts;
        std::size_t k = rng() % acts.size();
        raised[k].degree = std::min(1.0, raised[k].degree + u(rng));
        for (auto impl : {ImplicationMethod::Min, ImplicationMethod::Product}) {
            auto a = accumulate(var, acts, impl, AccumulationMethod::Max);
            auto b = accumulate(var, raised, impl, AccumulationMethod::Max);
            for (double x = 0.5; x <= 4.0; x += 0.05) ASSERT_LE(a.membership(x), b.membership(x));
        }
    }
}

}  // namespace
}  // namespace fuzzy
