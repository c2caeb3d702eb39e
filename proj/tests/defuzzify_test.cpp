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

#include <random>

#include "fuzzy/engine.hpp"
#include "support/random_rulebase.hpp"

namespace fuzzy {
namespace {

OutputComponent full(MembershipFunction shape, Degree activation = 1.0,
                     ImplicationMethod impl = ImplicationMethod::Min) {
    return {"t", std::move(shape), activation, impl};
}

AggregatedOutput curve(Universe u, std::vector<OutputComponent> comps,
                       DefaultValue fallback = DefaultValue::of(0)) {
    return AggregatedOutput("y", u, AccumulationMethod::Max, fallback, std::move(comps));
}

constexpr DefuzzMethod continuous_methods[] = {DefuzzMethod::CenterOfGravity, DefuzzMethod::CenterOfArea,
                                               DefuzzMethod::LeftMostMax, DefuzzMethod::RightMostMax,
                                               DefuzzMethod::MeanMax};

TEST(Defuzzify, SymmetricTriangle) {
    auto agg = curve({1, 3}, {full(PiecewiseLinear{{{1, 0}, {2, 1}, {3, 0}}})});
    for (auto m : continuous_methods) EXPECT_NEAR(defuzzify(agg, m), 2.0, 1e-9) << keyword(m);
}

TEST(Defuzzify, ClosedFormCentroids) {
    auto tri = curve({0, 10}, {full(Triangular{1, 2, 6})});
    EXPECT_NEAR(defuzzify(tri, DefuzzMethod::CenterOfGravity, 100000), 3.0, 1e-6);

    // trapezoid 0,2,4,10: split into triangle [0,2], rectangle [2,4], triangle [4,10]
    double area = 1.0 + 2.0 + 3.0;
    double moment = 1.0 * (4.0 / 3.0) + 2.0 * 3.0 + 3.0 * 6.0;
    auto trap = curve({0, 10}, {full(Trapezoidal{0, 2, 4, 10})});
    EXPECT_NEAR(defuzzify(trap, DefuzzMethod::CenterOfGravity, 100000), moment / area, 1e-6);
    // half the area is 3: 1 under the left slope plus 2 over the plateau, so at x = 4
    EXPECT_NEAR(defuzzify(trap, DefuzzMethod::CenterOfArea, 100000), 4.0, 1e-6);

    auto gauss = curve({-20, 20}, {full(Gaussian{1.5, 2})});
    EXPECT_NEAR(defuzzify(gauss, DefuzzMethod::CenterOfGravity, 100000), 1.5, 1e-6);

    // triangle clipped at 0.5 over [0, 2]: trapezoid 0, 0.5, 1.5, 2 of height 0.5, symmetric
    auto clipped = curve({0, 2}, {full(Triangular{0, 1, 2}, 0.5)});
    EXPECT_NEAR(defuzzify(clipped, DefuzzMethod::CenterOfGravity), 1.0, 1e-9);
    EXPECT_NEAR(defuzzify(clipped, DefuzzMethod::LeftMostMax), 0.5, 1e-9);
    EXPECT_NEAR(defuzzify(clipped, DefuzzMethod::RightMostMax), 1.5, 1e-9);
}

TEST(Defuzzify, Maxima) {
    // the worked aggregate: low clipped at 0.38, normal clipped at 0.5
    auto agg = curve({0.5, 4.0}, {full(PiecewiseLinear{{{0.5, 1}, {1, 1}, {2, 0}}}, 0.38),
                                  full(PiecewiseLinear{{{1, 0}, {2, 1}, {3, 0}}}, 0.5),
                                  full(PiecewiseLinear{{{2, 0}, {4, 1}}}, 0.0)});
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::LeftMostMax), 1.5, 1e-9);
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::RightMostMax), 2.5, 1e-9);
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::MeanMax), 2.0, 1e-9);
    // coarse grids still find the plateau edges
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::LeftMostMax, 8), 1.5, 1e-9);
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::RightMostMax, 8), 2.5, 1e-9);
}

TEST(Defuzzify, GridRefinementConverges) {
    auto agg = curve({0.5, 4.0}, {full(PiecewiseLinear{{{0.5, 1}, {1, 1}, {2, 0}}}, 0.38),
                                  full(PiecewiseLinear{{{1, 0}, {2, 1}, {3, 0}}}, 0.5)});
    double fine = defuzzify(agg, DefuzzMethod::CenterOfGravity, 1'000'000);
    double prev_err = 1.0;
    for (std::size_t n : {11u, 101u, 1001u, 10001u}) {
        double err = std::abs(defuzzify(agg, DefuzzMethod::CenterOfGravity, n) - fine);
        EXPECT_LE(err, prev_err) << n;
        prev_err = err;
    }
    EXPECT_LT(prev_err, 1e-6);
}

TEST(Defuzzify, Singletons) {
    std::vector<OutputComponent> comps{{"a", Singleton{1}, 0.0, ImplicationMethod::Min},
                                       {"b", Singleton{2}, 0.37, ImplicationMethod::Min},
                                       {"c", Singleton{3}, 0.5, ImplicationMethod::Min}};
    auto agg = curve({1, 3}, comps);
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::CenterOfGravitySingletons), 2.5747, 1e-4);
    EXPECT_NEAR(defuzzify(agg, DefuzzMethod::CenterOfGravitySingletons), (0.74 + 1.5) / 0.87, 1e-12);
    EXPECT_THROW(defuzzify(agg, DefuzzMethod::CenterOfGravity), evaluation_error);

    for (auto& c : comps) c.activation = 0;
    EXPECT_EQ(defuzzify(curve({1, 3}, comps, DefaultValue::of(7)), DefuzzMethod::CenterOfGravitySingletons), 7.0);
    EXPECT_THROW(defuzzify(curve({1, 3}, comps, DefaultValue::none()), DefuzzMethod::CenterOfGravitySingletons),
                 no_rules_fired);

    auto polygon = curve({0, 1}, {full(PiecewiseLinear{{{0, 0}, {1, 1}}})});
    EXPECT_THROW(defuzzify(polygon, DefuzzMethod::CenterOfGravitySingletons), evaluation_error);
}

TEST(Defuzzify, Fallbacks) {
    auto silent = curve({0, 1}, {full(PiecewiseLinear{{{0, 0}, {1, 1}}}, 0.0)}, DefaultValue::of(0.25));
    for (auto m : continuous_methods) EXPECT_EQ(defuzzify(silent, m), 0.25);
    auto nc = curve({0, 1}, {full(PiecewiseLinear{{{0, 0}, {1, 1}}}, 0.0)}, DefaultValue::no_change());
    EXPECT_THROW(defuzzify(nc, DefuzzMethod::CenterOfGravity), no_rules_fired);
    auto one = curve({0, 1}, {full(PiecewiseLinear{{{0, 0}, {1, 1}}})});
    EXPECT_THROW(defuzzify(one, DefuzzMethod::CenterOfGravity, 1), std::invalid_argument);
    // endpoints only: one trapezoid from (0, 0) to (1, 1)
    EXPECT_NEAR(defuzzify(one, DefuzzMethod::CenterOfGravity, 2), 1.0, 1e-12);
}

// Shifting and stretching the curve moves the crisp value the same way.
TEST(Properties, AffineEquivariance) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1), shift(-50, 50), scale(0.1, 10);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> xs{0, u(rng), 1 + u(rng), 2 + u(rng), 3};
        std::vector<Point> p1, p2;
        for (double x : xs) p1.push_back({x, u(rng)});
        std::sort(p1.begin(), p1.end(), [](auto& a, auto& b) { return a.x < b.x; });
        for (auto& p : p1) p2.push_back({p.x + 1, u(rng)});
        double act1 = 0.1 + 0.9 * u(rng), act2 = 0.1 + 0.9 * u(rng);
        double s = scale(rng), c = shift(rng);
        auto map = [&](std::vector<Point> pts) {
            for (auto& p : pts) p.x = s * p.x + c;
            return pts;
        };
        auto base = curve({0, 4}, {full(PiecewiseLinear{p1}, act1), full(PiecewiseLinear{p2}, act2)});
        auto moved = curve({c, 4 * s + c}, {full(PiecewiseLinear{map(p1)}, act1), full(PiecewiseLinear{map(p2)}, act2)});
        for (auto m : {DefuzzMethod::CenterOfGravity, DefuzzMethod::CenterOfArea}) {
            double a = defuzzify(base, m, 20001), b = defuzzify(moved, m, 20001);
            EXPECT_NEAR(s * a + c, b, 1e-6 * std::max(1.0, s)) << keyword(m);
        }
    }
}

// Every crisp value lies inside the universe, or is the declared DEFAULT.
TEST(Properties, CrispWithinUniverse) {
    fuzzy::testing::RandomRuleBase gen(4242);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-6, 6);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        auto rb = gen();
        Inputs in;
        for (const auto& v : rb.inputs()) in[v.name] = u(rng);
        auto ctx = infer(rb, in, {257});
        for (std::size_t o = 0; o < ctx.outputs.size(); ++o) {
            const auto& r = ctx.outputs[o];
            if (!r.crisp) {
                EXPECT_FALSE(r.error.empty());
                continue;
            }
            const auto& var = rb.outputs()[o];
            if (var.output->fallback.has_value() && *r.crisp == var.output->fallback.value) continue;
            ++checked;
            EXPECT_GE(*r.crisp, var.universe.lo - 1e-9);
            EXPECT_LE(*r.crisp, var.universe.hi + 1e-9);
        }
    }
    EXPECT_GT(checked, 50);
}

}  // namespace
}  // namespace fuzzy
