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

#include <cmath>
#include <random>

#include "fuzzy/operators.hpp"

namespace fuzzy {
namespace {

constexpr AndMethod all_and[] = {AndMethod::Min, AndMethod::Prod, AndMethod::BoundedDiff};
constexpr OrMethod all_or[] = {OrMethod::Max, OrMethod::ProbSum, OrMethod::BoundedSum};

TEST(Connectives, AndFormulas) {
    EXPECT_EQ(and_connect(0.62, 0.5, AndMethod::Min), 0.5);
    EXPECT_DOUBLE_EQ(and_connect(0.5, 0.5, AndMethod::Prod), 0.25);
    EXPECT_NEAR(and_connect(0.6, 0.7, AndMethod::BoundedDiff), 0.3, 1e-12);
    EXPECT_EQ(and_connect(0.2, 0.3, AndMethod::BoundedDiff), 0.0);
    for (auto m : all_and) EXPECT_EQ(and_connect(0.37, 1.0, m), 0.37);
}

TEST(Connectives, OrFormulas) {
    EXPECT_EQ(or_connect(0.25, 0.37, OrMethod::Max), 0.37);
    EXPECT_DOUBLE_EQ(or_connect(0.5, 0.5, OrMethod::ProbSum), 0.75);
    EXPECT_EQ(or_connect(0.6, 0.7, OrMethod::BoundedSum), 1.0);
}

TEST(Connectives, NaryMinFold) {
    Degree d = and_connect(and_connect(0.62, 0.5, AndMethod::Min), 1.0, AndMethod::Min);
    EXPECT_EQ(d, 0.5);
}

TEST(Hedges, Formulas) {
    EXPECT_NEAR(apply_hedge(Hedge::Not, 0.37), 0.63, 1e-12);
    EXPECT_DOUBLE_EQ(apply_hedge(Hedge::Very, 0.5), 0.25);
    EXPECT_DOUBLE_EQ(apply_hedge(Hedge::Somewhat, 0.25), 0.5);
}

TEST(Implication, ClipAndScale) {
    EXPECT_EQ(implicate(0.5, 0.8, ImplicationMethod::Min), 0.5);
    EXPECT_DOUBLE_EQ(implicate(0.5, 0.8, ImplicationMethod::Product), 0.4);
}

TEST(Accumulation, Steps) {
    EXPECT_EQ(accumulate_step(0.25, 0.37, AccumulationMethod::Max), 0.37);
    EXPECT_EQ(accumulate_step(0.6, 0.7, AccumulationMethod::BoundedSum), 1.0);
    EXPECT_DOUBLE_EQ(accumulate_step(0.6, 0.7, AccumulationMethod::NormedSum), 1.0);
    EXPECT_DOUBLE_EQ(accumulate_step(0.2, 0.3, AccumulationMethod::NormedSum), 0.5);
    EXPECT_DOUBLE_EQ(accumulate_step(0.6, 0.7, AccumulationMethod::Sum), 1.3);  // unclamped
    EXPECT_DOUBLE_EQ(accumulate_step(0.5, 0.5, AccumulationMethod::ProbOr), 0.75);
}

TEST(Keywords, RoundTripCaseInsensitively) {
    for (auto m : all_and) EXPECT_EQ(parse_and_method(keyword(m)), m);
    for (auto m : all_or) EXPECT_EQ(parse_or_method(keyword(m)), m);
    EXPECT_EQ(parse_accumulation_method("probor"), AccumulationMethod::ProbOr);
    EXPECT_EQ(parse_defuzz_method("cogs"), DefuzzMethod::CenterOfGravitySingletons);
    EXPECT_EQ(parse_implication_method("Product"), ImplicationMethod::Product);
    EXPECT_FALSE(parse_accumulation_method("AVG").has_value());
}

// Algebraic laws over random degrees.
class NormLaws : public ::testing::Test {
protected:
    std::mt19937_64 rng{2024};
    std::uniform_real_distribution<double> unit{0.0, 1.0};
};

TEST_F(NormLaws, TNorms) {
    for (int i = 0; i < 10000; ++i) {
        double a = unit(rng), b = unit(rng), c = unit(rng);
        double lo = std::min(b, c), hi = std::max(b, c);
        for (auto m : all_and) {
            ASSERT_EQ(and_connect(a, b, m), and_connect(b, a, m));
            ASSERT_LE(and_connect(a, lo, m), and_connect(a, hi, m));
            ASSERT_EQ(and_connect(a, 1.0, m), a);
            ASSERT_EQ(and_connect(a, 0.0, m), 0.0);
            double v = and_connect(a, b, m);
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
        }
    }
}

TEST_F(NormLaws, SNorms) {
    for (int i = 0; i < 10000; ++i) {
        double a = unit(rng), b = unit(rng), c = unit(rng);
        double lo = std::min(b, c), hi = std::max(b, c);
        for (auto m : all_or) {
            ASSERT_EQ(or_connect(a, b, m), or_connect(b, a, m));
            ASSERT_LE(or_connect(a, lo, m), or_connect(a, hi, m));
            ASSERT_EQ(or_connect(a, 0.0, m), a);
            ASSERT_EQ(or_connect(a, 1.0, m), 1.0);
        }
    }
}

TEST_F(NormLaws, DeMorganDuals) {
    for (int i = 0; i < 10000; ++i) {
        double a = unit(rng), b = unit(rng);
        ASSERT_EQ(1.0 - and_connect(a, b, AndMethod::Min), or_connect(1 - a, 1 - b, OrMethod::Max));
        ASSERT_NEAR(1.0 - and_connect(a, b, AndMethod::Prod), or_connect(1 - a, 1 - b, OrMethod::ProbSum), 1e-12);
        ASSERT_NEAR(1.0 - and_connect(a, b, AndMethod::BoundedDiff), or_connect(1 - a, 1 - b, OrMethod::BoundedSum),
                    1e-12);
    }
}

TEST_F(NormLaws, HedgeOrdering) {
    for (int i = 0; i < 10000; ++i) {
        double a = unit(rng);
        ASSERT_LE(apply_hedge(Hedge::Very, a), a);
        ASSERT_LE(a, apply_hedge(Hedge::Somewhat, a));
        for (auto h : {Hedge::Not, Hedge::Very, Hedge::Somewhat}) {
            ASSERT_GE(apply_hedge(h, a), 0.0);
            ASSERT_LE(apply_hedge(h, a), 1.0);
        }
    }
}

}  // namespace
}  // namespace fuzzy
