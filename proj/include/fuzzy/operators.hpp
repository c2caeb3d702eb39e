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
#include <cctype>
#include <cmath>
#include <optional>
#include <string_view>
#include <utility>

namespace fuzzy {

/// Membership degree. Lies in [0,1] everywhere except under Sum accumulation.
using Degree = double;

enum class AndMethod { Min, Prod, BoundedDiff };
enum class OrMethod { Max, ProbSum, BoundedSum };
enum class Hedge { Not, Somewhat, Very };
enum class ImplicationMethod { Min, Product };
enum class AccumulationMethod { Max, BoundedSum, NormedSum, Sum, ProbOr };
enum class DefuzzMethod {
    CenterOfGravity,
    CenterOfGravitySingletons,
    CenterOfArea,
    LeftMostMax,
    RightMostMax,
    MeanMax,
};

struct ConnectiveSet {
    AndMethod and_method = AndMethod::Min;
    OrMethod or_method = OrMethod::Max;

    friend bool operator==(const ConnectiveSet&, const ConnectiveSet&) = default;
};

// t-norms. BDIF and ASUM are evaluated on ordered operands so identity and
// annihilator hold bit-exactly, not just up to rounding.
inline Degree and_connect(Degree a, Degree b, AndMethod method) {
    switch (method) {
    case AndMethod::Min: return std::min(a, b);
    case AndMethod::Prod: return a * b;
    case AndMethod::BoundedDiff: return std::max(0.0, std::min(a, b) - (1.0 - std::max(a, b)));  // a + b - 1
    }
    return 0.0;
}

// s-norms
inline Degree or_connect(Degree a, Degree b, OrMethod method) {
    switch (method) {
    case OrMethod::Max: return std::max(a, b);
    case OrMethod::ProbSum: return std::max(a, b) + std::min(a, b) * (1.0 - std::max(a, b));  // a + b - ab
    case OrMethod::BoundedSum: return std::min(1.0, a + b);
    }
    return 0.0;
}

inline Degree apply_hedge(Hedge hedge, Degree a) {
    switch (hedge) {
    case Hedge::Not: return 1.0 - a;
    case Hedge::Somewhat: return std::sqrt(a);
    case Hedge::Very: return a * a;
    }
    return a;
}

/// Shapes one point of a consequent curve by the rule activation.
inline Degree implicate(Degree activation, Degree membership, ImplicationMethod method) {
    switch (method) {
    case ImplicationMethod::Min: return std::min(activation, membership);
    case ImplicationMethod::Product: return activation * membership;
    }
    return 0.0;
}

/// Binary accumulation step. Sum is deliberately left unclamped.
inline Degree accumulate_step(Degree a, Degree b, AccumulationMethod method) {
    switch (method) {
    case AccumulationMethod::Max: return std::max(a, b);
    case AccumulationMethod::BoundedSum: return std::min(1.0, a + b);
    case AccumulationMethod::NormedSum: return (a + b) / std::max(1.0, a + b);
    case AccumulationMethod::Sum: return a + b;
    case AccumulationMethod::ProbOr: return a + b - a * b;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// FCL keywords. Lookup is case-insensitive; printing uses the upper-case form.

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::toupper(static_cast<unsigned char>(x)) ==
                      std::toupper(static_cast<unsigned char>(y));
           });
}

template <class E, std::size_t N>
constexpr std::string_view keyword_of(const std::array<std::pair<E, std::string_view>, N>& table,
                                      E value) {
    for (const auto& [e, k] : table)
        if (e == value) return k;
    return {};
}

template <class E, std::size_t N>
std::optional<E> lookup_keyword(const std::array<std::pair<E, std::string_view>, N>& table,
                                std::string_view word) {
    for (const auto& [e, k] : table)
        if (iequals(k, word)) return e;
    return std::nullopt;
}

inline constexpr std::array<std::pair<AndMethod, std::string_view>, 3> and_keywords{{
    {AndMethod::Min, "MIN"},
    {AndMethod::Prod, "PROD"},
    {AndMethod::BoundedDiff, "BDIF"},
}};

inline constexpr std::array<std::pair<OrMethod, std::string_view>, 3> or_keywords{{
    {OrMethod::Max, "MAX"},
    {OrMethod::ProbSum, "ASUM"},
    {OrMethod::BoundedSum, "BSUM"},
}};

inline constexpr std::array<std::pair<ImplicationMethod, std::string_view>, 2> act_keywords{{
    {ImplicationMethod::Min, "MIN"},
    {ImplicationMethod::Product, "PROD"},
}};

inline constexpr std::array<std::pair<AccumulationMethod, std::string_view>, 5> accu_keywords{{
    {AccumulationMethod::Max, "MAX"},
    {AccumulationMethod::BoundedSum, "BSUM"},
    {AccumulationMethod::NormedSum, "NSUM"},
    {AccumulationMethod::Sum, "SUM"},
    {AccumulationMethod::ProbOr, "PROBOR"},
}};

inline constexpr std::array<std::pair<DefuzzMethod, std::string_view>, 6> defuzz_keywords{{
    {DefuzzMethod::CenterOfGravity, "COG"},
    {DefuzzMethod::CenterOfGravitySingletons, "COGS"},
    {DefuzzMethod::CenterOfArea, "COA"},
    {DefuzzMethod::LeftMostMax, "LM"},
    {DefuzzMethod::RightMostMax, "RM"},
    {DefuzzMethod::MeanMax, "MM"},
}};

inline constexpr std::array<std::pair<Hedge, std::string_view>, 3> hedge_keywords{{
    {Hedge::Not, "NOT"},
    {Hedge::Somewhat, "SOMEWHAT"},
    {Hedge::Very, "VERY"},
}};

}  // namespace detail

constexpr std::string_view keyword(AndMethod m) { return detail::keyword_of(detail::and_keywords, m); }
constexpr std::string_view keyword(OrMethod m) { return detail::keyword_of(detail::or_keywords, m); }
constexpr std::string_view keyword(ImplicationMethod m) { return detail::keyword_of(detail::act_keywords, m); }
constexpr std::string_view keyword(AccumulationMethod m) { return detail::keyword_of(detail::accu_keywords, m); }
constexpr std::string_view keyword(DefuzzMethod m) { return detail::keyword_of(detail::defuzz_keywords, m); }
constexpr std::string_view keyword(Hedge h) { return detail::keyword_of(detail::hedge_keywords, h); }

inline std::optional<AndMethod> parse_and_method(std::string_view w) {
    return detail::lookup_keyword(detail::and_keywords, w);
}
inline std::optional<OrMethod> parse_or_method(std::string_view w) {
    return detail::lookup_keyword(detail::or_keywords, w);
}
inline std::optional<ImplicationMethod> parse_implication_method(std::string_view w) {
    // PRODUCT is the long spelling some engines emit
    if (detail::iequals(w, "PRODUCT")) return ImplicationMethod::Product;
    return detail::lookup_keyword(detail::act_keywords, w);
}
inline std::optional<AccumulationMethod> parse_accumulation_method(std::string_view w) {
    return detail::lookup_keyword(detail::accu_keywords, w);
}
inline std::optional<DefuzzMethod> parse_defuzz_method(std::string_view w) {
    return detail::lookup_keyword(detail::defuzz_keywords, w);
}
inline std::optional<Hedge> parse_hedge(std::string_view w) {
    return detail::lookup_keyword(detail::hedge_keywords, w);
}

}  // namespace fuzzy
