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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzy/operators.hpp"

namespace fuzzy {

struct Point {
    double x = 0.0;
    Degree mu = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Polygon through (x, mu) points. Outside the outermost points the first
/// and last degrees are held constant.
struct PiecewiseLinear {
    std::vector<Point> points;

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

/// Full membership at exactly one location, zero elsewhere.
struct Singleton {
    double x = 0.0;

    friend bool operator==(const Singleton&, const Singleton&) = default;
};

struct Triangular {
    double a = 0.0, b = 0.0, c = 0.0;

    friend bool operator==(const Triangular&, const Triangular&) = default;
};

struct Trapezoidal {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    friend bool operator==(const Trapezoidal&, const Trapezoidal&) = default;
};

struct Gaussian {
    double mean = 0.0, sigma = 1.0;

    friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct GeneralizedBell {
    double a = 1.0, b = 1.0, mean = 0.0;

    friend bool operator==(const GeneralizedBell&, const GeneralizedBell&) = default;
};

struct Sigmoidal {
    double gain = 1.0, center = 0.0;

    friend bool operator==(const Sigmoidal&, const Sigmoidal&) = default;
};

using MembershipFunction = std::variant<PiecewiseLinear, Singleton, Triangular, Trapezoidal,
                                        Gaussian, GeneralizedBell, Sigmoidal>;

namespace detail {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline Degree eval_polygon(const std::vector<Point>& pts, double x) {
    if (pts.empty()) return 0.0;
    if (x <= pts.front().x) return pts.front().mu;
    if (x >= pts.back().x) return pts.back().mu;
    auto hi = std::upper_bound(pts.begin(), pts.end(), x,
                               [](double v, const Point& p) { return v < p.x; });
    auto lo = hi - 1;
    if (x == lo->x) return lo->mu;
    double t = (x - lo->x) / (hi->x - lo->x);
    return lo->mu + t * (hi->mu - lo->mu);
}

}  // namespace detail

inline Degree eval_membership(const MembershipFunction& mf, double x) {
    using detail::overloaded;
    return std::visit(
        overloaded{
            [x](const PiecewiseLinear& s) { return detail::eval_polygon(s.points, x); },
            [x](const Singleton& s) { return x == s.x ? 1.0 : 0.0; },
            [x](const Triangular& s) {
                if (x < s.a || x > s.c) return 0.0;
                if (x == s.b) return 1.0;
                if (x < s.b) return (x - s.a) / (s.b - s.a);
                return (s.c - x) / (s.c - s.b);
            },
            [x](const Trapezoidal& s) {
                if (x < s.a || x > s.d) return 0.0;
                if (x >= s.b && x <= s.c) return 1.0;
                if (x < s.b) return (x - s.a) / (s.b - s.a);
                return (s.d - x) / (s.d - s.c);
            },
            [x](const Gaussian& s) {
                double z = (x - s.mean) / s.sigma;
                return std::exp(-0.5 * z * z);
            },
            [x](const GeneralizedBell& s) {
                return 1.0 / (1.0 + std::pow(std::abs((x - s.mean) / s.a), 2.0 * s.b));
            },
            [x](const Sigmoidal& s) { return 1.0 / (1.0 + std::exp(-s.gain * (x - s.center))); },
        },
        mf);
}

/// Checks shape invariants; returns a message describing the first violation.
inline std::optional<std::string> validate(const MembershipFunction& mf) {
    using detail::overloaded;
    auto finite = [](auto... v) { return (std::isfinite(v) && ...); };
    return std::visit(
        overloaded{
            [&](const PiecewiseLinear& s) -> std::optional<std::string> {
                if (s.points.empty()) return "point list is empty";
                for (std::size_t i = 0; i < s.points.size(); ++i) {
                    const auto& p = s.points[i];
                    if (!finite(p.x, p.mu)) return "point coordinates must be finite";
                    if (p.mu < 0.0 || p.mu > 1.0) return "membership degree outside [0, 1]";
                    if (i > 0 && !(s.points[i - 1].x < p.x))
                        return "point x-coordinates must be strictly increasing";
                }
                return std::nullopt;
            },
            [&](const Singleton& s) -> std::optional<std::string> {
                if (!finite(s.x)) return "singleton location must be finite";
                return std::nullopt;
            },
            [&](const Triangular& s) -> std::optional<std::string> {
                if (!finite(s.a, s.b, s.c)) return "triangle parameters must be finite";
                if (!(s.a <= s.b && s.b <= s.c)) return "triangle requires a <= b <= c";
                if (s.a == s.c) return "triangle has zero width";
                return std::nullopt;
            },
            [&](const Trapezoidal& s) -> std::optional<std::string> {
                if (!finite(s.a, s.b, s.c, s.d)) return "trapezoid parameters must be finite";
                if (!(s.a <= s.b && s.b <= s.c && s.c <= s.d))
                    return "trapezoid requires a <= b <= c <= d";
                if (s.a == s.d) return "trapezoid has zero width";
                return std::nullopt;
            },
            [&](const Gaussian& s) -> std::optional<std::string> {
                if (!finite(s.mean, s.sigma)) return "gaussian parameters must be finite";
                if (!(s.sigma > 0.0)) return "gaussian sigma must be positive";
                return std::nullopt;
            },
            [&](const GeneralizedBell& s) -> std::optional<std::string> {
                if (!finite(s.a, s.b, s.mean)) return "bell parameters must be finite";
                if (s.a == 0.0) return "bell width must be non-zero";
                if (!(s.b > 0.0)) return "bell slope must be positive";
                return std::nullopt;
            },
            [&](const Sigmoidal& s) -> std::optional<std::string> {
                if (!finite(s.gain, s.center)) return "sigmoid parameters must be finite";
                return std::nullopt;
            },
        },
        mf);
}

inline bool is_singleton(const MembershipFunction& mf) {
    return std::holds_alternative<Singleton>(mf);
}

/// Smallest and largest x-coordinate that the shape's parameters name
/// (polygon knots, triangle corners, centres). Declared ranges must cover it.
inline std::pair<double, double> anchor_span(const MembershipFunction& mf) {
    using detail::overloaded;
    using span_t = std::pair<double, double>;
    return std::visit(
        overloaded{
            [](const PiecewiseLinear& s) -> span_t {
                if (s.points.empty()) return {0.0, 0.0};
                return {s.points.front().x, s.points.back().x};
            },
            [](const Singleton& s) -> span_t { return {s.x, s.x}; },
            [](const Triangular& s) -> span_t { return {s.a, s.c}; },
            [](const Trapezoidal& s) -> span_t { return {s.a, s.d}; },
            [](const Gaussian& s) -> span_t { return {s.mean, s.mean}; },
            [](const GeneralizedBell& s) -> span_t { return {s.mean, s.mean}; },
            [](const Sigmoidal& s) -> span_t { return {s.center, s.center}; },
        },
        mf);
}

/// Interval used when a universe has to be derived from the terms. Equal to
/// anchor_span() for bounded shapes; smooth shapes extend over their
/// significant tails.
inline std::pair<double, double> derived_extent(const MembershipFunction& mf) {
    using detail::overloaded;
    using span_t = std::pair<double, double>;
    return std::visit(
        overloaded{
            [](const Gaussian& s) -> span_t {
                return {s.mean - 4.0 * s.sigma, s.mean + 4.0 * s.sigma};
            },
            [](const GeneralizedBell& s) -> span_t {
                double w = 4.0 * std::abs(s.a);
                return {s.mean - w, s.mean + w};
            },
            [](const Sigmoidal& s) -> span_t {
                if (s.gain == 0.0) return {s.center, s.center};
                double w = 6.0 / std::abs(s.gain);
                return {s.center - w, s.center + w};
            },
            [&mf](const auto&) -> span_t { return anchor_span(mf); },
        },
        mf);
}

/// x-coordinates where the shape has a corner or a peak. Together with the
/// universe ends they contain a point of maximal degree.
inline std::vector<double> knots(const MembershipFunction& mf) {
    using detail::overloaded;
    return std::visit(
        overloaded{
            [](const PiecewiseLinear& s) {
                std::vector<double> xs;
                for (const auto& p : s.points) xs.push_back(p.x);
                return xs;
            },
            [](const Singleton& s) { return std::vector<double>{s.x}; },
            [](const Triangular& s) { return std::vector<double>{s.a, s.b, s.c}; },
            [](const Trapezoidal& s) { return std::vector<double>{s.a, s.b, s.c, s.d}; },
            [](const Gaussian& s) { return std::vector<double>{s.mean}; },
            [](const GeneralizedBell& s) { return std::vector<double>{s.mean}; },
            [](const Sigmoidal& s) { return std::vector<double>{s.center}; },
        },
        mf);
}

}  // namespace fuzzy
