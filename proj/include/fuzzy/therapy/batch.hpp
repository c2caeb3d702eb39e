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
#include <charconv>
#include <cmath>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fuzzy/engine.hpp"
#include "fuzzy/fcl.hpp"
#include "fuzzy/rulebase.hpp"
#include "fuzzy/therapy/csv.hpp"

namespace fuzzy::therapy {

inline constexpr std::string_view case_id_column = "case_id";
inline constexpr std::string_view expected_column = "expected_sessions";
inline constexpr std::string_view session_output = "weekly_session_number";

// ---------------------------------------------------------------------------
// Knowledge base loading

/// The knowledge base failed to parse or link; carries the diagnostics.
class kb_error : public std::runtime_error {
public:
    explicit kb_error(std::vector<fcl::Diagnostic> diags)
        : std::runtime_error(diags.empty() ? std::string("invalid knowledge base") : fcl::to_string(diags.front())),
          diagnostics_(std::move(diags)) {}

    const std::vector<fcl::Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<fcl::Diagnostic> diagnostics_;
};

/// Loads one or more FCL files as a single rule base (one file per concern
/// is allowed). Throws fcl::io_error for unreadable files and kb_error for
/// parse or link errors.
inline RuleBase load_kb(std::span<const std::filesystem::path> paths) {
    auto result = fcl::parse_fcl_files(paths);
    if (!result.ok()) throw kb_error(std::move(result.diagnostics));
    return std::move(*result.rulebase);
}

inline RuleBase load_kb(const std::filesystem::path& path) { return load_kb(std::span(&path, 1)); }

// ---------------------------------------------------------------------------
// Case files

/// One assessed child. Values are keyed by input variable name, so the
/// shipped columns (speech_problems_level, child_age, family_implication)
/// and any extension variables load the same way.
struct ChildCase {
    std::string id;
    Inputs values;
    std::optional<int> expected_sessions;
    std::string error;  // set when the row itself is malformed
    std::size_t line = 0;
};

class case_file_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<int> parse_int(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

/// Reads a case CSV: header `case_id,<input>...[,expected_sessions]`. Empty
/// cells mean "missing"; malformed cells flag the row. Throws
/// case_file_error when the header is unusable.
inline std::vector<ChildCase> read_cases(std::istream& in) {
    auto rows = csv::read(in);
    if (rows.empty()) throw case_file_error("case file has no header");
    const auto& header = rows.front().fields;
    if (header.empty() || header.front() != case_id_column)
        throw case_file_error("case file header must start with '" + std::string(case_id_column) + "'");
    for (std::size_t i = 0; i < header.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (header[i] == header[j]) throw case_file_error("duplicate column '" + header[i] + "'");

    std::vector<ChildCase> cases;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        ChildCase c;
        c.line = row.line;
        c.id = row.fields.empty() ? std::string{} : row.fields.front();
        if (row.fields.size() != header.size()) {
            c.error = "expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(row.fields.size());
            cases.push_back(std::move(c));
            continue;
        }
        for (std::size_t i = 1; i < header.size(); ++i) {
            const auto& cell = row.fields[i];
            if (cell.empty()) continue;
            if (header[i] == expected_column) {
                c.expected_sessions = detail::parse_int(cell);
                if (!c.expected_sessions && c.error.empty())
                    c.error = "invalid integer for " + header[i] + ": '" + cell + "'";
                continue;
            }
            if (auto v = detail::parse_real(cell)) {
                c.values[header[i]] = *v;
            } else if (c.error.empty()) {
                c.error = "invalid number for " + header[i] + ": '" + cell + "'";
            }
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

// ---------------------------------------------------------------------------
// Recommendations

struct Recommendation {
    std::string case_id;
    std::optional<double> crisp;
    std::optional<int> sessions;
    bool evaluated = false;  // inference ran; `fired` is meaningful
    bool fired = false;
    std::string dominant_rule;  // rule with the highest activation, empty if none fired
    Degree dominant_activation = 0.0;
    std::vector<TraceEntry> trace;
    std::vector<std::string> warnings;
    std::string error;

    bool ok() const { return error.empty(); }
};

/// Whole sessions: round half up, at least one when any rule fired.
inline int discrete_sessions(double crisp, bool fired) {
    int n = static_cast<int>(std::floor(crisp + 0.5));
    return fired ? std::max(1, n) : n;
}

struct BatchOptions {
    /// output variable to recommend on; empty picks weekly_session_number,
    /// or the first output when the KB has no such variable
    std::string output;
    std::size_t samples = default_samples;
    unsigned threads = 1;
};

inline std::size_t recommended_output(const RuleBase& rb, std::string_view requested) {
    if (!requested.empty()) {
        auto idx = rb.find_output(requested);
        if (!idx) throw std::invalid_argument("unknown output variable '" + std::string(requested) + "'");
        return *idx;
    }
    return rb.find_output(session_output).value_or(0);
}

inline Recommendation recommend(const RuleBase& rb, const ChildCase& c, std::size_t output,
                                std::size_t samples = default_samples) {
    Recommendation rec;
    rec.case_id = c.id;
    if (!c.error.empty()) {
        rec.error = c.error;
        return rec;
    }
    for (const auto& var : rb.inputs()) {
        auto it = c.values.find(var.name);
        if (it == c.values.end()) continue;
        if (it->second < var.universe.lo || it->second > var.universe.hi)
            rec.warnings.push_back(var.name + "=" + format_number(it->second) + " outside universe [" +
                                   format_number(var.universe.lo) + ", " + format_number(var.universe.hi) + "]");
    }
    try {
        auto ctx = infer(rb, c.values, InferenceOptions{samples});
        const auto& out = ctx.outputs[output];
        const auto& name = rb.outputs()[output].name;
        for (auto& t : ctx.trace) {
            if (t.output != name) continue;
            if (t.activation > rec.dominant_activation) {
                rec.dominant_activation = t.activation;
                rec.dominant_rule = t.rule;
            }
            rec.trace.push_back(std::move(t));
        }
        rec.evaluated = true;
        rec.fired = out.fired;
        if (!out.crisp) {
            rec.error = out.error;
            return rec;
        }
        rec.crisp = out.crisp;
        rec.sessions = discrete_sessions(*out.crisp, out.fired);
    } catch (const evaluation_error& e) {
        rec.error = e.what();
    }
    return rec;
}

/// One recommendation per case, in input order. Rows are independent, so
/// they may be spread over several threads.
inline std::vector<Recommendation> run_batch(const RuleBase& rb, std::span<const ChildCase> cases,
                                             const BatchOptions& options = {}) {
    const std::size_t output = recommended_output(rb, options.output);
    std::vector<Recommendation> recs(cases.size());
    const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, cases.size()));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) recs[i] = recommend(rb, cases[i], output, options.samples);
    };
    if (workers == 1) {
        work(0, cases.size());
        return recs;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (cases.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < cases.size(); begin += chunk)
        pool.emplace_back(work, begin, std::min(cases.size(), begin + chunk));
    pool.clear();  // joins
    return recs;
}

inline void write_recommendations(std::ostream& out, std::span<const Recommendation> recs,
                                  std::string_view output_name) {
    csv::write_row(out, {std::string(case_id_column), std::string(output_name), "sessions", "fired",
                         "dominant_rule", "error"});
    for (const auto& r : recs) {
        csv::write_row(out, {r.case_id, r.crisp ? format_number(*r.crisp) : std::string{},
                             r.sessions ? std::to_string(*r.sessions) : std::string{},
                             r.evaluated ? (r.fired ? "true" : "false") : std::string{}, r.dominant_rule,
                             r.error});
    }
}

// ---------------------------------------------------------------------------
// Validation against therapist expectations

struct ValidationRow {
    std::string case_id;
    int expected = 0;
    std::optional<int> actual;
    bool match = false;
    std::string dominant_rule;
    Degree dominant_activation = 0.0;
    std::vector<TraceEntry> trace;
    std::string error;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    std::size_t matches = 0;
    std::size_t mismatches = 0;
};

/// Compares recommendations with the expected session counts. Cases
/// without an expectation are left out of the report.
inline ValidationReport validate_against_expected(std::span<const Recommendation> recs,
                                                  std::span<const ChildCase> cases) {
    if (recs.size() != cases.size()) throw std::invalid_argument("recommendations and cases differ in length");
    ValidationReport report;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (!cases[i].expected_sessions) continue;
        const auto& r = recs[i];
        ValidationRow row{cases[i].id, *cases[i].expected_sessions, r.sessions, false, r.dominant_rule,
                          r.dominant_activation, r.trace, r.error};
        row.match = r.sessions && *r.sessions == row.expected;
        ++(row.match ? report.matches : report.mismatches);
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline std::string trace_summary(std::span<const TraceEntry> trace) {
    std::string out;
    for (const auto& t : trace) {
        if (!out.empty()) out += ';';
        out += t.rule + "=" + format_number(t.activation);
    }
    return out;
}

inline void write_report_csv(std::ostream& out, const ValidationReport& report) {
    csv::write_row(out, {std::string(case_id_column), std::string(expected_column), "sessions", "status",
                         "dominant_rule", "dominant_activation", "trace", "error"});
    for (const auto& r : report.rows) {
        csv::write_row(out, {r.case_id, std::to_string(r.expected),
                             r.actual ? std::to_string(*r.actual) : std::string{}, r.match ? "match" : "mismatch",
                             r.dominant_rule, format_number(r.dominant_activation), trace_summary(r.trace),
                             r.error});
    }
}

inline void write_report_text(std::ostream& out, const ValidationReport& report) {
    out << "validated " << report.rows.size() << " case(s): " << report.matches << " match, "
        << report.mismatches << " mismatch\n";
    for (const auto& r : report.rows) {
        if (r.match) continue;
        out << "  " << r.case_id << ": expected " << r.expected << ", got "
            << (r.actual ? std::to_string(*r.actual) : std::string("none"));
        if (!r.dominant_rule.empty())
            out << " (dominant rule " << r.dominant_rule << " at " << format_number(r.dominant_activation) << ")";
        if (!r.error.empty()) out << " [" << r.error << "]";
        out << '\n';
    }
}

}  // namespace fuzzy::therapy
