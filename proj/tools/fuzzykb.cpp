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
// fuzzykb: lint, evaluate, batch-score and plot FCL knowledge bases.
//
// Exit codes: 0 success, 1 domain or validation error, 2 I/O or usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzy/fuzzy.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_domain = 1;
constexpr int exit_io = 2;

/// Failure carrying the exit code it should map to.
struct cli_failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw cli_failure{code, std::move(message)}; }

void print_diagnostics(const std::vector<fuzzy::fcl::Diagnostic>& diags) {
    for (const auto& d : diags) std::cerr << fuzzy::fcl::to_string(d) << '\n';
}

fuzzy::RuleBase load(const std::vector<std::string>& files) {
    std::vector<fs::path> paths(files.begin(), files.end());
    try {
        return fuzzy::therapy::load_kb(paths);
    } catch (const fuzzy::fcl::io_error& e) {
        fail(exit_io, e.what());
    } catch (const fuzzy::therapy::kb_error& e) {
        print_diagnostics(e.diagnostics());
        fail(exit_domain, "knowledge base has errors");
    }
}

fuzzy::Inputs parse_assignments(const std::vector<std::string>& sets) {
    fuzzy::Inputs inputs;
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) fail(exit_io, "--set expects name=value, got '" + s + "'");
        std::string name = s.substr(0, eq);
        auto value = fuzzy::therapy::detail::parse_real(std::string_view(s).substr(eq + 1));
        if (!value) fail(exit_io, "--set " + name + ": '" + s.substr(eq + 1) + "' is not a number");
        inputs[name] = *value;
    }
    return inputs;
}

/// Writes to the named file, or to stdout when the name is empty.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) fail(exit_io, path + ": cannot open for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// lint

int cmd_lint(const std::vector<std::string>& files) {
    std::vector<fs::path> paths(files.begin(), files.end());
    fuzzy::fcl::ParseResult result;
    try {
        result = fuzzy::fcl::parse_fcl_files(paths);
    } catch (const fuzzy::fcl::io_error& e) {
        fail(exit_io, e.what());
    }
    print_diagnostics(result.diagnostics);
    if (!result.ok()) return exit_domain;
    const auto& rb = *result.rulebase;
    std::cout << "ok: " << rb.inputs().size() << " input(s), " << rb.outputs().size() << " output(s), "
              << rb.rule_count() << " rule(s)\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// eval

json eval_json(const fuzzy::RuleBase& rb, const fuzzy::EvaluationContext& ctx) {
    json doc;
    doc["knowledge_base"] = rb.name();
    json inputs = json::object();
    for (const auto& f : ctx.fuzzified) inputs[f.variable] = f.crisp;
    doc["inputs"] = inputs;

    json fuzzified = json::array();
    for (const auto& f : ctx.fuzzified) {
        json degrees = json::object();
        for (const auto& [term, d] : f.degrees) degrees[term] = d;
        fuzzified.push_back({{"variable", f.variable}, {"crisp", f.crisp}, {"degrees", degrees}});
    }
    doc["fuzzified"] = fuzzified;

    json rules = json::array();
    for (const auto& t : ctx.trace)
        rules.push_back({{"block", t.block}, {"rule", t.rule}, {"activation", t.activation}, {"output", t.output},
                         {"term", t.term}});
    doc["rules"] = rules;

    json outputs = json::array();
    for (std::size_t o = 0; o < ctx.outputs.size(); ++o) {
        const auto& r = ctx.outputs[o];
        json acts = json::object();
        for (const auto& term : rb.outputs()[o].terms) acts[term.name] = r.aggregate.term_activation(term.name);
        json entry{{"variable", r.aggregate.variable()}, {"fired", r.fired}, {"activations", acts}};
        entry["crisp"] = r.crisp ? json(*r.crisp) : json(nullptr);
        entry["sessions"] = r.crisp ? json(fuzzy::therapy::discrete_sessions(*r.crisp, r.fired)) : json(nullptr);
        entry["error"] = r.error.empty() ? json(nullptr) : json(r.error);
        outputs.push_back(std::move(entry));
    }
    doc["outputs"] = outputs;
    return doc;
}

void eval_text(std::ostream& out, const fuzzy::RuleBase& rb, const fuzzy::EvaluationContext& ctx) {
    for (const auto& f : ctx.fuzzified) {
        out << "input " << f.variable << " = " << fuzzy::format_number(f.crisp) << '\n';
        for (const auto& [term, d] : f.degrees) out << "  " << term << ' ' << fixed2(d) << '\n';
    }
    out << "rules\n";
    for (const auto& t : ctx.trace)
        out << "  " << t.block << '/' << t.rule << ' ' << fixed2(t.activation) << " -> " << t.output << " IS "
            << t.term << '\n';
    for (std::size_t o = 0; o < ctx.outputs.size(); ++o) {
        const auto& r = ctx.outputs[o];
        out << "output " << r.aggregate.variable() << '\n';
        for (const auto& term : rb.outputs()[o].terms)
            out << "  " << term.name << ' ' << fixed2(r.aggregate.term_activation(term.name)) << '\n';
        out << "  fired " << (r.fired ? "true" : "false") << '\n';
        if (r.crisp) {
            out << "  crisp " << fuzzy::format_number(*r.crisp) << '\n';
            out << "  sessions " << fuzzy::therapy::discrete_sessions(*r.crisp, r.fired) << '\n';
        } else {
            out << "  error " << r.error << '\n';
        }
    }
}

void eval_csv(std::ostream& out, const fuzzy::RuleBase& rb, const fuzzy::EvaluationContext& ctx) {
    using fuzzy::format_number;
    using fuzzy::therapy::csv::write_row;
    write_row(out, {"kind", "block", "rule", "variable", "term", "value"});
    for (const auto& f : ctx.fuzzified)
        for (const auto& [term, d] : f.degrees) write_row(out, {"degree", "", "", f.variable, term, format_number(d)});
    for (const auto& t : ctx.trace)
        write_row(out, {"rule", t.block, t.rule, t.output, t.term, format_number(t.activation)});
    for (std::size_t o = 0; o < ctx.outputs.size(); ++o) {
        const auto& r = ctx.outputs[o];
        const auto& name = r.aggregate.variable();
        for (const auto& term : rb.outputs()[o].terms)
            write_row(out, {"activation", "", "", name, term.name, format_number(r.aggregate.term_activation(term.name))});
        write_row(out, {"fired", "", "", name, "", r.fired ? "true" : "false"});
        if (r.crisp) write_row(out, {"crisp", "", "", name, "", format_number(*r.crisp)});
        else write_row(out, {"error", "", "", name, "", r.error});
    }
}

struct EvalArgs {
    std::vector<std::string> files;
    std::vector<std::string> sets;
    std::string format = "text";
    std::size_t samples = fuzzy::default_samples;
    std::string out;
};

int cmd_eval(const EvalArgs& args) {
    auto rb = load(args.files);
    auto inputs = parse_assignments(args.sets);
    fuzzy::EvaluationContext ctx;
    try {
        ctx = fuzzy::infer(rb, inputs, {args.samples});
    } catch (const fuzzy::evaluation_error& e) {
        fail(exit_domain, e.what());
    }
    Sink sink(args.out);
    auto& out = sink.stream();
    if (args.format == "json") out << eval_json(rb, ctx).dump(2) << '\n';
    else if (args.format == "csv") eval_csv(out, rb, ctx);
    else eval_text(out, rb, ctx);
    out.flush();

    int code = exit_ok;
    for (const auto& r : ctx.outputs) {
        if (r.crisp) continue;
        std::cerr << "error: " << r.error << '\n';
        code = exit_domain;
    }
    return code;
}

// ---------------------------------------------------------------------------
// batch

struct BatchArgs {
    std::vector<std::string> files;
    std::string cases;
    std::string out;
    std::string report;
    std::string output;
    unsigned threads = 1;
    std::size_t samples = fuzzy::default_samples;
};

int cmd_batch(const BatchArgs& args) {
    namespace th = fuzzy::therapy;
    auto rb = load(args.files);

    std::ifstream in(args.cases, std::ios::binary);
    if (!fs::is_regular_file(args.cases) || !in) fail(exit_io, args.cases + ": file not found");
    std::vector<th::ChildCase> cases;
    try {
        cases = th::read_cases(in);
    } catch (const th::case_file_error& e) {
        fail(exit_io, args.cases + ": " + e.what());
    }

    th::BatchOptions options{args.output, args.samples, args.threads};
    std::vector<th::Recommendation> recs;
    try {
        recs = th::run_batch(rb, cases, options);
    } catch (const std::invalid_argument& e) {
        fail(exit_domain, e.what());
    }
    const auto& output_name = rb.outputs()[th::recommended_output(rb, args.output)].name;

    Sink sink(args.out);
    th::write_recommendations(sink.stream(), recs, output_name);
    sink.stream().flush();

    int code = exit_ok;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        for (const auto& w : recs[i].warnings)
            std::cerr << args.cases << ':' << cases[i].line << ": warning: " << recs[i].case_id << ": " << w << '\n';
        if (!recs[i].ok()) {
            std::cerr << args.cases << ':' << cases[i].line << ": error: " << recs[i].case_id << ": "
                      << recs[i].error << '\n';
            code = exit_domain;
        }
    }

    auto report = th::validate_against_expected(recs, cases);
    if (!args.report.empty()) {
        Sink rs(args.report);
        th::write_report_csv(rs.stream(), report);
    }
    if (!report.rows.empty()) th::write_report_text(std::cerr, report);
    return code;
}

// ---------------------------------------------------------------------------
// plot

struct PlotArgs {
    std::vector<std::string> files;
    std::string var;
    std::size_t samples = 101;
    bool aggregate = false;
    std::vector<std::string> sets;
    std::size_t defuzz_samples = fuzzy::default_samples;
    std::string out;
};

int cmd_plot(const PlotArgs& args) {
    auto rb = load(args.files);
    const fuzzy::LinguisticVariable* var = nullptr;
    std::optional<std::size_t> output_index;
    if (auto i = rb.find_input(args.var)) var = &rb.inputs()[*i];
    if (auto o = rb.find_output(args.var)) {
        var = &rb.outputs()[*o];
        output_index = o;
    }
    if (!var) fail(exit_domain, "unknown variable '" + args.var + "'");

    std::optional<fuzzy::AggregatedOutput> aggregate;
    if (args.aggregate) {
        if (!output_index) fail(exit_domain, "--aggregate needs an output variable, '" + args.var + "' is an input");
        try {
            auto ctx = fuzzy::infer(rb, parse_assignments(args.sets), {args.defuzz_samples});
            aggregate = ctx.outputs[*output_index].aggregate;
        } catch (const fuzzy::evaluation_error& e) {
            fail(exit_domain, e.what());
        }
    } else if (!args.sets.empty()) {
        fail(exit_io, "--set is only used with --aggregate");
    }

    Sink sink(args.out);
    auto& out = sink.stream();
    std::vector<std::string> header{"x"};
    for (const auto& t : var->terms) header.push_back(t.name);
    if (aggregate) header.push_back("aggregate");
    fuzzy::therapy::csv::write_row(out, header);

    const auto [lo, hi] = var->universe;
    const double step = (hi - lo) / static_cast<double>(args.samples - 1);
    for (std::size_t i = 0; i < args.samples; ++i) {
        double x = i + 1 == args.samples ? hi : lo + step * static_cast<double>(i);
        std::vector<std::string> row{fuzzy::format_number(x)};
        for (const auto& t : var->terms) row.push_back(fuzzy::format_number(fuzzy::eval_membership(t.shape, x)));
        if (aggregate) row.push_back(fuzzy::format_number(aggregate->membership(x)));
        fuzzy::therapy::csv::write_row(out, row);
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy Control Language knowledge bases: lint, evaluate, batch-score and plot"};
    app.require_subcommand(1);

    std::vector<std::string> lint_files;
    auto* lint = app.add_subcommand("lint", "Parse and link FCL files, reporting diagnostics");
    lint->add_option("files", lint_files, "FCL files forming one knowledge base")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate one case and print the inference trace");
    eval->add_option("files", eval_args.files, "FCL files forming one knowledge base")->required();
    eval->add_option("--set", eval_args.sets, "Input assignment name=value")->allow_extra_args(false);
    eval->add_option("--format", eval_args.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    eval->add_option("--defuzz-samples", eval_args.samples, "Defuzzification grid size")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}))
        ->capture_default_str();
    eval->add_option("-o,--output", eval_args.out, "Write to this file instead of stdout");

    BatchArgs batch_args;
    auto* batch = app.add_subcommand("batch", "Score every case of a CSV file");
    batch->add_option("files", batch_args.files, "FCL files forming one knowledge base")->required();
    batch->add_option("--cases", batch_args.cases, "Case CSV (case_id,<inputs>...[,expected_sessions])")->required();
    batch->add_option("--out", batch_args.out, "Recommendation CSV (default stdout)");
    batch->add_option("--report", batch_args.report, "Validation report CSV");
    batch->add_option("--output-var", batch_args.output, "Output variable to recommend on");
    batch->add_option("--threads", batch_args.threads, "Worker threads")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    batch->add_option("--defuzz-samples", batch_args.samples, "Defuzzification grid size")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}))
        ->capture_default_str();

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Export membership curves as CSV");
    plot->add_option("files", plot_args.files, "FCL files forming one knowledge base")->required();
    plot->add_option("--var", plot_args.var, "Variable to sample")->required();
    plot->add_option("--samples", plot_args.samples, "Number of x positions")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}))
        ->capture_default_str();
    plot->add_flag("--aggregate", plot_args.aggregate, "Add the aggregated output curve for the --set inputs");
    plot->add_option("--set", plot_args.sets, "Input assignment name=value")->allow_extra_args(false);
    plot->add_option("--defuzz-samples", plot_args.defuzz_samples, "Defuzzification grid size")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}))
        ->capture_default_str();
    plot->add_option("-o,--output", plot_args.out, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_io;
    }

    try {
        if (lint->parsed()) return cmd_lint(lint_files);
        if (eval->parsed()) return cmd_eval(eval_args);
        if (batch->parsed()) return cmd_batch(batch_args);
        if (plot->parsed()) return cmd_plot(plot_args);
    } catch (const cli_failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    }
    return exit_io;
}
