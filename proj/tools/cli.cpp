#include "cli.hpp"

#include "arw/errors.hpp"
#include "arw/ingest_io.hpp"
#include "arw/report.hpp"
#include "arw/selection.hpp"
#include "arw/synthetic.hpp"
#include "arw/window_stats.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace arw::cli {

namespace {

struct CommonOptions {
    double delta_prime = 0.1;
    double range_width = 0.0;
    std::string tie_break = "smallest_k";
    std::string output;
    std::string format = "csv";

    ArwConfig config() const {
        ArwConfig c;
        c.delta_prime = delta_prime;
        c.range_width = range_width;
        c.tie_break = tie_break == "largest_k" ? TieBreak::largest_k : TieBreak::smallest_k;
        return c;
    }
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(s, &used);
            if (used != s.size()) return "not a number: " + s;
        } catch (const std::exception&) {
            return "not a number: " + s;
        }
        if (!(v > 0.0 && v < 1.0)) return "must lie strictly between 0 and 1";
        return {};
    },
    "in (0,1)");

void add_common(CLI::App* sub, CommonOptions& opts) {
    sub->option_defaults()->always_capture_default();
    sub->add_option("--delta-prime", opts.delta_prime, "Confidence parameter delta'")
        ->check(kOpenUnit)
        ->capture_default_str();
    sub->add_option("--range-width", opts.range_width,
                    "Loss range width M used by psi (0 drops the range term)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--tie-break", opts.tie_break, "Window tie-break: smallest_k or largest_k")
        ->check(CLI::IsMember({"smallest_k", "largest_k"}))
        ->capture_default_str();
    sub->add_option("--output", opts.output, "Write the machine-readable report to this file");
    sub->add_option("--format", opts.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << v;
    return ss.str();
}

void print_diagnostics(std::ostream& out, const WindowDiagnostics& diag) {
    out << std::setw(6) << "k" << std::setw(8) << "B" << std::setw(14) << "mean"
        << std::setw(14) << "var" << std::setw(14) << "psi" << std::setw(14) << "phi"
        << std::setw(14) << "objective" << "\n";
    for (const auto& w : diag.windows) {
        out << std::setw(6) << w.k << std::setw(8) << w.pooled_count << std::setw(14)
            << fmt(w.pooled_mean) << std::setw(14) << fmt(w.pooled_var) << std::setw(14)
            << fmt(w.psi) << std::setw(14) << fmt(w.phi) << std::setw(14) << fmt(w.objective)
            << (w.k == diag.chosen_k ? "  *" : "") << "\n";
    }
}

void emit(const Report& report, const CommonOptions& opts, std::ostream& out) {
    if (opts.output.empty()) return;
    write_report(report, opts.output, parse_format(opts.format));
    out << "report written to " << opts.output << "\n";
}

std::size_t model_by_name(const LossTable& table, const std::string& name) {
    const auto r = table.find_model(name);
    if (!r) throw DataError("model '" + name + "' not found in loss table");
    return *r;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive rolling-window model assessment and selection under temporal shift",
                 "arw"};
    app.require_subcommand(1);

    // assess
    CommonOptions assess_opts;
    std::string assess_samples;
    std::string assess_losses;
    std::string assess_model_name;
    auto* assess = app.add_subcommand(
        "assess", "Estimate the current-period mean of a sample stream or of one model's losses");
    add_common(assess, assess_opts);
    auto* samples_opt = assess->add_option("--samples", assess_samples,
                                           "CSV with header period,value");
    auto* losses_opt = assess->add_option("--losses", assess_losses,
                                          "CSV with header period,sample,model,loss");
    auto* model_opt = assess->add_option("--model", assess_model_name,
                                         "Model to assess (with --losses)");
    samples_opt->excludes(losses_opt);
    losses_opt->needs(model_opt);
    model_opt->needs(losses_opt);

    // compare
    CommonOptions compare_opts;
    std::string compare_losses;
    std::vector<std::string> compare_models;
    auto* compare = app.add_subcommand("compare", "Compare two models on their loss difference");
    add_common(compare, compare_opts);
    compare->add_option("--losses", compare_losses, "CSV with header period,sample,model,loss")
        ->required();
    compare->add_option("--models", compare_models, "Two model names, e.g. A,B")
        ->required()
        ->delimiter(',')
        ->expected(2);

    // select
    CommonOptions select_opts;
    std::string select_losses;
    auto* select = app.add_subcommand("select", "Single-elimination tournament over all models");
    add_common(select, select_opts);
    select->add_option("--losses", select_losses, "CSV with header period,sample,model,loss")
        ->required();

    // baseline
    CommonOptions baseline_opts;
    std::string baseline_losses;
    std::size_t baseline_window = 1;
    auto* baseline = app.add_subcommand(
        "baseline", "Pick the model with the lowest mean loss over a fixed look-back window");
    baseline->add_option("--output", baseline_opts.output,
                         "Write the machine-readable report to this file");
    baseline->add_option("--format", baseline_opts.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    baseline->add_option("--losses", baseline_losses, "CSV with header period,sample,model,loss")
        ->required();
    baseline->add_option("--window", baseline_window, "Look-back window k (periods)")
        ->required()
        ->check(CLI::PositiveNumber);

    // simulate
    CommonOptions sim_opts;
    ScenarioConfig sim;
    std::string scenario_name = "stationary";
    std::string trace_path;
    std::vector<std::size_t> boundaries;
    auto* simulate = app.add_subcommand(
        "simulate", "Run the synthetic model-selection experiment and report mean excess risks");
    add_common(simulate, sim_opts);
    simulate->add_option("--scenario", scenario_name,
                         "stationary, composite, changepoint or drift")
        ->check(CLI::IsMember({"stationary", "composite", "changepoint", "drift"}))
        ->capture_default_str();
    simulate->add_option("--sigma2", sim.sigma2, "Noise variance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--trials", sim.trials, "Independent trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--windows", sim.window_menu, "Ascending window menu, e.g. 1,4,16")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--horizon", sim.horizon, "Number of periods T")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--mu0", sim.mu0, "Mean level of the stationary scenario")
        ->capture_default_str();
    simulate->add_option("--shift-size", sim.changepoint.after,
                         "Post-shift mean of the changepoint scenario (pre-shift mean is 0)")
        ->capture_default_str();
    simulate->add_option("--shift-lag", sim.changepoint.lag,
                         "Periods since the change point at the horizon")
        ->capture_default_str();
    simulate->add_option("--drift-step", sim.drift.step,
                         "Per-period +-step of the drift scenario")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate->add_option("--boundaries", boundaries,
                         "Composite segment ends, three periods (default T/4,T/2,3T/4)")
        ->delimiter(',')
        ->expected(3);
    simulate->add_option("--start-level", sim.composite.start_level,
                         "Composite: initial mean level")
        ->capture_default_str();
    simulate->add_option("--shift-every", sim.composite.shift_every,
                         "Composite: periods between jumps in the first segment")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--jumps", sim.composite.jumps,
                         "Composite: jump sizes, applied cyclically")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--amplitude", sim.composite.amplitude, "Composite: sinusoid amplitude")
        ->capture_default_str();
    simulate->add_option("--sine-period", sim.composite.sine_period,
                         "Composite: sinusoid period in periods")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--walk-step", sim.composite.walk_step,
                         "Composite: random-walk step of the last segment")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    simulate->add_option("--trace", trace_path,
                         "Also write per-period mean excess risks (plot-ready) to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (assess->parsed()) {
            const auto config = assess_opts.config();
            config.validate();
            Assessment result;
            if (!assess_samples.empty()) {
                const auto series = read_samples(assess_samples);
                result.diagnostics = select_window(series, config);
                result.estimate = result.diagnostics.estimate;
            } else if (!assess_losses.empty()) {
                const auto table = read_losses(assess_losses);
                result = assess_model(table, model_by_name(table, assess_model_name), config);
            } else {
                err << "assess: one of --samples or --losses is required\n";
                return kUsageError;
            }
            out << "periods: " << result.diagnostics.windows.size() << "\n"
                << "chosen window k: " << result.diagnostics.chosen_k << "\n"
                << "estimate: " << fmt(result.estimate, 10) << "\n\n";
            print_diagnostics(out, result.diagnostics);
            emit(assessment_report(result, config), assess_opts, out);
        } else if (compare->parsed()) {
            const auto config = compare_opts.config();
            config.validate();
            const auto table = read_losses(compare_losses);
            const auto r1 = model_by_name(table, compare_models.at(0));
            const auto r2 = model_by_name(table, compare_models.at(1));
            if (r1 == r2) {
                err << "compare: --models needs two distinct models\n";
                return kUsageError;
            }
            const auto result = compare_pair(table, r1, r2, config);
            out << "compare " << table.model_names()[r1] << " vs " << table.model_names()[r2]
                << "\n"
                << "winner: " << table.model_names()[result.winner] << "\n"
                << "gap estimate: " << fmt(result.gap_estimate, 10) << "\n"
                << "chosen window k: " << result.diagnostics.chosen_k << "\n\n";
            print_diagnostics(out, result.diagnostics);
            emit(comparison_report(result, table, config), compare_opts, out);
        } else if (select->parsed()) {
            const auto config = select_opts.config();
            config.validate();
            const auto table = read_losses(select_losses);
            const auto bracket = tournament(table, config);
            const auto& names = table.model_names();
            for (std::size_t s = 0; s < bracket.rounds.size(); ++s) {
                out << "round " << (s + 1) << ":\n";
                for (const auto& m : bracket.rounds[s].matches) {
                    if (m.second) {
                        out << "  " << names[m.first] << " vs " << names[*m.second] << " -> "
                            << names[m.winner] << " (gap " << fmt(*m.gap_estimate)
                            << ", k=" << *m.chosen_k << ")\n";
                    } else {
                        out << "  " << names[m.first] << " advances (bye)\n";
                    }
                }
            }
            out << "champion: " << names[bracket.champion] << "\n"
                << "comparisons: " << bracket.comparisons_made << "\n";
            emit(tournament_report(bracket, table, config), select_opts, out);
        } else if (baseline->parsed()) {
            const auto table = read_losses(baseline_losses);
            const auto report = baseline_report(table, baseline_window);
            const auto means = window_mean_losses(table, baseline_window);
            out << "window: " << baseline_window << " (effective "
                << std::min(baseline_window, table.num_periods()) << ")\n";
            for (std::size_t r = 0; r < means.size(); ++r) {
                out << "  " << table.model_names()[r] << ": " << fmt(means[r], 10) << "\n";
            }
            out << "selected: "
                << table.model_names()[fixed_window_select(table, baseline_window)] << "\n";
            emit(report, baseline_opts, out);
        } else if (simulate->parsed()) {
            sim.scenario = parse_scenario(scenario_name);
            sim.arw = sim_opts.config();
            if (!boundaries.empty()) {
                sim.composite.boundaries = {boundaries[0], boundaries[1], boundaries[2]};
            }
            sim.validate();
            const auto means = make_means(sim);
            const auto result = run_experiment(sim, means);

            out << "scenario: " << scenario_name << "  sigma2: " << fmt(sim.sigma2)
                << "  horizon: " << sim.horizon << "  trials: " << sim.trials
                << "  seed: " << sim.seed << "\n";
            out << std::left << std::setw(10) << "method" << "mean excess risk\n";
            for (std::size_t i = 0; i < result.methods.size(); ++i) {
                out << std::left << std::setw(10) << result.methods[i]
                    << fmt(result.mean_excess_risk[i], 6) << "\n";
            }
            out << std::right;
            emit(simulation_report(result, sim), sim_opts, out);
            if (!trace_path.empty()) {
                write_report(simulation_trace_report(result, means), trace_path,
                             parse_format(sim_opts.format));
                out << "trace written to " << trace_path << "\n";
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}

} // namespace arw::cli
