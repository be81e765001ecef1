#include "arw/report.hpp"

#include "arw/errors.hpp"

#include <algorithm>

namespace arw {

namespace {

Cell num(double v) { return Cell(v); }
Cell num(std::size_t v) { return Cell(static_cast<double>(v)); }
Cell str(std::string s) { return Cell(std::move(s)); }

const char* tie_break_name(TieBreak t) {
    return t == TieBreak::smallest_k ? "smallest_k" : "largest_k";
}

void add_config(Report& r, const ArwConfig& config) {
    r.meta.emplace_back("delta_prime", num(config.delta_prime));
    r.meta.emplace_back("range_width", num(config.range_width));
    r.meta.emplace_back("tie_break", str(tie_break_name(config.tie_break)));
}

} // namespace

const Cell& Report::at(const std::string& key) const {
    for (const auto& [k, v] : meta) {
        if (k == key) return v;
    }
    throw DataError("report has no entry '" + key + "'");
}

const std::vector<std::string>& diagnostics_columns() {
    static const std::vector<std::string> cols = {"k",   "B",   "mean",     "var",
                                                  "psi", "phi", "objective"};
    return cols;
}

std::vector<std::vector<Cell>> diagnostics_rows(const WindowDiagnostics& diag) {
    std::vector<std::vector<Cell>> rows;
    rows.reserve(diag.windows.size());
    for (const auto& w : diag.windows) {
        rows.push_back({num(w.k), num(w.pooled_count), num(w.pooled_mean), num(w.pooled_var),
                        num(w.psi), num(w.phi), num(w.objective)});
    }
    return rows;
}

Report assessment_report(const Assessment& result, const ArwConfig& config) {
    Report r;
    r.kind = "assessment";
    r.meta.emplace_back("periods", num(result.diagnostics.windows.size()));
    r.meta.emplace_back("chosen_k", num(result.diagnostics.chosen_k));
    r.meta.emplace_back("estimate", num(result.estimate));
    add_config(r, config);
    r.columns = diagnostics_columns();
    r.rows = diagnostics_rows(result.diagnostics);
    return r;
}

Report comparison_report(const ComparisonResult& result, const LossTable& losses,
                         const ArwConfig& config) {
    const auto& names = losses.model_names();
    Report r;
    r.kind = "comparison";
    r.meta.emplace_back("first", str(names.at(result.first)));
    r.meta.emplace_back("second", str(names.at(result.second)));
    r.meta.emplace_back("winner", str(names.at(result.winner)));
    r.meta.emplace_back("gap_estimate", num(result.gap_estimate));
    r.meta.emplace_back("chosen_k", num(result.diagnostics.chosen_k));
    add_config(r, config);
    r.columns = diagnostics_columns();
    r.rows = diagnostics_rows(result.diagnostics);
    return r;
}

Report tournament_report(const BracketRecord& bracket, const LossTable& losses,
                         const ArwConfig& config) {
    const auto& names = losses.model_names();
    Report r;
    r.kind = "tournament";
    r.meta.emplace_back("champion", str(names.at(bracket.champion)));
    r.meta.emplace_back("models", num(names.size()));
    r.meta.emplace_back("rounds", num(bracket.rounds.size()));
    r.meta.emplace_back("comparisons_made", num(bracket.comparisons_made));
    add_config(r, config);
    r.columns = {"round", "first", "second", "winner", "gap_estimate", "chosen_k"};
    for (std::size_t s = 0; s < bracket.rounds.size(); ++s) {
        for (const auto& m : bracket.rounds[s].matches) {
            r.rows.push_back({num(s + 1), str(names.at(m.first)),
                              m.second ? str(names.at(*m.second)) : str(""),
                              str(names.at(m.winner)),
                              m.gap_estimate ? num(*m.gap_estimate) : str(""),
                              m.chosen_k ? num(*m.chosen_k) : str("")});
        }
    }
    return r;
}

Report baseline_report(const LossTable& losses, std::size_t window) {
    const auto means = window_mean_losses(losses, window);
    const auto pick = fixed_window_select(losses, window);
    Report r;
    r.kind = "baseline";
    r.meta.emplace_back("window", num(window));
    r.meta.emplace_back("effective_window", num(std::min(window, losses.num_periods())));
    r.meta.emplace_back("selected", str(losses.model_names().at(pick)));
    r.columns = {"model", "mean_loss"};
    for (std::size_t i = 0; i < means.size(); ++i) {
        r.rows.push_back({str(losses.model_names()[i]), num(means[i])});
    }
    return r;
}

Report simulation_report(const ExperimentReport& result, const ScenarioConfig& config) {
    Report r;
    r.kind = "simulation";
    r.meta.emplace_back("scenario", str(to_string(config.scenario)));
    r.meta.emplace_back("horizon", num(config.horizon));
    r.meta.emplace_back("sigma2", num(config.sigma2));
    r.meta.emplace_back("trials", num(config.trials));
    r.meta.emplace_back("seed", num(static_cast<double>(config.seed)));
    add_config(r, config.arw);
    r.columns = {"method", "mean_excess_risk"};
    for (std::size_t i = 0; i < result.methods.size(); ++i) {
        r.rows.push_back({str(result.methods[i]), num(result.mean_excess_risk[i])});
    }
    return r;
}

Report simulation_trace_report(const ExperimentReport& result, std::span<const double> means) {
    Report r;
    r.kind = "simulation_trace";
    r.columns = {"period", "mu"};
    for (const auto& m : result.methods) r.columns.push_back(m);
    for (std::size_t t = 0; t < means.size(); ++t) {
        std::vector<Cell> row = {num(t + 1), num(means[t])};
        for (const auto& series : result.per_period_mean) row.push_back(num(series.at(t)));
        r.rows.push_back(std::move(row));
    }
    return r;
}

} // namespace arw
