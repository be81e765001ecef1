#pragma once

// A flat, serializable result: named metadata values plus one table.
// Every subcommand of the command-line tool produces one of these.

#include "arw/selection.hpp"
#include "arw/synthetic.hpp"
#include "arw/window_stats.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace arw {

using Cell = std::variant<double, std::string>;

struct Report {
    std::string kind;
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    bool operator==(const Report&) const = default;

    /// Value of a metadata entry; throws DataError if absent.
    const Cell& at(const std::string& key) const;
};

/// Column names of a per-window diagnostics table.
const std::vector<std::string>& diagnostics_columns();

/// One row per window k: k, B, mean, var, psi, phi, objective.
std::vector<std::vector<Cell>> diagnostics_rows(const WindowDiagnostics& diag);

Report assessment_report(const Assessment& result, const ArwConfig& config);
Report comparison_report(const ComparisonResult& result, const LossTable& losses,
                         const ArwConfig& config);
Report tournament_report(const BracketRecord& bracket, const LossTable& losses,
                         const ArwConfig& config);
Report baseline_report(const LossTable& losses, std::size_t window);

/// One row per method with its mean excess risk.
Report simulation_report(const ExperimentReport& result, const ScenarioConfig& config);

/// One row per period with the trial-averaged excess risk of every method
/// and the true mean; suitable for plotting.
Report simulation_trace_report(const ExperimentReport& result, std::span<const double> means);

} // namespace arw
