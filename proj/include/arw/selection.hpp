#pragma once

// Model assessment, pairwise comparison, single-elimination tournament and
// the fixed-window baseline. All functions are pure; model indices are
// 0-based columns of the LossTable.

#include "arw/loss_table.hpp"
#include "arw/window_stats.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace arw {

struct Assessment {
    double estimate = 0.0;
    WindowDiagnostics diagnostics;
};

struct ComparisonResult {
    std::size_t first = 0;
    std::size_t second = 0;
    std::size_t winner = 0;
    double gap_estimate = 0.0;  // windowed mean of loss(first) - loss(second)
    WindowDiagnostics diagnostics;
};

struct Match {
    std::size_t first = 0;
    std::optional<std::size_t> second;  // empty for a bye
    std::size_t winner = 0;
    std::optional<double> gap_estimate;
    std::optional<std::size_t> chosen_k;
};

struct Round {
    std::vector<Match> matches;
};

struct BracketRecord {
    std::vector<Round> rounds;
    std::size_t champion = 0;
    std::size_t comparisons_made = 0;
};

/// Runs the adaptive window on the losses of model r.
Assessment assess_model(const LossTable& losses, std::size_t r, const ArwConfig& config);

/// Per-period summaries of loss(r1) - loss(r2).
SummarySeries diff_summaries(const LossTable& losses, std::size_t r1, std::size_t r2);

/// Picks r1 when the adaptively windowed mean loss difference is <= 0,
/// otherwise r2. config.range_width applies to the difference series, so for
/// losses in [a, b] use comparison_range_width(a, b).
ComparisonResult compare_pair(const LossTable& losses, std::size_t r1, std::size_t r2,
                              const ArwConfig& config);

/// Single-elimination tournament over all models. Survivors are paired in
/// order (0,1), (2,3), ...; an odd survivor out advances on a bye.
BracketRecord tournament(const LossTable& losses, const ArwConfig& config);

/// Pooled mean loss of every model over the last min(t, k) periods.
std::vector<double> window_mean_losses(const LossTable& losses, std::size_t k);

/// Model with the lowest pooled mean loss over the last min(t, k) periods;
/// ties go to the smallest index.
std::size_t fixed_window_select(const LossTable& losses, std::size_t k);

} // namespace arw
