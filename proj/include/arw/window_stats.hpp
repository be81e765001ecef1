#pragma once

// Adaptive rolling-window mean estimation.
//
// Each period j contributes a batch of B_j observations, reduced to its
// count, mean and mean of squares. For a look-back window of the k most
// recent periods the pooled mean and Bessel-corrected pooled variance follow
// exactly from those summaries. Every window gets an empirical-Bernstein
// fluctuation proxy psi and a pairwise-contrast bias proxy phi; the selected
// window minimizes phi + psi.
//
// With range_width M = 0 (the default used in the simulations) the second
// term of psi vanishes and a single-observation window gets psi = 0. The
// concentration guarantees only hold when M = b - a for losses in [a, b].

#include <cstddef>
#include <span>
#include <vector>

namespace arw {

// Absolute tolerance for second_moment >= mean^2, relative to max(1, mean^2).
inline constexpr double kMomentTolerance = 1e-12;

struct PeriodSummary {
    std::size_t count = 0;       // B_j
    double mean = 0.0;           // sample mean
    double second_moment = 0.0;  // mean of squares

    bool operator==(const PeriodSummary&) const = default;
};

// Time-ordered; the last element is the current period.
using SummarySeries = std::vector<PeriodSummary>;

enum class TieBreak { smallest_k, largest_k };

struct ArwConfig {
    double delta_prime = 0.1;
    double range_width = 0.0;
    TieBreak tie_break = TieBreak::smallest_k;

    // Throws ConfigError unless 0 < delta_prime < 1 and range_width >= 0.
    void validate() const;
};

struct PooledStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // Bessel-corrected, clamped at 0; 0 when count == 1
};

struct WindowRow {
    std::size_t k = 0;
    std::size_t pooled_count = 0;
    double pooled_mean = 0.0;
    double pooled_var = 0.0;
    double psi = 0.0;
    double phi = 0.0;
    double objective = 0.0;

    bool operator==(const WindowRow&) const = default;
};

struct WindowDiagnostics {
    std::vector<WindowRow> windows;  // windows[k - 1] describes window k
    std::size_t chosen_k = 0;
    double estimate = 0.0;

    bool operator==(const WindowDiagnostics&) const = default;
};

/// Reduces one period's batch to its sufficient statistics.
/// Throws DataError("empty batch") on empty input.
PeriodSummary summarize_batch(std::span<const double> samples);

/// Checks the PeriodSummary invariants; throws DataError on violation.
void check_summary(const PeriodSummary& summary);

/// Pooled count, mean and sample variance over the last k periods.
/// Throws DataError when k is outside [1, series.size()].
PooledStats pooled_stats(std::span<const PeriodSummary> series, std::size_t k);

/// Pooled statistics for every window k = 1..t from one backward scan.
/// Entry k - 1 equals pooled_stats(series, k).
std::vector<PooledStats> pooled_stats_all(std::span<const PeriodSummary> series);

/// Empirical-Bernstein proxy for the fluctuation of a pooled mean.
///
/// Returns range_width when pooled_count == 1, otherwise
///   sqrt(var) * sqrt(2 ln(2/delta') / B) + 8 M ln(2/delta') / (3 (B - 1)).
double psi_hat(double pooled_var, std::size_t pooled_count, double delta_prime,
               double range_width);

/// Bias proxy for window k: max over i <= k of
/// (|mean_k - mean_i| - (psi_k + psi_i))_+. Both spans are indexed by
/// window - 1 and must cover at least k entries.
double phi_hat(std::size_t k, std::span<const double> pooled_means,
               std::span<const double> psi_hats);

/// Runs the adaptive window selection on a non-empty series.
WindowDiagnostics select_window(std::span<const PeriodSummary> series,
                                const ArwConfig& config);

/// delta / (3 m^2 t). With m = 1 this is the single-estimate schedule
/// delta / (3 t); with m models it is the tournament schedule.
double scheduled_delta_prime(double delta, std::size_t t, std::size_t m = 1);

/// Range width for a difference of two losses that each lie in [a, b].
double comparison_range_width(double a, double b);

} // namespace arw
