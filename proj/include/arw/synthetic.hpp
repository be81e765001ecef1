#pragma once

// Synthetic mean-estimation experiments.
//
// Each period t draws a validation batch of 2, 3 or 4 samples (uniformly)
// and a training batch three times that size, all i.i.d. N(mu_t, sigma2).
// The candidates at period t are the training-sample averages over the last
// w periods for each w in the window menu. A selection method picks a
// candidate from the squared-error validation losses of periods 1..t, and
// its excess risk is the squared distance of that candidate from mu_t.

#include "arw/rng.hpp"
#include "arw/window_stats.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace arw {

using MeanSequence = std::vector<double>;

enum class Scenario { stationary, composite, changepoint, drift };

const char* to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

// Four segments: piecewise-constant jumps, a sinusoid, a flat stretch, and a
// random walk with +-walk_step increments. Each segment starts where the
// previous one ended.
struct CompositeParams {
    // Last period (1-based) of segments 1..3; defaults to T/4, T/2, 3T/4.
    std::optional<std::array<std::size_t, 3>> boundaries;
    double start_level = 0.5;
    std::size_t shift_every = 12;
    std::vector<double> jumps = {3.0, -2.0};  // applied cyclically
    double amplitude = 1.0;
    double sine_period = 40.0;  // in periods
    double walk_step = 0.1;
};

// mu = before for t <= T - lag, after for t > T - lag.
struct ChangePointParams {
    double before = 0.0;
    double after = 3.0;
    std::size_t lag = 20;
};

// Random walk from `start` with i.i.d. +-step increments.
struct DriftParams {
    double start = 0.0;
    double step = 0.1;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::stationary;
    std::size_t horizon = 100;
    double sigma2 = 1.0;
    std::vector<std::size_t> window_menu = {1, 4, 16, 64, 256};
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    ArwConfig arw;
    double mu0 = 0.0;  // stationary level
    CompositeParams composite;
    ChangePointParams changepoint;
    DriftParams drift;
    std::size_t threads = 0;  // 0 picks hardware concurrency

    void validate() const;
};

struct PeriodBatch {
    std::vector<double> train;
    std::vector<double> validation;
};

struct TrialReport {
    std::vector<std::string> methods;              // "ARW", then "V<k>" per menu entry
    std::vector<std::vector<double>> excess_risk;  // [method][period]
    std::vector<double> mean_excess_risk;          // [method]
    std::vector<std::size_t> arw_window;           // candidate window picked by ARW, per period
};

struct ExperimentReport {
    std::vector<std::string> methods;
    std::vector<TrialReport> trials;
    std::vector<std::vector<double>> per_period_mean;  // [method][period], averaged over trials
    std::vector<double> mean_excess_risk;              // [method], over periods and trials

    /// Mean excess risk of one method over periods first..last (1-based, inclusive).
    double mean_over(std::size_t method, std::size_t first, std::size_t last) const;
    std::size_t method_index(const std::string& name) const;
};

MeanSequence constant_means(std::size_t horizon, double mu0);
MeanSequence composite_means(std::size_t horizon, const CompositeParams& params,
                             std::uint64_t seed);
MeanSequence changepoint_means(std::size_t horizon, const ChangePointParams& params);
MeanSequence drift_means(std::size_t horizon, const DriftParams& params, std::uint64_t seed);

/// The mean sequence for config.scenario, drawn once per config.seed.
MeanSequence make_means(const ScenarioConfig& config);

std::vector<PeriodBatch> gen_trial_data(std::span<const double> means, double sigma2,
                                        Engine& sizes_rng, Engine& values_rng);

/// Uses the (seed, trial) substreams for batch sizes and sample values.
std::vector<PeriodBatch> gen_trial_data(std::span<const double> means,
                                        const ScenarioConfig& config, std::size_t trial);

/// estimates[t][w] = mean of the training samples of periods
/// max(1, t - menu[w] + 1)..t, with t 0-based in the result.
std::vector<std::vector<double>> candidate_estimates(std::span<const PeriodBatch> batches,
                                                     std::span<const std::size_t> window_menu);

TrialReport run_trial(const ScenarioConfig& config, std::span<const double> means,
                      std::size_t trial);

/// Runs config.trials trials (in parallel) and aggregates. The result does
/// not depend on the thread count.
ExperimentReport run_experiment(const ScenarioConfig& config, std::span<const double> means);

/// Largest |mu_j - mu_t| over the last k periods of `means` (t = means.size()).
double true_bias(std::span<const double> means, std::size_t k);

struct OracleBiasVariance {
    double phi = 0.0;
    double sigma = 0.0;  // sqrt of the count-weighted mean of per-period variances
};

/// Ground-truth bias and pooled standard deviation for window k at
/// t = means.size(). All spans are per period and have equal length.
OracleBiasVariance oracle_bias_variance(std::span<const double> means,
                                        std::span<const double> variances,
                                        std::span<const std::size_t> counts, std::size_t k);

} // namespace arw
