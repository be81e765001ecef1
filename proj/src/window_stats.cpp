#include "arw/window_stats.hpp"

#include "arw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace arw {

namespace {

// Running pooled statistics, merged one period at a time (Chan et al.).
struct Accumulator {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations from mean

    void merge(const PeriodSummary& p) {
        const double n_a = static_cast<double>(count);
        const double n_b = static_cast<double>(p.count);
        const double n = n_a + n_b;
        const double m2_b = n_b * std::max(p.second_moment - p.mean * p.mean, 0.0);
        const double delta = p.mean - mean;
        mean += delta * (n_b / n);
        m2 += m2_b + delta * delta * (n_a * n_b / n);
        count += p.count;
    }

    PooledStats stats() const {
        PooledStats s;
        s.count = count;
        s.mean = mean;
        s.variance = count > 1 ? std::max(m2, 0.0) / static_cast<double>(count - 1) : 0.0;
        return s;
    }
};

} // namespace

void ArwConfig::validate() const {
    if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
        throw ConfigError("delta_prime must lie in (0, 1), got " + std::to_string(delta_prime));
    }
    if (!(range_width >= 0.0) || !std::isfinite(range_width)) {
        throw ConfigError("range_width must be finite and >= 0, got " + std::to_string(range_width));
    }
}

PeriodSummary summarize_batch(std::span<const double> samples) {
    if (samples.empty()) throw DataError("empty batch");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : samples) {
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(samples.size());
    return {samples.size(), sum / n, sum_sq / n};
}

void check_summary(const PeriodSummary& summary) {
    if (summary.count < 1) throw DataError("period summary has count 0");
    if (!std::isfinite(summary.mean) || !std::isfinite(summary.second_moment)) {
        throw DataError("period summary has non-finite moments");
    }
    const double sq = summary.mean * summary.mean;
    if (summary.second_moment < sq - kMomentTolerance * std::max(1.0, sq)) {
        throw DataError("period summary has second_moment < mean^2");
    }
}

PooledStats pooled_stats(std::span<const PeriodSummary> series, std::size_t k) {
    if (k < 1 || k > series.size()) {
        throw DataError("window k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(series.size()) + "]");
    }
    Accumulator acc;
    for (std::size_t i = 0; i < k; ++i) acc.merge(series[series.size() - 1 - i]);
    return acc.stats();
}

std::vector<PooledStats> pooled_stats_all(std::span<const PeriodSummary> series) {
    std::vector<PooledStats> out;
    out.reserve(series.size());
    Accumulator acc;
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
        acc.merge(*it);
        out.push_back(acc.stats());
    }
    return out;
}

double psi_hat(double pooled_var, std::size_t pooled_count, double delta_prime,
               double range_width) {
    if (pooled_count == 1) return range_width;
    const double log_term = std::log(2.0 / delta_prime);
    const double b = static_cast<double>(pooled_count);
    return std::sqrt(std::max(pooled_var, 0.0)) * std::sqrt(2.0 * log_term / b) +
           8.0 * range_width * log_term / (3.0 * (b - 1.0));
}

double phi_hat(std::size_t k, std::span<const double> pooled_means,
               std::span<const double> psi_hats) {
    if (k < 1 || k > pooled_means.size() || k > psi_hats.size()) {
        throw DataError("phi_hat: window arrays do not cover k=" + std::to_string(k));
    }
    const double mean_k = pooled_means[k - 1];
    const double psi_k = psi_hats[k - 1];
    double best = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double gap = std::abs(mean_k - pooled_means[i]) - (psi_k + psi_hats[i]);
        best = std::max(best, std::max(gap, 0.0));
    }
    return best;
}

WindowDiagnostics select_window(std::span<const PeriodSummary> series,
                                const ArwConfig& config) {
    config.validate();
    if (series.empty()) throw DataError("empty summary series");
    for (const auto& p : series) check_summary(p);

    const auto pooled = pooled_stats_all(series);
    const std::size_t t = pooled.size();

    std::vector<double> means(t);
    std::vector<double> psis(t);
    for (std::size_t i = 0; i < t; ++i) {
        means[i] = pooled[i].mean;
        psis[i] = psi_hat(pooled[i].variance, pooled[i].count, config.delta_prime,
                          config.range_width);
    }

    WindowDiagnostics diag;
    diag.windows.reserve(t);
    for (std::size_t k = 1; k <= t; ++k) {
        WindowRow row;
        row.k = k;
        row.pooled_count = pooled[k - 1].count;
        row.pooled_mean = means[k - 1];
        row.pooled_var = pooled[k - 1].variance;
        row.psi = psis[k - 1];
        row.phi = phi_hat(k, means, psis);
        row.objective = row.phi + row.psi;
        diag.windows.push_back(row);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < t; ++i) {
        const double obj = diag.windows[i].objective;
        const double cur = diag.windows[best].objective;
        const bool better = config.tie_break == TieBreak::smallest_k ? obj < cur : obj <= cur;
        if (better) best = i;
    }
    diag.chosen_k = best + 1;
    diag.estimate = diag.windows[best].pooled_mean;
    return diag;
}

double scheduled_delta_prime(double delta, std::size_t t, std::size_t m) {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (t < 1 || m < 1) throw ConfigError("t and m must be >= 1");
    const double md = static_cast<double>(m);
    return delta / (3.0 * md * md * static_cast<double>(t));
}

double comparison_range_width(double a, double b) {
    if (!(b >= a)) throw ConfigError("loss range requires a <= b");
    return 2.0 * (b - a);
}

} // namespace arw
