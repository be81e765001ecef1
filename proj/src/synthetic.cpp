#include "arw/synthetic.hpp"

#include "arw/errors.hpp"
#include "arw/loss_table.hpp"
#include "arw/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace arw {

namespace {

// Substream tags under the config seed.
constexpr std::uint64_t kMeansStream = 0x6d65616e;  // "mean"
constexpr std::uint64_t kSizesStream = 1;
constexpr std::uint64_t kValuesStream = 2;

std::array<std::size_t, 3> composite_boundaries(std::size_t horizon,
                                                const CompositeParams& params) {
    if (params.boundaries) return *params.boundaries;
    return {horizon / 4, horizon / 2, 3 * horizon / 4};
}

} // namespace

const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::stationary: return "stationary";
    case Scenario::composite: return "composite";
    case Scenario::changepoint: return "changepoint";
    case Scenario::drift: return "drift";
    }
    return "unknown";
}

Scenario parse_scenario(const std::string& name) {
    for (auto s : {Scenario::stationary, Scenario::composite, Scenario::changepoint,
                   Scenario::drift}) {
        if (name == to_string(s)) return s;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

void ScenarioConfig::validate() const {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ConfigError("sigma2 must be > 0");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (window_menu.empty()) throw ConfigError("window menu must be non-empty");
    for (std::size_t i = 0; i < window_menu.size(); ++i) {
        if (window_menu[i] < 1) throw ConfigError("window sizes must be >= 1");
        if (i > 0 && window_menu[i] <= window_menu[i - 1]) {
            throw ConfigError("window menu must be strictly ascending");
        }
    }
    arw.validate();
    if (scenario == Scenario::composite) {
        const auto b = composite_boundaries(horizon, composite);
        if (!(b[0] <= b[1] && b[1] <= b[2] && b[2] <= horizon)) {
            throw ConfigError("composite boundaries must be nondecreasing and <= horizon");
        }
        if (composite.shift_every < 1) throw ConfigError("shift_every must be >= 1");
        if (!(composite.sine_period > 0.0)) throw ConfigError("sine_period must be > 0");
    }
    if (scenario == Scenario::changepoint && changepoint.lag > horizon) {
        throw ConfigError("change-point lag exceeds horizon");
    }
}

MeanSequence constant_means(std::size_t horizon, double mu0) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    return MeanSequence(horizon, mu0);
}

MeanSequence composite_means(std::size_t horizon, const CompositeParams& params,
                             std::uint64_t seed) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    const auto b = composite_boundaries(horizon, params);
    if (!(b[0] <= b[1] && b[1] <= b[2] && b[2] <= horizon)) {
        throw ConfigError("composite boundaries do not partition [1, horizon]");
    }
    if (params.shift_every < 1) throw ConfigError("shift_every must be >= 1");

    MeanSequence mu;
    mu.reserve(horizon);
    double level = params.start_level;
    std::size_t jump = 0;
    for (std::size_t t = 1; t <= b[0]; ++t) {
        if (t > 1 && (t - 1) % params.shift_every == 0 && !params.jumps.empty()) {
            level += params.jumps[jump++ % params.jumps.size()];
        }
        mu.push_back(level);
    }
    const double center = level;
    for (std::size_t t = b[0] + 1; t <= b[1]; ++t) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(t - b[0]) /
                             params.sine_period;
        level = center + params.amplitude * std::sin(phase);
        mu.push_back(level);
    }
    for (std::size_t t = b[1] + 1; t <= b[2]; ++t) mu.push_back(level);

    Engine rng = substream(seed, {kMeansStream});
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = b[2] + 1; t <= horizon; ++t) {
        level += coin(rng) ? params.walk_step : -params.walk_step;
        mu.push_back(level);
    }
    return mu;
}

MeanSequence changepoint_means(std::size_t horizon, const ChangePointParams& params) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (params.lag > horizon) throw ConfigError("change-point lag exceeds horizon");
    MeanSequence mu(horizon, params.before);
    std::fill(mu.end() - static_cast<std::ptrdiff_t>(params.lag), mu.end(), params.after);
    return mu;
}

MeanSequence drift_means(std::size_t horizon, const DriftParams& params, std::uint64_t seed) {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    Engine rng = substream(seed, {kMeansStream});
    std::bernoulli_distribution coin(0.5);
    MeanSequence mu;
    mu.reserve(horizon);
    double level = params.start;
    mu.push_back(level);
    for (std::size_t t = 2; t <= horizon; ++t) {
        level += coin(rng) ? params.step : -params.step;
        mu.push_back(level);
    }
    return mu;
}

MeanSequence make_means(const ScenarioConfig& config) {
    config.validate();
    switch (config.scenario) {
    case Scenario::stationary: return constant_means(config.horizon, config.mu0);
    case Scenario::composite:
        return composite_means(config.horizon, config.composite, config.seed);
    case Scenario::changepoint: return changepoint_means(config.horizon, config.changepoint);
    case Scenario::drift: return drift_means(config.horizon, config.drift, config.seed);
    }
    throw InvariantError("unhandled scenario");
}

std::vector<PeriodBatch> gen_trial_data(std::span<const double> means, double sigma2,
                                        Engine& sizes_rng, Engine& values_rng) {
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be > 0");
    std::uniform_int_distribution<int> validation_size(2, 4);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    std::vector<PeriodBatch> out(means.size());
    for (std::size_t t = 0; t < means.size(); ++t) {
        const auto b_va = static_cast<std::size_t>(validation_size(sizes_rng));
        auto& batch = out[t];
        batch.train.resize(3 * b_va);
        batch.validation.resize(b_va);
        for (auto& x : batch.train) x = means[t] + noise(values_rng);
        for (auto& x : batch.validation) x = means[t] + noise(values_rng);
    }
    return out;
}

std::vector<PeriodBatch> gen_trial_data(std::span<const double> means,
                                        const ScenarioConfig& config, std::size_t trial) {
    Engine sizes = substream(config.seed, {trial, kSizesStream});
    Engine values = substream(config.seed, {trial, kValuesStream});
    return gen_trial_data(means, config.sigma2, sizes, values);
}

std::vector<std::vector<double>> candidate_estimates(std::span<const PeriodBatch> batches,
                                                     std::span<const std::size_t> window_menu) {
    for (auto w : window_menu) {
        if (w < 1) throw ConfigError("window sizes must be >= 1");
    }
    // Prefix sums over periods: sums[j] covers periods 0..j-1.
    std::vector<double> sums(batches.size() + 1, 0.0);
    std::vector<std::size_t> counts(batches.size() + 1, 0);
    for (std::size_t j = 0; j < batches.size(); ++j) {
        double s = 0.0;
        for (double x : batches[j].train) s += x;
        sums[j + 1] = sums[j] + s;
        counts[j + 1] = counts[j] + batches[j].train.size();
    }
    std::vector<std::vector<double>> out(batches.size(),
                                         std::vector<double>(window_menu.size()));
    for (std::size_t t = 0; t < batches.size(); ++t) {
        for (std::size_t w = 0; w < window_menu.size(); ++w) {
            const std::size_t first = t + 1 > window_menu[w] ? t + 1 - window_menu[w] : 0;
            out[t][w] = (sums[t + 1] - sums[first]) /
                        static_cast<double>(counts[t + 1] - counts[first]);
        }
    }
    return out;
}

TrialReport run_trial(const ScenarioConfig& config, std::span<const double> means,
                      std::size_t trial) {
    const auto& menu = config.window_menu;
    const std::size_t m = menu.size();
    const std::size_t horizon = means.size();

    const auto data = gen_trial_data(means, config, trial);
    const auto estimates = candidate_estimates(data, menu);

    TrialReport report;
    report.methods.push_back("ARW");
    for (auto w : menu) report.methods.push_back("V" + std::to_string(w));
    report.excess_risk.assign(m + 1, std::vector<double>(horizon, 0.0));
    report.arw_window.resize(horizon);

    std::vector<std::string> names;
    for (auto w : menu) names.push_back("T" + std::to_string(w));

    for (std::size_t t = 0; t < horizon; ++t) {
        const auto& cand = estimates[t];
        std::vector<LossTable::Period> periods(t + 1);
        for (std::size_t j = 0; j <= t; ++j) {
            const auto& va = data[j].validation;
            periods[j].samples = va.size();
            periods[j].values.reserve(va.size() * m);
            for (double z : va) {
                for (std::size_t r = 0; r < m; ++r) {
                    const double e = cand[r] - z;
                    periods[j].values.push_back(e * e);
                }
            }
        }
        const LossTable table(names, std::move(periods));

        auto excess = [&](std::size_t r) {
            const double e = cand[r] - means[t];
            return e * e;
        };

        const auto bracket = tournament(table, config.arw);
        report.excess_risk[0][t] = excess(bracket.champion);
        report.arw_window[t] = menu[bracket.champion];
        for (std::size_t i = 0; i < m; ++i) {
            report.excess_risk[i + 1][t] = excess(fixed_window_select(table, menu[i]));
        }
    }

    report.mean_excess_risk.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        double s = 0.0;
        for (double v : report.excess_risk[i]) s += v;
        report.mean_excess_risk[i] = s / static_cast<double>(horizon);
    }
    return report;
}

ExperimentReport run_experiment(const ScenarioConfig& config, std::span<const double> means) {
    config.validate();
    if (means.empty()) throw ConfigError("mean sequence is empty");

    std::vector<TrialReport> trials(config.trials);
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(config.trials, config.threads ? config.threads : hw);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < trials.size(); i = next++) {
            try {
                trials[i] = run_trial(config, means, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentReport out;
    out.methods = trials.front().methods;
    const std::size_t methods = out.methods.size();
    const std::size_t horizon = means.size();
    out.per_period_mean.assign(methods, std::vector<double>(horizon, 0.0));
    out.mean_excess_risk.assign(methods, 0.0);
    // Summation in trial order keeps the aggregate independent of scheduling.
    for (const auto& tr : trials) {
        for (std::size_t i = 0; i < methods; ++i) {
            for (std::size_t t = 0; t < horizon; ++t) out.per_period_mean[i][t] += tr.excess_risk[i][t];
        }
    }
    const double n = static_cast<double>(trials.size());
    for (std::size_t i = 0; i < methods; ++i) {
        double s = 0.0;
        for (auto& v : out.per_period_mean[i]) {
            v /= n;
            s += v;
        }
        out.mean_excess_risk[i] = s / static_cast<double>(horizon);
    }
    out.trials = std::move(trials);
    return out;
}

double ExperimentReport::mean_over(std::size_t method, std::size_t first,
                                   std::size_t last) const {
    const auto& series = per_period_mean.at(method);
    if (first < 1 || last < first || last > series.size()) {
        throw ConfigError("period range out of bounds");
    }
    double s = 0.0;
    for (std::size_t t = first; t <= last; ++t) s += series[t - 1];
    return s / static_cast<double>(last - first + 1);
}

std::size_t ExperimentReport::method_index(const std::string& name) const {
    const auto it = std::find(methods.begin(), methods.end(), name);
    if (it == methods.end()) throw ConfigError("no method named '" + name + "'");
    return static_cast<std::size_t>(it - methods.begin());
}

double true_bias(std::span<const double> means, std::size_t k) {
    if (k < 1 || k > means.size()) throw DataError("window k out of range");
    const double current = means.back();
    double phi = 0.0;
    for (std::size_t i = means.size() - k; i < means.size(); ++i) {
        phi = std::max(phi, std::abs(means[i] - current));
    }
    return phi;
}

OracleBiasVariance oracle_bias_variance(std::span<const double> means,
                                        std::span<const double> variances,
                                        std::span<const std::size_t> counts, std::size_t k) {
    if (variances.size() != means.size() || counts.size() != means.size()) {
        throw DataError("oracle inputs must have equal length");
    }
    OracleBiasVariance out;
    out.phi = true_bias(means, k);
    double weighted = 0.0;
    std::size_t total = 0;
    for (std::size_t i = means.size() - k; i < means.size(); ++i) {
        weighted += static_cast<double>(counts[i]) * variances[i];
        total += counts[i];
    }
    if (total == 0) throw DataError("oracle window has no samples");
    out.sigma = std::sqrt(weighted / static_cast<double>(total));
    return out;
}

} // namespace arw
