#include "arw/selection.hpp"

#include "arw/errors.hpp"

#include <algorithm>
#include <string>

namespace arw {

namespace {

void check_model(const LossTable& losses, std::size_t r) {
    if (r >= losses.num_models()) {
        throw DataError("model index " + std::to_string(r) + " out of range (table has " +
                        std::to_string(losses.num_models()) + " models)");
    }
}

void check_nonempty(const LossTable& losses) {
    if (losses.num_periods() == 0) throw DataError("loss table has no periods");
}

} // namespace

Assessment assess_model(const LossTable& losses, std::size_t r, const ArwConfig& config) {
    check_model(losses, r);
    check_nonempty(losses);
    SummarySeries series;
    series.reserve(losses.num_periods());
    for (std::size_t j = 0; j < losses.num_periods(); ++j) {
        series.push_back(summarize_batch(losses.column(j, r)));
    }
    Assessment out;
    out.diagnostics = select_window(series, config);
    out.estimate = out.diagnostics.estimate;
    return out;
}

SummarySeries diff_summaries(const LossTable& losses, std::size_t r1, std::size_t r2) {
    check_model(losses, r1);
    check_model(losses, r2);
    if (r1 == r2) throw DataError("cannot compare a model with itself");
    SummarySeries series;
    series.reserve(losses.num_periods());
    std::vector<double> diff;
    for (std::size_t j = 0; j < losses.num_periods(); ++j) {
        diff.clear();
        for (std::size_t i = 0; i < losses.num_samples(j); ++i) {
            const auto row = losses.row(j, i);
            diff.push_back(row[r1] - row[r2]);
        }
        series.push_back(summarize_batch(diff));
    }
    return series;
}

ComparisonResult compare_pair(const LossTable& losses, std::size_t r1, std::size_t r2,
                              const ArwConfig& config) {
    check_nonempty(losses);
    const auto series = diff_summaries(losses, r1, r2);
    ComparisonResult out;
    out.first = r1;
    out.second = r2;
    out.diagnostics = select_window(series, config);
    out.gap_estimate = out.diagnostics.estimate;
    out.winner = out.gap_estimate <= 0.0 ? r1 : r2;
    return out;
}

BracketRecord tournament(const LossTable& losses, const ArwConfig& config) {
    if (losses.num_models() == 0) throw DataError("tournament needs at least one model");
    config.validate();

    BracketRecord record;
    std::vector<std::size_t> survivors(losses.num_models());
    for (std::size_t r = 0; r < survivors.size(); ++r) survivors[r] = r;

    while (survivors.size() > 1) {
        Round round;
        std::vector<std::size_t> next;
        next.reserve((survivors.size() + 1) / 2);
        for (std::size_t i = 0; i < survivors.size(); i += 2) {
            Match match;
            match.first = survivors[i];
            if (i + 1 < survivors.size()) {
                const auto cmp = compare_pair(losses, survivors[i], survivors[i + 1], config);
                match.second = survivors[i + 1];
                match.winner = cmp.winner;
                match.gap_estimate = cmp.gap_estimate;
                match.chosen_k = cmp.diagnostics.chosen_k;
                ++record.comparisons_made;
            } else {
                match.winner = survivors[i];
            }
            next.push_back(match.winner);
            round.matches.push_back(match);
        }
        survivors = std::move(next);
        record.rounds.push_back(std::move(round));
    }
    record.champion = survivors.front();
    return record;
}

std::vector<double> window_mean_losses(const LossTable& losses, std::size_t k) {
    if (k < 1) throw DataError("window size must be >= 1");
    check_nonempty(losses);
    const std::size_t t = losses.num_periods();
    const std::size_t m = losses.num_models();
    const std::size_t s = std::min(t, k);

    std::vector<double> sums(m, 0.0);
    std::size_t count = 0;
    for (std::size_t j = t - s; j < t; ++j) {
        for (std::size_t i = 0; i < losses.num_samples(j); ++i) {
            const auto row = losses.row(j, i);
            for (std::size_t r = 0; r < m; ++r) sums[r] += row[r];
        }
        count += losses.num_samples(j);
    }
    for (auto& v : sums) v /= static_cast<double>(count);
    return sums;
}

std::size_t fixed_window_select(const LossTable& losses, std::size_t k) {
    const auto means = window_mean_losses(losses, k);
    return static_cast<std::size_t>(std::min_element(means.begin(), means.end()) - means.begin());
}

} // namespace arw
