#include "arw/errors.hpp"
#include "arw/selection.hpp"
#include "arw/synthetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace arw;

namespace {

using Rows = std::vector<std::vector<std::vector<double>>>;

std::vector<std::string> names(std::size_t m) {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < m; ++r) out.push_back("m" + std::to_string(r));
    return out;
}

LossTable random_table(std::mt19937_64& rng, std::size_t t, std::size_t m, std::size_t max_batch) {
    std::uniform_int_distribution<std::size_t> size(1, max_batch);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Rows rows(t);
    for (auto& period : rows) {
        period.resize(size(rng));
        for (auto& row : period) {
            row.resize(m);
            for (auto& v : row) v = u(rng);
        }
    }
    return LossTable::from_rows(names(m), rows);
}

// Losses on the dyadic grid k/64 so that adding an integer is exact.
LossTable dyadic_table(std::mt19937_64& rng, std::size_t t, std::size_t m, double shift) {
    std::uniform_int_distribution<int> grid(0, 64);
    std::uniform_int_distribution<std::size_t> size(1, 4);
    Rows rows(t);
    for (auto& period : rows) {
        period.resize(size(rng));
        for (auto& row : period) {
            row.resize(m);
            for (auto& v : row) v = grid(rng) / 64.0;
        }
    }
    for (auto& period : rows)
        for (auto& row : period)
            for (auto& v : row) v += shift;
    return LossTable::from_rows(names(m), rows);
}

LossTable shifted(const LossTable& table, double c) {
    Rows rows(table.num_periods());
    for (std::size_t j = 0; j < table.num_periods(); ++j) {
        for (std::size_t i = 0; i < table.num_samples(j); ++i) {
            const auto row = table.row(j, i);
            std::vector<double> r(row.begin(), row.end());
            for (auto& v : r) v += c;
            rows[j].push_back(r);
        }
    }
    return LossTable::from_rows(table.model_names(), rows);
}

// Two constant predictors a and b of a Gaussian mean sequence under squared
// loss. True risk at t is sigma2 + (mu_t - prediction)^2.
struct TwoModel {
    LossTable table;
    double risk_a = 0.0;
    double risk_b = 0.0;
};

TwoModel two_model(std::mt19937_64& rng, const std::vector<double>& mu, double a, double b,
                   double sigma2) {
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    std::uniform_int_distribution<std::size_t> size(2, 4);
    Rows rows(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        rows[j].resize(size(rng));
        for (auto& row : rows[j]) {
            const double y = mu[j] + noise(rng);
            row = {(y - a) * (y - a), (y - b) * (y - b)};
        }
    }
    const double mt = mu.back();
    return {LossTable::from_rows({"a", "b"}, rows), sigma2 + (mt - a) * (mt - a),
            sigma2 + (mt - b) * (mt - b)};
}

} // namespace

// ---------------------------------------------------------------------------
// assess_model

TEST(AssessModel, ConstantLosses) {
    const Rows rows(6, std::vector<std::vector<double>>(3, {0.25, 1.0}));
    const auto table = LossTable::from_rows(names(2), rows);
    EXPECT_EQ(assess_model(table, 0, ArwConfig{}).estimate, 0.25);
    EXPECT_EQ(assess_model(table, 1, ArwConfig{}).estimate, 1.0);
}

TEST(AssessModel, SinglePeriod) {
    const auto table = LossTable::from_rows(names(2), {{{1.0, 0.0}, {2.0, 0.0}, {6.0, 0.0}}});
    const auto a = assess_model(table, 0, ArwConfig{});
    EXPECT_EQ(a.diagnostics.chosen_k, 1u);
    EXPECT_DOUBLE_EQ(a.estimate, 3.0);
}

TEST(AssessModel, InvalidIndexThrows) {
    const auto table = LossTable::from_rows(names(2), {{{1.0, 0.0}}});
    EXPECT_THROW(assess_model(table, 2, ArwConfig{}), DataError);
}

// Stationary losses: the adaptive estimate beats the last-period-only mean in RMS.
TEST(AssessModel, BeatsCurrentPeriodEstimatorInRms) {
    std::mt19937_64 rng(8);
    const std::vector<double> mu(50, 0.0);
    double se_arw = 0.0;
    double se_last = 0.0;
    const int trials = 300;
    for (int trial = 0; trial < trials; ++trial) {
        const auto tm = two_model(rng, mu, 0.5, -1.0, 1.0);
        const auto a = assess_model(tm.table, 0, ArwConfig{});
        const double last = a.diagnostics.windows[0].pooled_mean;
        se_arw += (a.estimate - tm.risk_a) * (a.estimate - tm.risk_a);
        se_last += (last - tm.risk_a) * (last - tm.risk_a);
    }
    EXPECT_LT(std::sqrt(se_arw / trials), std::sqrt(se_last / trials));
}

// ---------------------------------------------------------------------------
// diff_summaries

TEST(DiffSummaries, Example) {
    const auto table = LossTable::from_rows(names(2), {{{1.0, 0.0}, {1.0, 2.0}}});
    const auto s = diff_summaries(table, 0, 1);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0], (PeriodSummary{2, 0.0, 1.0}));
}

TEST(DiffSummaries, IdenticalColumns) {
    const auto table = LossTable::from_rows(names(3), {{{0.3, 0.3, 0.1}}, {{0.7, 0.7, 0.2}, {0.1, 0.1, 0.0}}});
    for (const auto& s : diff_summaries(table, 0, 1)) {
        EXPECT_EQ(s.mean, 0.0);
        EXPECT_EQ(s.second_moment, 0.0);
    }
}

TEST(DiffSummaries, SameModelThrows) {
    const auto table = LossTable::from_rows(names(2), {{{1.0, 0.0}}});
    EXPECT_THROW(diff_summaries(table, 1, 1), DataError);
    EXPECT_THROW(diff_summaries(table, 0, 5), DataError);
}

TEST(DiffSummaries, MatchesFlattenOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const auto table = random_table(rng, 1 + trial % 10, 3, 5);
        const auto s = diff_summaries(table, 2, 0);
        for (std::size_t j = 0; j < table.num_periods(); ++j) {
            std::vector<double> d;
            for (std::size_t i = 0; i < table.num_samples(j); ++i)
                d.push_back(table.loss(j, i, 2) - table.loss(j, i, 0));
            const auto f = oracle::flatten({d}, 1);
            long double sq = 0;
            for (double x : d) sq += static_cast<long double>(x) * x;
            ASSERT_EQ(s[j].count, f.count);
            ASSERT_LE(oracle::rel_err(s[j].mean, f.mean), 1e-12);
            ASSERT_LE(oracle::rel_err(s[j].second_moment, static_cast<double>(sq / d.size())), 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// compare_pair

TEST(ComparePair, ZeroGapGoesToFirst) {
    const auto table = LossTable::from_rows(names(2), {{{0.5, 0.5}, {0.2, 0.2}}, {{1.0, 1.0}}});
    const auto c = compare_pair(table, 1, 0, ArwConfig{});
    EXPECT_EQ(c.gap_estimate, 0.0);
    EXPECT_EQ(c.winner, 1u);
    EXPECT_EQ(c.first, 1u);
    EXPECT_EQ(c.second, 0u);
}

TEST(ComparePair, DominatingModelWins) {
    std::mt19937_64 rng(4);
    auto table = random_table(rng, 10, 2, 4);
    Rows rows(table.num_periods());
    for (std::size_t j = 0; j < table.num_periods(); ++j)
        for (std::size_t i = 0; i < table.num_samples(j); ++i) {
            const double v = table.loss(j, i, 0);
            rows[j].push_back({v, v + 0.1});
        }
    table = LossTable::from_rows(names(2), rows);
    EXPECT_EQ(compare_pair(table, 0, 1, ArwConfig{}).winner, 0u);
    EXPECT_EQ(compare_pair(table, 1, 0, ArwConfig{}).winner, 0u);
}

// Model 1 is slightly worse early on and much better in recent periods, so
// every windowed mean difference is positive.
TEST(ComparePair, RecentDominanceEveryWindowPositive) {
    Rows rows;
    for (int j = 0; j < 4; ++j) rows.push_back({{0.5, 0.6}, {0.5, 0.6}});
    for (int j = 0; j < 6; ++j) rows.push_back({{1.0, 0.0}, {0.9, 0.1}});
    const auto table = LossTable::from_rows(names(2), rows);
    const auto c = compare_pair(table, 0, 1, ArwConfig{});
    for (const auto& w : c.diagnostics.windows) ASSERT_GT(w.pooled_mean, 0.0);
    EXPECT_GT(c.gap_estimate, 0.0);
    EXPECT_EQ(c.winner, 1u);
}

TEST(ComparePair, WinnerMatchesGapSign) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto table = random_table(rng, 1 + trial % 12, 2, 3);
        const auto c = compare_pair(table, 0, 1, ArwConfig{});
        ASSERT_EQ(c.winner == 0u, c.gap_estimate <= 0.0);
        ASSERT_EQ(c.gap_estimate, c.diagnostics.estimate);
    }
}

TEST(ComparePair, Antisymmetry) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const auto table = trial % 4 == 0 ? dyadic_table(rng, 1 + trial % 9, 2, 0.0)
                                          : random_table(rng, 1 + trial % 9, 2, 3);
        const auto ab = compare_pair(table, 0, 1, ArwConfig{});
        const auto ba = compare_pair(table, 1, 0, ArwConfig{});
        ASSERT_EQ(ab.diagnostics.windows.size(), ba.diagnostics.windows.size());
        for (std::size_t k = 0; k < ab.diagnostics.windows.size(); ++k) {
            ASSERT_EQ(ab.diagnostics.windows[k].pooled_mean, -ba.diagnostics.windows[k].pooled_mean);
        }
        ASSERT_EQ(ab.diagnostics.chosen_k, ba.diagnostics.chosen_k);
        if (ab.gap_estimate == 0.0) {
            ASSERT_EQ(ab.winner, 0u);
            ASSERT_EQ(ba.winner, 1u);
        } else {
            ASSERT_EQ(ab.winner, ba.winner);
        }
    }
}

// Per-window decision vs ground truth: the regret of picking by the sign of
// the window-k gap is bounded by that window's gap error.
TEST(ComparePair, RegretBoundedByGapError) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t t = 5 + trial % 40;
        std::vector<double> mu(t, 0.0);
        for (std::size_t j = t - std::min<std::size_t>(t, 3 + trial % 7); j < t; ++j) mu[j] = 1.0;
        const auto tm = two_model(rng, mu, 0.0, 0.8, 1.0);
        const auto c = compare_pair(tm.table, 0, 1, ArwConfig{});
        const double delta = tm.risk_a - tm.risk_b;
        const double best = std::min(tm.risk_a, tm.risk_b);
        for (const auto& w : c.diagnostics.windows) {
            const double picked = w.pooled_mean <= 0.0 ? tm.risk_a : tm.risk_b;
            ASSERT_LE(picked - best, std::abs(w.pooled_mean - delta) + 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// tournament

TEST(Tournament, SingleModel) {
    const auto table = LossTable::from_rows(names(1), {{{0.4}}});
    const auto b = tournament(table, ArwConfig{});
    EXPECT_EQ(b.champion, 0u);
    EXPECT_EQ(b.comparisons_made, 0u);
    EXPECT_TRUE(b.rounds.empty());
}

TEST(Tournament, TwoModelsReduceToComparison) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        const auto table = random_table(rng, 6, 2, 3);
        const auto b = tournament(table, ArwConfig{});
        EXPECT_EQ(b.comparisons_made, 1u);
        EXPECT_EQ(b.champion, compare_pair(table, 0, 1, ArwConfig{}).winner);
    }
}

TEST(Tournament, FiveModels) {
    std::mt19937_64 rng(52);
    const auto table = random_table(rng, 8, 5, 3);
    const auto b = tournament(table, ArwConfig{});
    EXPECT_EQ(b.rounds.size(), 3u);
    EXPECT_EQ(b.comparisons_made, 4u);
    // Round 1: (0,1), (2,3), bye for 4.
    ASSERT_EQ(b.rounds[0].matches.size(), 3u);
    EXPECT_EQ(b.rounds[0].matches[0].first, 0u);
    EXPECT_EQ(b.rounds[0].matches[0].second, 1u);
    EXPECT_FALSE(b.rounds[0].matches[2].second.has_value());
    EXPECT_EQ(b.rounds[0].matches[2].winner, 4u);
}

TEST(Tournament, StructureForAllSizes) {
    std::mt19937_64 rng(53);
    for (std::size_t m = 1; m <= 20; ++m) {
        const auto table = random_table(rng, 3, m, 2);
        const auto b = tournament(table, ArwConfig{});
        ASSERT_EQ(b.comparisons_made, m - 1);
        ASSERT_EQ(b.rounds.size(), m == 1 ? 0u : static_cast<std::size_t>(std::ceil(std::log2(m))));
        ASSERT_LT(b.champion, m);
        std::size_t survivors = m;
        for (const auto& round : b.rounds) {
            ASSERT_EQ(round.matches.size(), (survivors + 1) / 2);
            for (const auto& match : round.matches) {
                ASSERT_TRUE(match.winner == match.first || match.winner == match.second);
                ASSERT_EQ(match.second.has_value(), match.gap_estimate.has_value());
            }
            survivors = round.matches.size();
        }
        ASSERT_EQ(survivors, 1u);
    }
}

TEST(Tournament, PicksClearlyBestModel) {
    Rows rows(10, std::vector<std::vector<double>>(3, {0.9, 0.8, 0.1, 0.7, 0.95, 0.6}));
    const auto table = LossTable::from_rows(names(6), rows);
    EXPECT_EQ(tournament(table, ArwConfig{}).champion, 2u);
}

// ---------------------------------------------------------------------------
// fixed_window_select

TEST(FixedWindow, CurrentPeriodOnly) {
    const auto table = LossTable::from_rows(names(2), {{{0.0, 1.0}}, {{0.9, 0.1}, {0.8, 0.3}}});
    EXPECT_EQ(fixed_window_select(table, 1), 1u);
}

TEST(FixedWindow, TwoModelMeans) {
    const auto table = LossTable::from_rows(names(2), {{{0.1, 0.2}, {0.3, 0.4}}});
    EXPECT_EQ(fixed_window_select(table, 1), 0u);
    const auto means = window_mean_losses(table, 1);
    EXPECT_DOUBLE_EQ(means[0], 0.2);
    EXPECT_DOUBLE_EQ(means[1], 0.3);
}

TEST(FixedWindow, TiesGoToSmallestIndex) {
    const auto table = LossTable::from_rows(names(3), {{{0.5, 0.2, 0.2}}});
    EXPECT_EQ(fixed_window_select(table, 1), 1u);
}

TEST(FixedWindow, ZeroWindowThrows) {
    const auto table = LossTable::from_rows(names(1), {{{0.5}}});
    EXPECT_THROW(fixed_window_select(table, 0), DataError);
}

TEST(FixedWindow, LongWindowPoolsEverythingAndIsInvariant) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t t = 1 + trial % 8;
        const auto table = random_table(rng, t, 4, 4);
        const auto means = window_mean_losses(table, t);
        for (std::size_t r = 0; r < 4; ++r) {
            oracle::Batches col;
            for (std::size_t j = 0; j < t; ++j) col.push_back(table.column(j, r));
            ASSERT_LE(oracle::rel_err(means[r], oracle::flatten(col, t).mean), 1e-12);
        }
        const auto pick = fixed_window_select(table, t);
        for (std::size_t k : {t + 1, t + 7, std::size_t{256}}) {
            ASSERT_EQ(fixed_window_select(table, k), pick);
            ASSERT_EQ(window_mean_losses(table, k), means);
        }
    }
}

// ---------------------------------------------------------------------------
// shift invariance

TEST(ShiftInvariance, WinnersUnchangedByConstantOffset) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + trial % 6;
        const auto table = dyadic_table(rng, 1 + trial % 10, m, 0.0);
        const double c = static_cast<double>(trial % 5) - 2.0;
        const auto moved = shifted(table, c);
        ASSERT_EQ(compare_pair(table, 0, 1, ArwConfig{}).winner,
                  compare_pair(moved, 0, 1, ArwConfig{}).winner);
        ASSERT_EQ(tournament(table, ArwConfig{}).champion, tournament(moved, ArwConfig{}).champion);
        for (std::size_t k : {1u, 3u, 64u})
            ASSERT_EQ(fixed_window_select(table, k), fixed_window_select(moved, k));
    }
}

// ---------------------------------------------------------------------------
// LossTable

TEST(LossTable, RejectsRaggedRows) {
    EXPECT_THROW(LossTable::from_rows(names(2), {{{0.1, 0.2}, {0.3}}}), DataError);
    EXPECT_THROW(LossTable::from_rows(names(2), {{}}), DataError);
    EXPECT_THROW(LossTable::from_rows({}, {{{0.1}}}), DataError);
}

TEST(LossTable, RangeCheck) {
    const auto table = LossTable::from_rows(names(2), {{{0.1, 0.2}, {0.3, 1.5}}});
    EXPECT_THROW(table.check_range(0.0, 1.0), DataError);
    EXPECT_NO_THROW(table.check_range(0.0, 2.0));
}

TEST(LossTable, Accessors) {
    const auto table = LossTable::from_rows({"x", "y"}, {{{0.1, 0.2}, {0.3, 0.4}}, {{0.5, 0.6}}});
    EXPECT_EQ(table.num_periods(), 2u);
    EXPECT_EQ(table.num_samples(0), 2u);
    EXPECT_EQ(table.loss(0, 1, 1), 0.4);
    EXPECT_EQ(table.column(0, 0), (std::vector<double>{0.1, 0.3}));
    EXPECT_EQ(table.find_model("y"), 1u);
    EXPECT_FALSE(table.find_model("z").has_value());
    EXPECT_EQ(table.prefix(1).num_periods(), 1u);
    EXPECT_THROW(table.prefix(3), DataError);
}
