#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arw {

/// Loss of every candidate model on every sample, grouped by period.
///
/// Period j (0-based) is a samples x models matrix stored row-major, so
/// row(j, i) holds the losses of all models on sample i.
class LossTable {
public:
    struct Period {
        std::size_t samples = 0;
        std::vector<double> values;  // samples * models, row-major

        bool operator==(const Period&) const = default;
    };

    LossTable() = default;

    /// Throws DataError when a period is empty or its size is not a multiple
    /// of the model count.
    LossTable(std::vector<std::string> model_names, std::vector<Period> periods);

    /// Builds a table from per-period row lists; each row has one loss per model.
    static LossTable from_rows(std::vector<std::string> model_names,
                               const std::vector<std::vector<std::vector<double>>>& periods);

    std::size_t num_periods() const { return periods_.size(); }
    std::size_t num_models() const { return names_.size(); }
    std::size_t num_samples(std::size_t period) const { return periods_.at(period).samples; }

    double loss(std::size_t period, std::size_t sample, std::size_t model) const;
    std::span<const double> row(std::size_t period, std::size_t sample) const;

    /// All losses of one model in one period.
    std::vector<double> column(std::size_t period, std::size_t model) const;

    const std::vector<std::string>& model_names() const { return names_; }
    std::optional<std::size_t> find_model(const std::string& name) const;

    /// Throws DataError unless every entry lies in [lo, hi].
    void check_range(double lo, double hi) const;

    /// Same models, periods 0..count-1 only.
    LossTable prefix(std::size_t count) const;

    bool operator==(const LossTable&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<Period> periods_;
};

} // namespace arw
