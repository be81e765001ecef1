#include "arw/loss_table.hpp"

#include "arw/errors.hpp"

#include <cmath>

namespace arw {

LossTable::LossTable(std::vector<std::string> model_names, std::vector<Period> periods)
    : names_(std::move(model_names)), periods_(std::move(periods)) {
    if (names_.empty()) throw DataError("loss table has no models");
    const std::size_t m = names_.size();
    for (std::size_t j = 0; j < periods_.size(); ++j) {
        const auto& p = periods_[j];
        if (p.samples == 0) {
            throw DataError("period " + std::to_string(j + 1) + " has no samples");
        }
        if (p.values.size() != p.samples * m) {
            throw DataError("period " + std::to_string(j + 1) + " is not a " +
                            std::to_string(p.samples) + "x" + std::to_string(m) + " matrix");
        }
    }
}

LossTable LossTable::from_rows(std::vector<std::string> model_names,
                               const std::vector<std::vector<std::vector<double>>>& periods) {
    const std::size_t m = model_names.size();
    std::vector<Period> out;
    out.reserve(periods.size());
    for (std::size_t j = 0; j < periods.size(); ++j) {
        Period p;
        p.samples = periods[j].size();
        for (const auto& r : periods[j]) {
            if (r.size() != m) {
                throw DataError("period " + std::to_string(j + 1) + " has a row with " +
                                std::to_string(r.size()) + " losses, expected " +
                                std::to_string(m));
            }
            p.values.insert(p.values.end(), r.begin(), r.end());
        }
        out.push_back(std::move(p));
    }
    return LossTable(std::move(model_names), std::move(out));
}

double LossTable::loss(std::size_t period, std::size_t sample, std::size_t model) const {
    return row(period, sample)[model];
}

std::span<const double> LossTable::row(std::size_t period, std::size_t sample) const {
    const auto& p = periods_.at(period);
    if (sample >= p.samples) throw DataError("sample index out of range");
    return std::span<const double>(p.values).subspan(sample * names_.size(), names_.size());
}

std::vector<double> LossTable::column(std::size_t period, std::size_t model) const {
    if (model >= names_.size()) throw DataError("model index out of range");
    const auto& p = periods_.at(period);
    std::vector<double> out(p.samples);
    for (std::size_t i = 0; i < p.samples; ++i) out[i] = p.values[i * names_.size() + model];
    return out;
}

std::optional<std::size_t> LossTable::find_model(const std::string& name) const {
    for (std::size_t r = 0; r < names_.size(); ++r) {
        if (names_[r] == name) return r;
    }
    return std::nullopt;
}

void LossTable::check_range(double lo, double hi) const {
    for (std::size_t j = 0; j < periods_.size(); ++j) {
        for (double v : periods_[j].values) {
            if (!(v >= lo && v <= hi)) {
                throw DataError("loss " + std::to_string(v) + " in period " +
                                std::to_string(j + 1) + " outside declared range");
            }
        }
    }
}

LossTable LossTable::prefix(std::size_t count) const {
    if (count > periods_.size()) throw DataError("prefix longer than table");
    return LossTable(names_, std::vector<Period>(periods_.begin(), periods_.begin() + count));
}

} // namespace arw
