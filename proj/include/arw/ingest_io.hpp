#pragma once

// File formats.
//
// Input CSVs are comma-separated UTF-8 with a mandatory header:
//   samples:  period,value
//   losses:   period,sample,model,loss
// Periods must cover 1..t without gaps. Row order does not matter.
//
// Reports are written as CSV or JSON. In CSV, metadata lines "#key,value"
// precede the header, strings are always double-quoted, and numbers use 17
// significant digits so every double reads back exactly. See
// docs/formats.md for the full schemas.

#include "arw/loss_table.hpp"
#include "arw/report.hpp"
#include "arw/window_stats.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace arw {

enum class ReportFormat { csv, json };

ReportFormat parse_format(const std::string& name);

/// Splits one CSV record, honoring double quotes. `quoted[i]` tells whether
/// field i was quoted.
std::vector<std::string> split_csv_line(const std::string& line,
                                        std::vector<bool>* quoted = nullptr);

SummarySeries read_samples(std::istream& in);
SummarySeries read_samples(const std::filesystem::path& path);

LossTable read_losses(std::istream& in);
LossTable read_losses(const std::filesystem::path& path);

std::string format_report(const Report& report, ReportFormat format);
Report parse_report(const std::string& text, ReportFormat format);

void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format);
Report read_report(const std::filesystem::path& path, ReportFormat format);

/// Decimal with 17 significant digits; reads back to the same double.
std::string format_number(double value);

} // namespace arw
