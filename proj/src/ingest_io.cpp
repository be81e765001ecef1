#include "arw/ingest_io.hpp"

#include "arw/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace arw {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool getline_clean(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool parse_double(const std::string& text, double& out) {
    std::string s = trim(text);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_index(const std::string& text, long long& out) {
    const std::string s = trim(text);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && out >= 1;
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

void expect_header(std::istream& in, const std::vector<std::string>& expected,
                   std::size_t& line_no) {
    std::string line;
    while (getline_clean(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        for (auto& f : fields) f = trim(f);
        if (fields != expected) {
            std::string want;
            for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
            throw DataError("bad header '" + line + "', expected '" + want + "'" + at_line(line_no));
        }
        return;
    }
    throw DataError("empty file");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "': " + std::strerror(errno));
    }
    return in;
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
    try {
        return fn();
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return quote(std::get<std::string>(c));
}

Cell csv_parse_cell(const std::string& field, bool quoted, std::size_t line_no) {
    if (quoted) return Cell(field);
    double v = 0.0;
    if (!parse_double(field, v)) {
        throw DataError("non-numeric unquoted cell '" + field + "'" + at_line(line_no));
    }
    return Cell(v);
}

using ojson = nlohmann::ordered_json;

ojson json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return ojson(*d);
    return ojson(std::get<std::string>(c));
}

Cell json_parse_cell(const ojson& j) {
    if (j.is_string()) return Cell(j.get<std::string>());
    if (j.is_number()) return Cell(j.get<double>());
    if (j.is_null()) return Cell(std::numeric_limits<double>::quiet_NaN());
    throw DataError("unsupported JSON cell: " + j.dump());
}

} // namespace

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::vector<std::string> split_csv_line(const std::string& line, std::vector<bool>* quoted) {
    std::vector<std::string> fields;
    if (quoted) quoted->clear();
    std::string cur;
    bool in_quotes = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && trim(cur).empty()) {
            cur.clear();
            in_quotes = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            if (quoted) quoted->push_back(was_quoted);
            cur.clear();
            was_quoted = false;
        } else if (!(was_quoted && (c == ' ' || c == '\t'))) {
            cur += c;
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field");
    fields.push_back(std::move(cur));
    if (quoted) quoted->push_back(was_quoted);
    return fields;
}

SummarySeries read_samples(std::istream& in) {
    std::size_t line_no = 0;
    expect_header(in, {"period", "value"}, line_no);

    std::map<long long, std::vector<double>> batches;
    std::string line;
    while (getline_clean(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) throw DataError("expected 2 fields" + at_line(line_no));
        long long period = 0;
        double value = 0.0;
        if (!parse_index(f[0], period)) {
            throw DataError("invalid period '" + f[0] + "'" + at_line(line_no));
        }
        if (!parse_double(f[1], value) || !std::isfinite(value)) {
            throw DataError("non-numeric value '" + f[1] + "'" + at_line(line_no));
        }
        batches[period].push_back(value);
    }
    if (batches.empty()) throw DataError("no data rows");

    SummarySeries series;
    long long expected = 1;
    for (auto& [period, values] : batches) {
        if (period != expected) throw DataError("non-contiguous periods");
        ++expected;
        // Sorting makes the summary independent of row order.
        std::sort(values.begin(), values.end());
        series.push_back(summarize_batch(values));
    }
    return series;
}

SummarySeries read_samples(const std::filesystem::path& path) {
    return with_path(path, [&] {
        auto in = open_input(path);
        return read_samples(in);
    });
}

LossTable read_losses(std::istream& in) {
    std::size_t line_no = 0;
    expect_header(in, {"period", "sample", "model", "loss"}, line_no);

    std::vector<std::string> models;
    std::map<std::string, std::size_t> model_index;
    // (period, sample) -> model index -> loss
    std::map<std::pair<long long, long long>, std::map<std::size_t, double>> cells;

    std::string line;
    while (getline_clean(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 4) throw DataError("expected 4 fields" + at_line(line_no));
        long long period = 0;
        long long sample = 0;
        double loss = 0.0;
        if (!parse_index(f[0], period)) {
            throw DataError("invalid period '" + f[0] + "'" + at_line(line_no));
        }
        if (!parse_index(f[1], sample)) {
            throw DataError("invalid sample '" + f[1] + "'" + at_line(line_no));
        }
        const std::string model = trim(f[2]);
        if (model.empty()) throw DataError("empty model name" + at_line(line_no));
        if (!parse_double(f[3], loss) || !std::isfinite(loss)) {
            throw DataError("non-numeric loss '" + f[3] + "'" + at_line(line_no));
        }
        auto [it, inserted] = model_index.emplace(model, models.size());
        if (inserted) models.push_back(model);
        auto& row = cells[{period, sample}];
        if (!row.emplace(it->second, loss).second) {
            throw DataError("duplicate row for (period " + std::to_string(period) + ", sample " +
                            std::to_string(sample) + ", model " + model + ")" + at_line(line_no));
        }
    }
    if (cells.empty()) throw DataError("no data rows");

    std::vector<LossTable::Period> periods;
    long long current = 0;
    for (const auto& [key, row] : cells) {
        const auto [period, sample] = key;
        if (row.size() != models.size()) {
            for (std::size_t r = 0; r < models.size(); ++r) {
                if (!row.count(r)) {
                    throw DataError("missing loss for (period " + std::to_string(period) +
                                    ", sample " + std::to_string(sample) + ", model " +
                                    models[r] + ")");
                }
            }
        }
        if (period != current) {
            if (period != current + 1) throw DataError("non-contiguous periods");
            current = period;
            periods.emplace_back();
        }
        auto& p = periods.back();
        ++p.samples;
        for (const auto& [r, v] : row) p.values.push_back(v);
    }
    return LossTable(std::move(models), std::move(periods));
}

LossTable read_losses(const std::filesystem::path& path) {
    return with_path(path, [&] {
        auto in = open_input(path);
        return read_losses(in);
    });
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_report(const Report& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ojson meta = ojson::object();
        for (const auto& [k, v] : report.meta) meta[k] = json_cell(v);
        ojson rows = ojson::array();
        for (const auto& row : report.rows) {
            ojson r = ojson::array();
            for (const auto& c : row) r.push_back(json_cell(c));
            rows.push_back(std::move(r));
        }
        ojson doc = ojson::object();
        doc["kind"] = report.kind;
        doc["meta"] = std::move(meta);
        doc["columns"] = report.columns;
        doc["rows"] = std::move(rows);
        return doc.dump(2) + "\n";
    }

    std::string out;
    if (!report.kind.empty()) out += "#kind," + quote(report.kind) + "\n";
    for (const auto& [k, v] : report.meta) out += "#" + k + "," + csv_cell(v) + "\n";
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        out += (i ? "," : "") + report.columns[i];
    }
    out += "\n";
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
    }
    return out;
}

Report parse_report(const std::string& text, ReportFormat format) {
    Report report;
    if (format == ReportFormat::json) {
        ojson doc;
        try {
            doc = ojson::parse(text);
        } catch (const ojson::exception& e) {
            throw DataError(std::string("invalid JSON report: ") + e.what());
        }
        try {
            report.kind = doc.at("kind").get<std::string>();
            for (const auto& [k, v] : doc.at("meta").items()) {
                report.meta.emplace_back(k, json_parse_cell(v));
            }
            report.columns = doc.at("columns").get<std::vector<std::string>>();
            for (const auto& r : doc.at("rows")) {
                std::vector<Cell> row;
                for (const auto& c : r) row.push_back(json_parse_cell(c));
                report.rows.push_back(std::move(row));
            }
        } catch (const ojson::exception& e) {
            throw DataError(std::string("malformed JSON report: ") + e.what());
        }
        return report;
    }

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<bool> quoted;
    while (getline_clean(in, line)) {
        ++line_no;
        if (!have_header && !line.empty() && line.front() == '#') {
            const auto f = split_csv_line(line.substr(1), &quoted);
            if (f.size() != 2) throw DataError("bad metadata line" + at_line(line_no));
            if (f[0] == "kind") {
                report.kind = f[1];
            } else {
                report.meta.emplace_back(f[0], csv_parse_cell(f[1], quoted[1], line_no));
            }
            continue;
        }
        if (!have_header) {
            report.columns = split_csv_line(line);
            if (report.columns.size() == 1 && report.columns[0].empty()) report.columns.clear();
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_csv_line(line, &quoted);
        std::vector<Cell> row;
        row.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            row.push_back(csv_parse_cell(f[i], quoted[i], line_no));
        }
        report.rows.push_back(std::move(row));
    }
    if (!have_header) throw DataError("CSV report has no header");
    return report;
}

void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format) {
    const std::string text = format_report(report, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    }
    out << text;
    out.flush();
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

Report read_report(const std::filesystem::path& path, ReportFormat format) {
    return with_path(path, [&] {
        auto in = open_input(path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_report(ss.str(), format);
    });
}

} // namespace arw
