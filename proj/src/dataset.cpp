#include "cvsnpm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cvsnpm/detail/kernels.hpp"

namespace cvsnpm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        throw DatasetError("cannot parse '" + cell + "' as a number at data row " +
                           std::to_string(row + 1) + ", column '" + column + "'");
    }
    return value;
}

} // namespace

void Dataset::validate() const {
    if (cols() < 3) {
        throw DatasetError("need at least 3 variables, got " + std::to_string(cols()));
    }
    if (rows() < 4) {
        throw DatasetError("need at least 4 instances, got " + std::to_string(rows()));
    }
    if (names.size() != cols()) {
        throw DatasetError("have " + std::to_string(names.size()) + " names for " +
                           std::to_string(cols()) + " columns");
    }
    for (std::size_t c = 0; c < cols(); ++c) {
        if (columns[c].size() != rows()) {
            throw DatasetError("column '" + names[c] + "' has " +
                               std::to_string(columns[c].size()) + " rows, expected " +
                               std::to_string(rows()));
        }
        const auto [lo, hi] = detail::min_max(columns[c].data(), columns[c].size());
        // NaN slips past min/max but poisons a running sum; only then
        // pay for a per-element scan.
        const double total = detail::sum(columns[c].data(), columns[c].size());
        if (!std::isfinite(total)) {
            for (double v : columns[c]) {
                if (!std::isfinite(v)) {
                    throw DatasetError("column '" + names[c] +
                                       "' contains a non-finite value");
                }
            }
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw DatasetError("column '" + names[c] + "' contains a non-finite value");
        }
        if (lo == hi) {
            throw DatasetError("column '" + names[c] + "' is constant (zero variance)");
        }
    }
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open '" + path.string() + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw DatasetError("'" + path.string() + "' is empty");

    std::vector<std::string> file_names;
    std::size_t first_data_line = 0;
    if (options.has_header) {
        file_names = split_fields(lines[0]);
        first_data_line = 1;
        for (std::size_t c = 0; c < file_names.size(); ++c) {
            if (file_names[c].empty()) {
                throw DatasetError("empty column name at header position " + std::to_string(c + 1));
            }
            if (std::count(file_names.begin(), file_names.end(), file_names[c]) > 1) {
                throw DatasetError("duplicate column name '" + file_names[c] + "'");
            }
        }
    } else {
        const std::size_t n_fields = split_fields(lines[0]).size();
        for (std::size_t c = 0; c < n_fields; ++c) file_names.push_back("v" + std::to_string(c));
    }

    // Resolve drops up front: dropped cells are never parsed, so a text
    // column can be removed by flag.
    std::vector<bool> keep(file_names.size(), true);
    for (const auto& label : options.drop_columns) {
        const auto it = std::find(file_names.begin(), file_names.end(), label);
        if (it == file_names.end()) {
            throw DatasetError("drop column '" + label + "' not found");
        }
        keep[static_cast<std::size_t>(it - file_names.begin())] = false;
    }

    Dataset data;
    for (std::size_t c = 0; c < file_names.size(); ++c) {
        if (keep[c]) data.names.push_back(file_names[c]);
    }
    data.columns.assign(data.names.size(), {});
    for (std::size_t li = first_data_line; li < lines.size(); ++li) {
        const std::size_t row = li - first_data_line;
        const auto fields = split_fields(lines[li]);
        if (fields.size() != file_names.size()) {
            throw DatasetError("data row " + std::to_string(row + 1) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(file_names.size()));
        }
        std::size_t out = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (keep[c]) {
                data.columns[out++].push_back(parse_cell(fields[c], row, file_names[c]));
            }
        }
    }

    data.validate();
    return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetError("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < data.cols(); ++c) {
        out << (c ? "," : "") << data.names[c];
    }
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.cols(); ++c) {
            const auto res = std::to_chars(buf, buf + sizeof buf, data.columns[c][r]);
            if (c) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

double column_mean(const std::vector<double>& column) {
    if (column.empty()) return 0.0;
    return detail::sum(column.data(), column.size()) / static_cast<double>(column.size());
}

double column_stddev(const std::vector<double>& column) {
    if (column.empty()) return 0.0;
    const double mean = column_mean(column);
    const double ss = detail::sum_sq_dev(column.data(), column.size(), mean);
    return std::sqrt(ss / static_cast<double>(column.size()));
}

} // namespace cvsnpm
