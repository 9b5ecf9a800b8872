#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cvsnpm/errors.hpp"

namespace cvsnpm {

// Column-major numeric matrix: m instances (rows) by n named variables
// (columns). Valid datasets have finite entries, m >= 4, n >= 3 and no
// constant column.
struct Dataset {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns; // columns[c][r]

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t cols() const { return columns.size(); }

    // Throws DatasetError on the first violated invariant.
    void validate() const;
};

struct CsvOptions {
    bool has_header = true;
    std::vector<std::string> drop_columns;
};

// Comma-separated, '.' decimal separator, UTF-8, optional header row.
// Headerless files get synthetic names v0..v{n-1}. Parse failures report
// the offending row and column.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Header row of names plus one line per instance, shortest round-trip
// decimal representation (load_csv(save_csv(d)) reproduces d exactly).
void save_csv(const Dataset& data, const std::filesystem::path& path);

double column_mean(const std::vector<double>& column);
double column_stddev(const std::vector<double>& column);

} // namespace cvsnpm
