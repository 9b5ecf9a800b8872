#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cvsnpm/learner.hpp"

namespace cvsnpm::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitEmptyResult = 2;

struct LearnArgs {
    std::string input;
    std::string output_dir;
    std::uint64_t seed = 0;
    double eps_tie = 1e-9;
    double min_strength = 0.0;
    double min_pcnt = 0.0;
    std::vector<std::string> drop_columns;
    bool parallel = false;
    bool no_header = false;
};

struct SynthArgs {
    std::size_t m = 500;
    std::size_t n = 10;
    std::uint64_t seed = 0;
    std::string out_prefix;
};

struct BenchArgs {
    std::vector<std::size_t> m_list{500, 1500, 2000, 3000};
    std::vector<std::size_t> n_list{10, 25, 35, 45};
    std::uint64_t seed = 0;
    std::size_t repetitions = 3;
    std::string out_csv; // optional; table always goes to stdout
};

struct ScoreArgs {
    std::string learned_dir;
    std::string truth_file;
};

// Writes strn.csv, drct.csv, pcnt.csv, err.csv, graph.dot and
// manifest.json into the output directory. Nothing is written on failure.
int run_learn(const LearnArgs& args);

// Writes <prefix>_data.csv and <prefix>_truth.json.
int run_synth(const SynthArgs& args);

// Times learn end-to-end over the (m, n) grid, prints a CSV table of
// median seconds (rows = n, columns = m).
int run_bench(const BenchArgs& args);

// Prints recovery metrics for a learn output directory against a ground
// truth file as a single JSON object.
int run_score(const ScoreArgs& args);

// Full argv interface: subcommands learn / synth / bench / score.
int run(int argc, const char* const* argv);

// Matrix CSV with variable names as header row and first column, values
// in shortest round-trip decimal form.
void write_matrix_csv(const Matrix<double>& m, const std::vector<std::string>& names,
                      const std::filesystem::path& path);
void write_matrix_csv(const Matrix<std::uint32_t>& m, const std::vector<std::string>& names,
                      const std::filesystem::path& path);
void write_row_csv(const std::vector<double>& row, const std::vector<std::string>& names,
                   const std::string& row_label, const std::filesystem::path& path);
std::pair<Matrix<double>, std::vector<std::string>> read_matrix_csv(
    const std::filesystem::path& path);
std::pair<std::vector<double>, std::vector<std::string>> read_row_csv(
    const std::filesystem::path& path);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// FNV-1a 64-bit digest of a file's bytes, as "fnv1a:<hex>".
std::string file_digest(const std::filesystem::path& path);

} // namespace cvsnpm::cli
