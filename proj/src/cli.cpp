#include "cvsnpm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvsnpm/graph.hpp"
#include "cvsnpm/synth.hpp"

namespace cvsnpm::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double_exact(const std::string& cell, const fs::path& path) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DatasetError("cannot parse '" + cell + "' in '" + path.string() + "'");
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

template <typename T, typename Format>
void write_labeled_csv(const Matrix<T>& m, const std::vector<std::string>& names,
                       const fs::path& path, Format format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetError("cannot write '" + path.string() + "'");
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << names[r];
        for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << format(m(r, c));
        out << '\n';
    }
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

json truth_to_json(const GroundTruth& truth, const std::vector<std::string>& names,
                   const SynthSpec& spec) {
    json adjacency = json::array();
    for (std::size_t p = 0; p < truth.adjacency.rows(); ++p) {
        json row = json::array();
        for (std::size_t q = 0; q < truth.adjacency.cols(); ++q) {
            row.push_back(truth.adjacency(p, q));
        }
        adjacency.push_back(std::move(row));
    }
    return json{{"m", spec.instances},
                {"n", spec.variables},
                {"seed", spec.seed},
                {"names", names},
                {"source_count", truth.source_count},
                {"adjacency", std::move(adjacency)},
                {"confounders", truth.confounders},
                {"kinds", truth.dist_kinds}};
}

GroundTruth truth_from_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open '" + path.string() + "'");
    json doc = json::parse(in);

    GroundTruth truth;
    const auto& adjacency = doc.at("adjacency");
    const std::size_t n = adjacency.size();
    truth.adjacency = Matrix<double>(n, n);
    for (std::size_t p = 0; p < n; ++p) {
        if (adjacency[p].size() != n) {
            throw DatasetError("ragged adjacency in '" + path.string() + "'");
        }
        for (std::size_t q = 0; q < n; ++q) truth.adjacency(p, q) = adjacency[p][q].get<double>();
    }
    truth.confounders = doc.at("confounders").get<std::vector<double>>();
    truth.dist_kinds = doc.at("kinds").get<std::vector<int>>();
    truth.source_count = doc.value("source_count", std::size_t{0});
    return truth;
}

} // namespace

void write_matrix_csv(const Matrix<double>& m, const std::vector<std::string>& names,
                      const fs::path& path) {
    write_labeled_csv(m, names, path, [](double v) { return format_double(v); });
}

void write_matrix_csv(const Matrix<std::uint32_t>& m, const std::vector<std::string>& names,
                      const fs::path& path) {
    write_labeled_csv(m, names, path, [](std::uint32_t v) { return std::to_string(v); });
}

void write_row_csv(const std::vector<double>& row, const std::vector<std::string>& names,
                   const std::string& row_label, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetError("cannot write '" + path.string() + "'");
    for (const auto& name : names) out << ',' << name;
    out << '\n' << row_label;
    for (double v : row) out << ',' << format_double(v);
    out << '\n';
}

std::pair<Matrix<double>, std::vector<std::string>> read_matrix_csv(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw DatasetError("'" + path.string() + "' is empty");
    auto header = split_csv_line(lines[0]);
    header.erase(header.begin()); // corner cell
    const std::size_t n = header.size();
    if (lines.size() != n + 1) {
        throw DatasetError("'" + path.string() + "' has " + std::to_string(lines.size() - 1) +
                           " rows for " + std::to_string(n) + " columns");
    }
    Matrix<double> m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto fields = split_csv_line(lines[r + 1]);
        if (fields.size() != n + 1) {
            throw DatasetError("ragged row in '" + path.string() + "'");
        }
        for (std::size_t c = 0; c < n; ++c) m(r, c) = parse_double_exact(fields[c + 1], path);
    }
    return {std::move(m), std::move(header)};
}

std::pair<std::vector<double>, std::vector<std::string>> read_row_csv(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.size() != 2) throw DatasetError("'" + path.string() + "' is not a 1-row matrix");
    auto header = split_csv_line(lines[0]);
    header.erase(header.begin());
    auto fields = split_csv_line(lines[1]);
    if (fields.size() != header.size() + 1) {
        throw DatasetError("ragged row in '" + path.string() + "'");
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < header.size(); ++c) {
        row.push_back(parse_double_exact(fields[c + 1], path));
    }
    return {std::move(row), std::move(header)};
}

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open '" + path.string() + "'");
    std::uint64_t hash = 14695981039346656037ull;
    char chunk[4096];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
        for (std::streamsize b = 0; b < in.gcount(); ++b) {
            hash ^= static_cast<unsigned char>(chunk[b]);
            hash *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a:") + buf;
}

int run_learn(const LearnArgs& args) {
    try {
        const auto t0 = Clock::now();
        CsvOptions options;
        options.has_header = !args.no_header;
        options.drop_columns = args.drop_columns;
        const Dataset data = load_csv(args.input, options);

        LearnConfig config;
        config.seed = args.seed;
        config.eps_tie = args.eps_tie;
        config.min_strength = args.min_strength;
        config.min_pcnt = args.min_pcnt;
        config.parallel = args.parallel;

        const auto t1 = Clock::now();
        const LearnState output = learn(data, config);
        const auto t2 = Clock::now();
        const CausalDag dag = to_dag(output, data.names);
        const auto t3 = Clock::now();

        // All computation succeeded; only now touch the filesystem.
        const fs::path dir(args.output_dir);
        fs::create_directories(dir);
        write_matrix_csv(output.strn, data.names, dir / "strn.csv");
        write_matrix_csv(output.drct, data.names, dir / "drct.csv");
        write_matrix_csv(output.pcnt, data.names, dir / "pcnt.csv");
        write_row_csv(output.err, data.names, "err", dir / "err.csv");
        {
            std::ofstream dot(dir / "graph.dot", std::ios::binary);
            dot << export_dot(dag);
        }

        const auto seconds = [](auto a, auto b) {
            return std::chrono::duration<double>(b - a).count();
        };
        const json manifest{
            {"command", "learn"},
            {"config",
             {{"input", args.input},
              {"output_dir", args.output_dir},
              {"seed", args.seed},
              {"eps_tie", args.eps_tie},
              {"min_strength", args.min_strength},
              {"min_pcnt", args.min_pcnt},
              {"drop_columns", args.drop_columns},
              {"parallel", args.parallel},
              {"has_header", !args.no_header}}},
            {"input_digest", file_digest(args.input)},
            {"timings",
             {{"load_s", seconds(t0, t1)},
              {"learn_s", seconds(t1, t2)},
              {"dag_s", seconds(t2, t3)}}},
            {"skipped_triples", output.skipped.size()},
            {"cycle_breaks", dag.removed_edges.size()},
        };
        std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
        return kExitOk;
    } catch (const EmptyResult& e) {
        std::cerr << "learn: " << e.what() << '\n';
        return kExitEmptyResult;
    } catch (const Error& e) {
        std::cerr << "learn: " << e.what() << '\n';
        return kExitInputError;
    }
}

int run_synth(const SynthArgs& args) {
    try {
        SynthSpec spec;
        spec.instances = args.m;
        spec.variables = args.n;
        spec.seed = args.seed;
        if (spec.variables < 5) {
            throw InvalidArgument("need at least 5 variables so the 40% source split is >= 2");
        }
        const auto [data, truth] = synth_dataset(spec);

        const std::string prefix = args.out_prefix;
        save_csv(data, prefix + "_data.csv");
        std::ofstream truth_out(prefix + "_truth.json");
        if (!truth_out) throw DatasetError("cannot write '" + prefix + "_truth.json'");
        truth_out << truth_to_json(truth, data.names, spec).dump(2) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "synth: " << e.what() << '\n';
        return kExitInputError;
    }
}

int run_bench(const BenchArgs& args) {
    try {
        std::ostringstream table;
        table << "n\\m";
        for (std::size_t m : args.m_list) table << ',' << m;
        table << '\n';
        for (std::size_t n : args.n_list) {
            table << n;
            for (std::size_t m : args.m_list) {
                SynthSpec spec;
                spec.instances = m;
                spec.variables = n;
                spec.seed = args.seed;
                const auto [data, truth] = synth_dataset(spec);
                (void)truth;

                std::vector<double> times;
                for (std::size_t rep = 0; rep < std::max<std::size_t>(1, args.repetitions);
                     ++rep) {
                    LearnConfig config;
                    config.seed = args.seed + rep;
                    const auto start = Clock::now();
                    const LearnState output = learn(data, config);
                    const auto stop = Clock::now();
                    (void)output;
                    times.push_back(std::chrono::duration<double>(stop - start).count());
                }
                char cell[32];
                std::snprintf(cell, sizeof cell, "%.6f", median(times));
                table << ',' << cell;
            }
            table << '\n';
        }

        std::cout << table.str();
        if (!args.out_csv.empty()) {
            std::ofstream out(args.out_csv, std::ios::binary);
            if (!out) throw DatasetError("cannot write '" + args.out_csv + "'");
            out << table.str();
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "bench: " << e.what() << '\n';
        return kExitInputError;
    }
}

int run_score(const ScoreArgs& args) {
    try {
        const fs::path dir(args.learned_dir);
        auto [strn, names] = read_matrix_csv(dir / "strn.csv");
        auto [pcnt, pcnt_names] = read_matrix_csv(dir / "pcnt.csv");
        auto [err, err_names] = read_row_csv(dir / "err.csv");
        if (pcnt_names != names || err_names != names) {
            throw DatasetError("matrix files in '" + dir.string() + "' disagree on variables");
        }

        LearnState output(names.size());
        output.strn = std::move(strn);
        output.pcnt = std::move(pcnt);
        output.err = std::move(err);
        const CausalDag dag = to_dag(output, names);

        const GroundTruth truth = truth_from_json(args.truth_file);
        const RecoveryScore score = score_against_truth(dag, truth);

        const json report{{"directed_precision", score.directed_precision},
                          {"directed_recall", score.directed_recall},
                          {"shd", score.shd},
                          {"coefficient_rmse_on_true_edges", score.coefficient_rmse},
                          {"truth_edges", score.truth_edges},
                          {"learned_edges", score.learned_edges},
                          {"correct_edges", score.correct_edges}};
        std::cout << report.dump(2) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "score: " << e.what() << '\n';
        return kExitInputError;
    } catch (const json::exception& e) {
        std::cerr << "score: " << e.what() << '\n';
        return kExitInputError;
    }
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Causal structure learning from collider v-structures with "
                 "negative percentage mapping"};
    app.require_subcommand(1);

    LearnArgs learn_args;
    auto* learn_cmd = app.add_subcommand("learn", "Learn a causal DAG from a CSV matrix");
    learn_cmd->add_option("--input", learn_args.input, "Input CSV file")->required();
    learn_cmd->add_option("--output", learn_args.output_dir, "Output directory")->required();
    learn_cmd->add_option("--seed", learn_args.seed, "Triple visit order seed");
    learn_cmd->add_option("--eps-tie", learn_args.eps_tie, "Tie tolerance for opposing percentages");
    learn_cmd->add_option("--min-strength", learn_args.min_strength,
                          "Minimum |coefficient| for edge emission");
    learn_cmd->add_option("--min-pcnt", learn_args.min_pcnt,
                          "Minimum mapped contribution for edge emission");
    learn_cmd->add_option("--drop-columns", learn_args.drop_columns,
                          "Column labels to drop before learning")
        ->delimiter(',');
    learn_cmd->add_flag("--parallel", learn_args.parallel, "Score triples on all cores");
    learn_cmd->add_flag("--no-header", learn_args.no_header, "Input has no header row");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic benchmark dataset");
    synth_cmd->add_option("--m", synth_args.m, "Instances")->required();
    synth_cmd->add_option("--n", synth_args.n, "Variables")->required();
    synth_cmd->add_option("--seed", synth_args.seed, "Generator seed");
    synth_cmd->add_option("--out", synth_args.out_prefix, "Output prefix")->required();

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Time learn over an (m, n) grid");
    bench_cmd->add_option("--m-list", bench_args.m_list, "Instance counts")->delimiter(',');
    bench_cmd->add_option("--n-list", bench_args.n_list, "Variable counts")->delimiter(',');
    bench_cmd->add_option("--seed", bench_args.seed, "Generator seed");
    bench_cmd->add_option("--reps", bench_args.repetitions, "Repetitions per cell");
    bench_cmd->add_option("--out", bench_args.out_csv, "Also write the table to this file");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "Score a learn output against ground truth");
    score_cmd->add_option("--learned", score_args.learned_dir, "Learn output directory")
        ->required();
    score_cmd->add_option("--truth", score_args.truth_file, "Ground truth JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    if (learn_cmd->parsed()) return run_learn(learn_args);
    if (synth_cmd->parsed()) return run_synth(synth_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
    return run_score(score_args);
}

} // namespace cvsnpm::cli
