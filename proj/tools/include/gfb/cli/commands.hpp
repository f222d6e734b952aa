#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gfb/problems.hpp"

namespace gfb::cli {

/// Per-algorithm parameters; unset fields take the documented defaults.
struct AlgoParams {
    std::optional<double> gamma;     // gfb, fb, dr, cope
    std::optional<double> lambda;    // gfb, fb, dr
    std::optional<double> tau;       // chpo
    double sigma = 1.0;              // chpo
    double theta = 1.0;              // chpo
    double varsigma = 0.9;           // hpe
};

/// Defaults used for the restoration protocol: gfb gamma = 1.8 beta and
/// lambda = 1, dr gamma = 1/n, chpo tau = 0.9 / (sigma (1 + S^2 + 8)),
/// hpe varsigma = 0.9, cope gamma = 0.9 / (1 + S) without TV and
/// 0.9 / (1 + sqrt(S^2 + 8)) with TV.
AlgoParams restoration_defaults(const RestorationProblem& problem, Algorithm algo);

struct RunOptions {
    std::size_t iterations = 1000;
    /// 0 runs exactly `iterations` steps.
    double stop_tol = 0.0;
    std::size_t workers = 1;
    bool record_objective = true;
};

struct SolverRun {
    Algorithm algo = Algorithm::gfb;
    SolveResult result;
    /// The primary unknown extracted from the solver variable.
    Vector primary;
};

/// Runs one solver on the matching form of `forms`.
SolverRun run_solver(const FormSet& forms, Algorithm algo, const AlgoParams& params,
                     const RunOptions& options);

enum class Timing { wall, none };

/// iter,objective,residual,time_ms with 17 significant digits and LF endings.
void write_log_csv(const std::filesystem::path& path, const IterateLog& log, Timing timing);

std::string format_double(double v);

struct SolveCommand {
    std::filesystem::path config;
    std::string algo = "gfb";
    std::size_t iterations = 1000;
    std::filesystem::path out;
    std::optional<double> gamma;
    std::optional<double> lambda;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    Timing timing = Timing::wall;
};

/// Writes log.csv, restored.pgm and summary.txt into `out`.
void cmd_solve(const SolveCommand& cmd);

struct BenchCommand {
    std::filesystem::path config;
    std::vector<std::string> algos;
    std::size_t iterations = 1000;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    /// > 1 adds a second, multi-threaded timing column.
    std::size_t threads = 1;
    Timing timing = Timing::wall;
};

struct BenchOutcome {
    double psi_min = 0.0;
    std::vector<SolverRun> runs;
};

/// Writes <out>/<algo>/{decay.csv,log.csv} and <out>/times.csv.
BenchOutcome cmd_bench(const BenchCommand& cmd);

/// Parses "l1:mu", "l12:mu:S", "box[:lo:hi]", "nonneg", comma separated,
/// into simple terms on an N x N image. "l12:mu:S" expands to the S^2
/// layers of overlapping S x S blocks.
std::vector<ProxFn> parse_regularizers(const std::string& spec, std::size_t n);

struct ProxSumCommand {
    std::filesystem::path in;
    std::string reg;
    std::filesystem::path out;
    std::optional<std::filesystem::path> csv;
    std::size_t iterations = 5000;
    double tol = 1e-12;
};

Vector cmd_proxsum(const ProxSumCommand& cmd);

}  // namespace gfb::cli
