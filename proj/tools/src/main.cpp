#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gfb/cli/commands.hpp"
#include "gfb/errors.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

gfb::cli::Timing parse_timing(const std::string& s) {
    return s == "none" ? gfb::cli::Timing::none : gfb::cli::Timing::wall;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized forward-backward splitting and baseline solvers"};
    app.require_subcommand(1);

    gfb::cli::SolveCommand solve;
    std::string solve_timing = "wall";
    std::uint64_t solve_seed = 0;
    double solve_gamma = 0.0, solve_lambda = 0.0;
    auto* s = app.add_subcommand("solve", "Run one solver on a restoration config");
    s->add_option("--config", solve.config, "Problem config (key = value)")->required()->check(CLI::ExistingFile);
    s->add_option("--algo", solve.algo, "gfb, fb, dr, chpo, hpe or cope")->capture_default_str();
    s->add_option("--iters", solve.iterations, "Iterations")->capture_default_str();
    s->add_option("--out", solve.out, "Output directory")->required();
    auto* og = s->add_option("--gamma", solve_gamma, "Step size (tau for chpo)");
    auto* ol = s->add_option("--lambda", solve_lambda, "Relaxation");
    auto* os = s->add_option("--seed", solve_seed, "Override the config seed");
    s->add_option("--threads", solve.threads, "Workers for per-term updates")->capture_default_str();
    s->add_option("--timing", solve_timing, "wall, or none to write time_ms = 0")
        ->check(CLI::IsMember({"wall", "none"}))
        ->capture_default_str();

    gfb::cli::BenchCommand bench;
    std::string bench_algos = "gfb,dr,chpo,hpe,cope";
    std::string bench_timing = "wall";
    std::uint64_t bench_seed = 0;
    auto* b = app.add_subcommand("bench", "Run several solvers and write decay curves");
    b->add_option("--config", bench.config, "Problem config")->required()->check(CLI::ExistingFile);
    b->add_option("--algos", bench_algos, "Comma-separated algorithms")->capture_default_str();
    b->add_option("--iters", bench.iterations, "Iterations")->capture_default_str();
    b->add_option("--out", bench.out, "Output directory")->required();
    auto* bs = b->add_option("--seed", bench_seed, "Override the config seed");
    b->add_option("--threads", bench.threads, "Also time each solver with this many workers")
        ->capture_default_str();
    b->add_option("--timing", bench_timing, "wall or none")
        ->check(CLI::IsMember({"wall", "none"}))
        ->capture_default_str();

    gfb::cli::ProxSumCommand prox;
    auto* p = app.add_subcommand("proxsum", "prox of a sum of regularizers on a PGM image");
    p->add_option("--in", prox.in, "Input PGM")->required()->check(CLI::ExistingFile);
    p->add_option("--reg", prox.reg, "l1:mu, l12:mu:S, box[:lo:hi], nonneg (comma separated)")
        ->required();
    p->add_option("--out", prox.out, "Output PGM")->required();
    p->add_option("--csv", prox.csv, "Also write full-precision values");
    p->add_option("--iters", prox.iterations, "Iteration budget")->capture_default_str();
    p->add_option("--tol", prox.tol, "Fixed-point residual tolerance")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s) {
            if (*og) solve.gamma = solve_gamma;
            if (*ol) solve.lambda = solve_lambda;
            if (*os) solve.seed = solve_seed;
            solve.timing = parse_timing(solve_timing);
            gfb::cli::cmd_solve(solve);
        } else if (*b) {
            bench.algos = split_list(bench_algos);
            if (*bs) bench.seed = bench_seed;
            bench.timing = parse_timing(bench_timing);
            const auto outcome = gfb::cli::cmd_bench(bench);
            std::cout << "psi_min = " << gfb::cli::format_double(outcome.psi_min) << "\n";
        } else if (*p) {
            gfb::cli::cmd_proxsum(prox);
        }
    } catch (const gfb::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const gfb::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
