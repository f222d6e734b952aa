#include "gfb/cli/commands.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfb/errors.hpp"
#include "gfb/pgm.hpp"

namespace gfb::cli {

namespace fs = std::filesystem;

AlgoParams restoration_defaults(const RestorationProblem& problem, Algorithm algo) {
    AlgoParams p;
    const double s = static_cast<double>(problem.spec.S);
    const bool tv = problem.spec.nu > 0.0;
    switch (algo) {
        case Algorithm::chpo: p.tau = 0.9 / (p.sigma * (1.0 + s * s + 8.0)); break;
        case Algorithm::cope: p.gamma = tv ? 0.9 / (1.0 + std::sqrt(s * s + 8.0)) : 0.9 / (1.0 + s); break;
        default: break;
    }
    return p;
}

namespace {

RunControl control(const RunOptions& o) {
    RunControl rc;
    rc.max_iter = o.iterations;
    rc.stop_tol = o.stop_tol;
    rc.record_objective = o.record_objective;
    rc.workers = o.workers;
    return rc;
}

void reject(bool set, Algorithm algo, const char* what) {
    if (set) throw ConfigError(to_string(algo) + " does not take " + what);
}

}  // namespace

SolverRun run_solver(const FormSet& forms, Algorithm algo, const AlgoParams& params,
                     const RunOptions& options) {
    const SolverForm& form = forms.for_algorithm(algo);
    SolverRun run;
    run.algo = algo;
    switch (algo) {
        case Algorithm::gfb: {
            reject(params.tau.has_value(), algo, "tau");
            const GfbProblem problem = to_gfb_problem(form.problem);
            SolverConfig cfg = SolverConfig::defaults(problem.beta());
            if (params.gamma) cfg.gamma = constant_schedule(*params.gamma);
            if (params.lambda) cfg.lambda = constant_schedule(*params.lambda);
            cfg.n = problem.A.size();
            cfg.max_iter = options.iterations;
            cfg.stop_tol = options.stop_tol;
            cfg.workers = options.workers;
            cfg.record_objective = options.record_objective;
            run.result = gfb_solve(problem, std::move(cfg));
            break;
        }
        case Algorithm::fb: {
            reject(params.tau.has_value(), algo, "tau");
            FbParams p;
            p.gamma = params.gamma;
            p.lambda = params.lambda.value_or(1.0);
            p.run = control(options);
            run.result = fb_solve(form.problem, p);
            break;
        }
        case Algorithm::dr: {
            reject(params.tau.has_value(), algo, "tau");
            DrParams p;
            p.gamma = params.gamma;
            if (params.lambda) p.lambda = constant_schedule(*params.lambda);
            p.run = control(options);
            run.result = dr_solve(form.problem, p);
            break;
        }
        case Algorithm::chpo: {
            reject(params.gamma.has_value(), algo, "gamma (use tau)");
            reject(params.lambda.has_value(), algo, "lambda");
            ChPoParams p;
            p.sigma = params.sigma;
            p.tau = params.tau;
            p.theta = params.theta;
            p.run = control(options);
            run.result = chpo_solve(form.problem, p);
            break;
        }
        case Algorithm::hpe: {
            reject(params.gamma.has_value(), algo, "gamma (its step follows from varsigma)");
            reject(params.lambda.has_value(), algo, "lambda");
            HpeParams p;
            p.varsigma = params.varsigma;
            p.run = control(options);
            run.result = hpe_solve(form.problem, p);
            break;
        }
        case Algorithm::cope: {
            reject(params.lambda.has_value(), algo, "lambda");
            CoPeParams p;
            p.gamma = params.gamma;
            p.run = control(options);
            run.result = cope_solve(form.problem, p);
            break;
        }
    }
    run.primary = form.primary(run.result.x);
    return run;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_log_csv(const fs::path& path, const IterateLog& log, Timing timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "iter,objective,residual,time_ms\n";
    for (const auto& r : log.records) {
        out << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.residual) << ','
            << format_double(timing == Timing::wall ? r.time_ms : 0.0) << '\n';
    }
}

namespace {

RestorationProblem load_problem(const fs::path& config, std::optional<std::uint64_t> seed) {
    RestorationSpec spec = load_restoration_config(config);
    if (seed) spec.seed = *seed;
    return build_restoration(spec);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

double total_time(const SolveResult& r) {
    return r.log.empty() ? 0.0 : r.log.back().time_ms;
}

}  // namespace

void cmd_solve(const SolveCommand& cmd) {
    const Algorithm algo = parse_algorithm(cmd.algo);
    if (cmd.iterations == 0) throw ConfigError("--iters must be at least 1");
    const RestorationProblem problem = load_problem(cmd.config, cmd.seed);
    if (algo == Algorithm::fb && problem.num_terms(algo) != 1) {
        throw ConfigError("fb handles a single non-smooth term, this problem has n = " +
                          std::to_string(problem.num_terms(algo)) + "; use gfb");
    }
    AlgoParams params = restoration_defaults(problem, algo);
    if (cmd.gamma) {
        if (algo == Algorithm::chpo) {
            params.tau = cmd.gamma;
        } else {
            params.gamma = cmd.gamma;
        }
    }
    if (cmd.lambda) params.lambda = cmd.lambda;
    RunOptions options;
    options.iterations = cmd.iterations;
    options.workers = cmd.threads;
    const SolverRun run = run_solver(problem.forms, algo, params, options);

    ensure_dir(cmd.out);
    write_log_csv(cmd.out / "log.csv", run.result.log, cmd.timing);
    const Vector restored = problem.image_of(run.primary);
    write_pgm(cmd.out / "restored.pgm", restored);

    std::ofstream s(cmd.out / "summary.txt", std::ios::binary);
    s << "algorithm = " << to_string(algo) << "\n"
      << "terms = " << problem.num_terms(algo) << "\n"
      << "iterations = " << run.result.iterations << "\n"
      << "objective = " << format_double(problem.objective(run.primary)) << "\n"
      << "snr_observed_db = " << format_double(snr(problem.original, problem.observed)) << "\n"
      << "snr_restored_db = " << format_double(snr(problem.original, restored)) << "\n"
      << "time_ms = " << format_double(cmd.timing == Timing::wall ? total_time(run.result) : 0.0)
      << "\n"
      << "threads = " << cmd.threads << "\n";
}

BenchOutcome cmd_bench(const BenchCommand& cmd) {
    if (cmd.algos.size() < 2) throw ConfigError("bench needs at least two algorithms");
    if (cmd.iterations == 0) throw ConfigError("--iters must be at least 1");
    std::vector<Algorithm> algos;
    for (const auto& a : cmd.algos) algos.push_back(parse_algorithm(a));
    const RestorationProblem problem = load_problem(cmd.config, cmd.seed);

    BenchOutcome outcome;
    std::vector<double> parallel_ms;
    RunOptions options;
    options.iterations = cmd.iterations;
    for (Algorithm a : algos) {
        const AlgoParams params = restoration_defaults(problem, a);
        outcome.runs.push_back(run_solver(problem.forms, a, params, options));
        if (cmd.threads > 1) {
            RunOptions par = options;
            par.workers = cmd.threads;
            par.record_objective = false;
            parallel_ms.push_back(total_time(run_solver(problem.forms, a, params, par).result));
        }
    }

    double psi_min = std::numeric_limits<double>::infinity();
    for (const auto& run : outcome.runs) {
        for (const auto& r : run.result.log.records) psi_min = std::min(psi_min, r.objective);
    }
    if (!std::isfinite(psi_min)) throw NumericalError("bench: no finite objective value", 0);
    outcome.psi_min = psi_min;

    ensure_dir(cmd.out);
    std::ofstream times(cmd.out / "times.csv", std::ios::binary);
    times << "algo,iterations,time_ms,time_ms_parallel,threads\n";
    for (std::size_t k = 0; k < outcome.runs.size(); ++k) {
        const auto& run = outcome.runs[k];
        const fs::path dir = cmd.out / to_string(run.algo);
        ensure_dir(dir);
        write_log_csv(dir / "log.csv", run.result.log, cmd.timing);
        std::ofstream decay(dir / "decay.csv", std::ios::binary);
        decay << "iter,log10_gap\n";
        for (const auto& r : run.result.log.records) {
            const double gap = std::max(r.objective - psi_min, DBL_EPSILON);
            decay << r.iter << ',' << format_double(std::log10(gap)) << '\n';
        }
        const bool wall = cmd.timing == Timing::wall;
        times << to_string(run.algo) << ',' << run.result.iterations << ','
              << format_double(wall ? total_time(run.result) : 0.0) << ','
              << (parallel_ms.empty() ? std::string() : format_double(wall ? parallel_ms[k] : 0.0))
              << ',' << cmd.threads << '\n';
    }
    std::ofstream psi(cmd.out / "psi_min.txt", std::ios::binary);
    psi << format_double(psi_min) << '\n';
    return outcome;
}

std::vector<ProxFn> parse_regularizers(const std::string& spec, std::size_t n) {
    std::vector<ProxFn> out;
    std::stringstream items(spec);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (item.empty()) continue;
        std::vector<std::string> f;
        std::stringstream parts(item);
        std::string part;
        while (std::getline(parts, part, ':')) f.push_back(part);
        const auto num = [&](std::size_t k) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(f.at(k), &used);
            } catch (const std::exception&) {
                throw ConfigError("regularizer '" + item + "': bad or missing number");
            }
            if (used != f[k].size()) throw ConfigError("regularizer '" + item + "': bad number");
            return v;
        };
        const std::string& kind = f.front();
        if (kind == "l1" && f.size() == 2) {
            out.push_back(l1_norm(num(1)));
        } else if (kind == "l12" && f.size() == 3) {
            const double s = num(2);
            if (s < 1.0 || s != std::floor(s)) throw ConfigError("regularizer '" + item + "': bad S");
            const auto blocks = build_square_blocks(n, 1, static_cast<std::size_t>(s), {1.0});
            for (const auto& layer : blocks.layers) out.push_back(block_l12_norm(layer, num(1)));
        } else if (kind == "box" && (f.size() == 1 || f.size() == 3)) {
            out.push_back(f.size() == 1 ? indicator_box(0.0, 1.0) : indicator_box(num(1), num(2)));
        } else if (kind == "nonneg" && f.size() == 1) {
            out.push_back(indicator_nonnegative());
        } else {
            throw ConfigError("unknown regularizer '" + item +
                              "' (expected l1:mu, l12:mu:S, box[:lo:hi], nonneg)");
        }
    }
    return out;
}

Vector cmd_proxsum(const ProxSumCommand& cmd) {
    const Vector y = read_pgm(cmd.in);
    const auto g = parse_regularizers(cmd.reg, y.shape().rows);
    SolverConfig cfg;
    cfg.max_iter = cmd.iterations;
    cfg.stop_tol = cmd.tol;
    const Vector x = prox_of_sum(y, g, cfg);
    write_pgm(cmd.out, x);
    if (cmd.csv) {
        std::ofstream csv(*cmd.csv, std::ios::binary);
        if (!csv) throw Error("cannot write " + cmd.csv->string());
        csv << "row,col,value\n";
        for (std::size_t r = 0; r < x.shape().rows; ++r) {
            for (std::size_t c = 0; c < x.shape().cols; ++c) {
                csv << r << ',' << c << ',' << format_double(x.at(r, c)) << '\n';
            }
        }
    }
    return x;
}

}  // namespace gfb::cli
