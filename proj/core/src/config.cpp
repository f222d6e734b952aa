#include "gfb/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace gfb {

Schedule constant_schedule(double value) {
    return [value](std::size_t) { return value; };
}

ErrorSchedule polynomial_errors(double c, double power, std::uint64_t seed) {
    const auto direction = [seed](std::uint64_t stream, const Shape& shape) {
        std::mt19937_64 rng(seed ^ (stream * 0x9E3779B97F4A7C15ULL));
        std::normal_distribution<double> nd;
        Vector d(shape);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = nd(rng);
        const double nd2 = norm(d);
        return nd2 > 0.0 ? (1.0 / nd2) * d : d;
    };
    const auto magnitude = [c, power](std::size_t t) {
        return c / std::pow(static_cast<double>(t + 1), power);
    };
    ErrorSchedule e;
    e.prox_error = [=](std::size_t t, std::size_t i, const Shape& s) {
        return magnitude(t) * direction(2 * (t * 1024 + i) + 1, s);
    };
    e.gradient_error = [=](std::size_t t, const Shape& s) {
        return magnitude(t) * direction(2 * t, s);
    };
    const double total = power > 1.0 ? c * std::riemann_zeta(power) : std::numeric_limits<double>::infinity();
    e.declared_prox_total = total;
    e.declared_gradient_total = total;
    return e;
}

SolverConfig SolverConfig::defaults(double beta) {
    SolverConfig cfg;
    cfg.gamma = constant_schedule(std::isfinite(beta) ? 1.8 * beta : 1.0);
    cfg.lambda = constant_schedule(1.0);
    return cfg;
}

double fixed_step_lambda_bound(double beta, double gamma_bar) {
    const double ratio = std::isfinite(beta) ? 2.0 * beta / gamma_bar : std::numeric_limits<double>::infinity();
    return std::min(1.5, (1.0 + ratio) / 2.0);
}

CheckedConfig validate_config(SolverConfig cfg, double beta) {
    if (!(beta > 0.0)) throw ConfigError("validate_config: beta must be > 0");
    if (cfg.weights.empty()) {
        if (cfg.n == 0) throw ConfigError("validate_config: number of terms n is not set");
        cfg.weights = equal_weights(cfg.n);
    } else if (cfg.n != 0 && cfg.n != cfg.weights.size()) {
        throw ConfigError("validate_config: n does not match the number of weights");
    }
    cfg.n = cfg.weights.size();
    check_weights(cfg.weights);
    if (!cfg.gamma || !cfg.lambda) throw ConfigError("validate_config: schedules are not set");
    if (cfg.max_iter == 0) throw ConfigError("validate_config: max_iter must be >= 1");
    if (!(cfg.stop_tol >= 0.0)) throw ConfigError("validate_config: stop_tol must be >= 0");

    const bool fixed = cfg.mode == StepMode::fixed_step;
    const std::string step_label = fixed ? "A1(i)" : "A2(i)";
    const std::string relax_label = fixed ? "A1(ii)" : "A2(ii)";
    const double step_cap = 2.0 * beta;

    const double gamma0 = cfg.gamma(0);
    double gmin = gamma0;
    double gmax = gamma0;
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        const double g = cfg.gamma(t);
        if (!std::isfinite(g)) throw ConfigError("step size is not finite", step_label);
        if (fixed && g != gamma0) {
            throw ConfigError("fixed_step mode requires a constant step size", step_label);
        }
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
    }
    if (!(gmin > 0.0) || !(gmax < step_cap)) {
        throw ConfigError("step sizes must lie in ]0, 2*beta[ = ]0, " + std::to_string(step_cap) +
                              "[",
                          step_label);
    }

    const double lambda_cap = fixed ? fixed_step_lambda_bound(beta, gmax) : 1.0;
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        const double l = cfg.lambda(t);
        const bool ok = fixed ? (l > 0.0 && l < lambda_cap) : (l > 0.0 && l <= lambda_cap);
        if (!ok || !std::isfinite(l)) {
            throw ConfigError("relaxation " + std::to_string(l) + " outside " +
                                  (fixed ? "]0, " + std::to_string(lambda_cap) + "["
                                         : std::string("]0, 1]")),
                              relax_label);
        }
    }

    if (cfg.errors) {
        const auto& e = *cfg.errors;
        const auto bad = [](double v) { return !(v >= 0.0) || !std::isfinite(v); };
        if ((e.prox_error && bad(e.declared_prox_total)) ||
            (e.gradient_error && bad(e.declared_gradient_total))) {
            throw ConfigError("injected errors must have a finite declared total", "A0(iii)");
        }
    }
    return CheckedConfig(std::move(cfg), beta, gmax);
}

}  // namespace gfb
