#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "gfb/product_point.hpp"

namespace gfb {

using Schedule = std::function<double(std::size_t t)>;

Schedule constant_schedule(double value);

/// Step-size regime.
/// fixed_step: gamma_t constant in ]0, 2 beta[ and
///   lambda_t in ]0, min(3/2, (1 + 2 beta / gamma) / 2)[.
/// varying_step: 0 < inf gamma_t, sup gamma_t < 2 beta and lambda_t in ]0, 1].
enum class StepMode { fixed_step, varying_step };

/// Additive errors injected into the iteration: `prox_error(t, i, shape)` is
/// added to the output of the i-th prox, `gradient_error(t, shape)` to the
/// gradient. Summability cannot be checked for arbitrary callables, so the
/// caller declares bounds on sum_t ||error_t||; validation only checks that
/// the declared bounds are finite.
struct ErrorSchedule {
    std::function<Vector(std::size_t t, std::size_t i, const Shape& shape)> prox_error;
    std::function<Vector(std::size_t t, const Shape& shape)> gradient_error;
    double declared_prox_total = std::numeric_limits<double>::infinity();
    double declared_gradient_total = std::numeric_limits<double>::infinity();
};

/// Errors of norm c / (t + 1)^power in pseudo-random directions drawn from
/// `seed`. The declared totals are c * zeta(power) (per prox term), which is
/// infinite for power <= 1.
ErrorSchedule polynomial_errors(double c, double power, std::uint64_t seed);

struct SolverConfig {
    /// Number of simple terms; 0 means "take it from the problem".
    std::size_t n = 0;
    /// Empty means equal weights 1/n.
    std::vector<double> weights;
    Schedule gamma;
    Schedule lambda = constant_schedule(1.0);
    StepMode mode = StepMode::fixed_step;
    std::size_t max_iter = 1000;
    /// Stop once the fixed-point residual drops below this.
    double stop_tol = 1e-10;
    std::optional<ErrorSchedule> errors;
    /// Reference point for the distance diagnostic.
    std::optional<ProductPoint> reference;
    /// Threads for the per-term updates; results do not depend on it.
    std::size_t workers = 1;
    bool record_objective = true;

    /// Equal weights, gamma = 1.8 beta (1 when beta is infinite), lambda = 1.
    static SolverConfig defaults(double beta);
};

/// min(3/2, (1 + 2 beta / gamma_bar) / 2): the open upper end of the
/// relaxation interval for a fixed step gamma_bar.
double fixed_step_lambda_bound(double beta, double gamma_bar);

/// A configuration that passed validate_config.
class CheckedConfig {
public:
    const SolverConfig& config() const { return cfg_; }
    std::size_t n() const { return cfg_.weights.size(); }
    const std::vector<double>& weights() const { return cfg_.weights; }
    double beta() const { return beta_; }
    /// Supremum of gamma_t over the horizon.
    double gamma_bar() const { return gamma_bar_; }
    double gamma(std::size_t t) const { return cfg_.gamma(t); }
    double lambda(std::size_t t) const { return cfg_.lambda(t); }

private:
    friend CheckedConfig validate_config(SolverConfig cfg, double beta);
    CheckedConfig(SolverConfig cfg, double beta, double gamma_bar)
        : cfg_(std::move(cfg)), beta_(beta), gamma_bar_(gamma_bar) {}

    SolverConfig cfg_;
    double beta_;
    double gamma_bar_;
};

/// Checks the step and relaxation schedules over the horizon [0, max_iter)
/// against the selected mode, the weights, and the declared error totals.
/// beta may be +infinity (no smooth term). Violations throw ConfigError
/// whose assumption() is one of "A0(ii)", "A0(iii)", "A1(i)", "A1(ii)",
/// "A2(i)", "A2(ii)"; malformed weights or horizons carry no label.
CheckedConfig validate_config(SolverConfig cfg, double beta);

}  // namespace gfb
