#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gfb/config.hpp"
#include "gfb/functions.hpp"
#include "gfb/iterate_log.hpp"
#include "gfb/product_point.hpp"

namespace gfb {

/// beta-co-coercive single-valued operator B.
struct CocoerciveOp {
    std::string name;
    std::function<Vector(const Vector&)> apply;
    double beta = 1.0;
};

/// Maximal monotone operator A given through its resolvent J_{gamma A}.
/// `value` is optional and only used for objective reporting.
struct ResolventOp {
    std::string name;
    std::function<Vector(const Vector&, double gamma)> resolvent;
    std::function<double(const Vector&)> value;
};

/// B = grad F.
CocoerciveOp as_cocoercive(const SmoothFn& f);
/// J_{gamma A} = prox_{gamma G}.
ResolventOp as_resolvent(const ProxFn& g);

/// Find x with 0 in B x + sum_i A_i x.
struct GfbProblem {
    Shape shape;
    std::optional<CocoerciveOp> B;
    std::vector<ResolventOp> A;
    /// Psi(x); may be empty.
    std::function<double(const Vector&)> objective;

    /// beta of B, +infinity without a smooth part.
    double beta() const;

    /// Psi = F + sum_i G_i.
    static GfbProblem from(Shape shape, std::optional<SmoothFn> f, const std::vector<ProxFn>& g);
};

struct GfbState {
    ProductPoint z;
    Vector x;
    std::size_t t = 0;

    /// z_i = 0, x = 0.
    static GfbState zeros(const Shape& shape, const std::vector<double>& weights);
};

/// One iteration of the (possibly inexact) generalized forward-backward
/// method at t = state.t. Injects cfg's error schedules when present.
/// Throws NumericalError on a non-finite iterate.
GfbState gfb_step(GfbState state, const GfbProblem& problem, const CheckedConfig& cfg);

/// ||T1 T2 z - z|| in the weighted product norm, with the step size of
/// iteration state.t and no injected errors.
double fixed_point_residual(const GfbState& state, const GfbProblem& problem,
                            const CheckedConfig& cfg);

struct GfbResult : SolveResult {
    GfbState state;
    /// Lowest recorded objective and its iterate (final x if none recorded).
    Vector best_x;
    double best_objective = kNaN;
};

/// Iterates until the fixed-point residual drops below cfg.stop_tol or
/// max_iter is reached. `x` is the final barycenter when converged and the
/// best-objective iterate otherwise.
GfbResult gfb_solve(const GfbProblem& problem, const CheckedConfig& cfg,
                    std::optional<GfbState> init = std::nullopt);

/// Validates cfg against the problem (n and beta) and solves.
GfbResult gfb_solve(const GfbProblem& problem, SolverConfig cfg,
                    std::optional<GfbState> init = std::nullopt);

/// argmin_x 1/2 ||x - y||^2 + sum_i G_i(x), solved with F = 1/2 ||. - y||^2
/// (beta = 1). An unset gamma defaults to 1.8. Returns y for an empty list.
Vector prox_of_sum(const Vector& y, const std::vector<ProxFn>& g, SolverConfig cfg = {});

}  // namespace gfb
