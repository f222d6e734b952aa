#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gfb/config.hpp"
#include "gfb/functions.hpp"
#include "gfb/iterate_log.hpp"

namespace gfb {

/// G(L x); an empty `op` means the identity.
struct SplitTerm {
    ProxFn g;
    LinOp op;
};

/// min_x F(x) + sum_i G_i(L_i x).
struct SplitProblem {
    Shape shape;
    std::optional<SmoothFn> smooth;
    std::vector<SplitTerm> terms;
    /// Psi(x); defaults to F + sum_i G_i(L_i x) when empty.
    std::function<double(const Vector&)> objective;

    double beta() const;
    double evaluate(const Vector& x) const;
};

/// Loop control shared by the baseline solvers. The residual column of the
/// log is the norm of the last primal (or, for DR, auxiliary) step.
struct RunControl {
    std::size_t max_iter = 1000;
    double stop_tol = 1e-10;
    bool record_objective = true;
    std::size_t workers = 1;
    /// When set, the log's distance column is ||x_t - reference||.
    std::optional<Vector> reference;
    /// Called with (t, x_t) after every iteration.
    std::function<void(std::size_t, const Vector&)> observer;
};

/// x <- x + lambda (prox_{gamma G}(x - gamma grad F(x)) - x). One term only.
struct FbParams {
    std::optional<double> gamma;  // default 1.8 beta
    double lambda = 1.0;
    RunControl run;
};
SolveResult fb_solve(const SplitProblem& problem, const FbParams& params);

/// Relaxed Douglas-Rachford on the weighted product space, F = 0, simple terms.
struct DrParams {
    std::optional<double> gamma;  // default 1/n
    Schedule lambda = constant_schedule(1.0);
    std::vector<double> weights;  // default 1/n
    RunControl run;
};
SolveResult dr_solve(const SplitProblem& problem, const DrParams& params);

/// Primal-dual Chambolle-Pock on min_x sum_i G_i(L_i x), F = 0.
struct ChPoParams {
    double sigma = 1.0;
    std::optional<double> tau;  // default 0.9 / (sigma ||Lambda||^2)
    double theta = 1.0;
    RunControl run;
};
SolveResult chpo_solve(const SplitProblem& problem, const ChPoParams& params);

/// Block-decomposition HPE on F(sum_i w_i z_i) + sum_i G_i(z_i) s.t. z in S.
struct HpeParams {
    double varsigma = 0.9;
    std::vector<double> weights;  // default 1/n
    RunControl run;
};
/// varsigma * 2 varsigma beta / (1 + sqrt(1 + 4 varsigma^2 beta^2)); varsigma
/// when beta is infinite.
double hpe_step(double varsigma, double beta);
SolveResult hpe_solve(const SplitProblem& problem, const HpeParams& params);

/// Primal-dual Combettes-Pesquet on min_x F(x) + sum_i G_i(L_i x).
struct CoPeParams {
    std::optional<double> gamma;  // default 0.9 / (1/beta + sqrt(sum ||L_i||^2))
    RunControl run;
};
/// 1 / (1/beta + sqrt(sum_i ||L_i||^2)): the open upper end for gamma.
double cope_step_bound(const SplitProblem& problem);
SolveResult cope_solve(const SplitProblem& problem, const CoPeParams& params);

}  // namespace gfb
