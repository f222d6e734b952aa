#include "gfb/baselines.hpp"

#include <cmath>

#include "gfb/errors.hpp"
#include "gfb/parallel.hpp"

namespace gfb {

double SplitProblem::beta() const {
    return smooth ? smooth->beta : kInfinity;
}

namespace {

Vector forward(const SplitTerm& term, const Vector& x) {
    return term.op ? term.op.apply(x) : x;
}

Vector backward(const SplitTerm& term, const Vector& y) {
    return term.op ? term.op.adjoint(y) : y;
}

double op_norm(const SplitTerm& term) {
    return term.op ? term.op.norm_bound() : 1.0;
}

std::vector<double> resolve_weights(std::vector<double> w, std::size_t n, const char* who) {
    if (w.empty()) {
        if (n == 0) throw ConfigError(std::string(who) + ": problem has no terms");
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    }
    if (w.size() != n) throw ConfigError(std::string(who) + ": one weight per term is required");
    double sum = 0.0;
    for (double wi : w) {
        if (!(wi > 0.0) || wi > 1.0) throw ConfigError(std::string(who) + ": weights must lie in ]0,1]");
        sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError(std::string(who) + ": weights must sum to 1");
    return w;
}

void require_simple_terms(const SplitProblem& p, const char* who) {
    for (const auto& term : p.terms) {
        if (term.op) {
            throw ConfigError(std::string(who) + ": every term must act on x directly (L_i = Id)");
        }
    }
}

Vector weighted_sum(const std::vector<Vector>& parts, const std::vector<double>& w,
                    const Shape& shape) {
    Vector out(shape);
    for (std::size_t i = 0; i < parts.size(); ++i) out.values() += w[i] * parts[i].values();
    return out;
}

/// Bookkeeping shared by every solver loop.
class Recorder {
public:
    Recorder(const SplitProblem& p, const RunControl& run) : problem_(p), run_(run) {
        result_.log.records.reserve(run.max_iter);
        if (run.reference) require_same_shape(run.reference->shape(), p.shape, "reference");
    }

    void start() { clock_.start(); }

    /// Returns true when the loop should stop.
    bool finish(std::size_t t, const Vector& x, double residual, const char* who) {
        clock_.stop();
        if (!x.all_finite()) throw NumericalError(std::string(who) + ": non-finite iterate", t);
        IterateRecord rec;
        rec.iter = t;
        rec.residual = residual;
        rec.time_ms = clock_.elapsed_ms();
        if (run_.record_objective) rec.objective = problem_.evaluate(x);
        if (run_.reference) rec.distance = norm(x - *run_.reference);
        result_.log.records.push_back(rec);
        if (run_.observer) run_.observer(t, x);
        if (residual < run_.stop_tol) {
            result_.converged = true;
            return true;
        }
        return false;
    }

    SolveResult done(Vector x) {
        result_.x = std::move(x);
        result_.iterations = result_.log.size();
        return std::move(result_);
    }

private:
    const SplitProblem& problem_;
    const RunControl& run_;
    SolveResult result_;
    Stopwatch clock_;
};

void check_run(const RunControl& run, const char* who) {
    if (run.max_iter == 0) throw ConfigError(std::string(who) + ": max_iter must be >= 1");
}

}  // namespace

double SplitProblem::evaluate(const Vector& x) const {
    if (objective) return objective(x);
    double v = smooth ? smooth->value(x) : 0.0;
    for (const auto& term : terms) v += term.g.value(forward(term, x));
    return v;
}

// ------------------------------------------------------------ forward-backward

SolveResult fb_solve(const SplitProblem& problem, const FbParams& params) {
    check_run(params.run, "fb");
    if (problem.terms.size() != 1) {
        throw ConfigError("fb: forward-backward handles exactly one non-smooth term, got " +
                          std::to_string(problem.terms.size()));
    }
    require_simple_terms(problem, "fb");
    const double beta = problem.beta();
    const double gamma = params.gamma.value_or(std::isfinite(beta) ? 1.8 * beta : 1.0);
    if (!(gamma > 0.0) || !(gamma < 2.0 * beta)) {
        throw ConfigError("fb: gamma must lie in ]0, 2 beta[", "A1(i)");
    }
    const double lambda_cap =
        std::min(1.5, std::isfinite(beta) ? (1.0 + 2.0 * beta / gamma) / 2.0 : 1.5);
    if (!(params.lambda > 0.0) || !(params.lambda < lambda_cap)) {
        throw ConfigError("fb: lambda outside ]0, " + std::to_string(lambda_cap) + "[", "A1(ii)");
    }

    const ProxFn& g = problem.terms.front().g;
    Recorder rec(problem, params.run);
    Vector x(problem.shape);
    for (std::size_t t = 0; t < params.run.max_iter; ++t) {
        rec.start();
        Vector arg = x;
        if (problem.smooth) arg -= gamma * problem.smooth->gradient(x);
        Vector step = g.prox(arg, gamma) - x;
        x += params.lambda * step;
        if (rec.finish(t + 1, x, norm(step), "fb")) break;
    }
    return rec.done(std::move(x));
}

// ------------------------------------------------------------ Douglas-Rachford

SolveResult dr_solve(const SplitProblem& problem, const DrParams& params) {
    check_run(params.run, "dr");
    if (problem.smooth) {
        throw ConfigError("dr: a smooth term is not allowed; recast it as a prox term");
    }
    require_simple_terms(problem, "dr");
    const std::size_t n = problem.terms.size();
    const auto w = resolve_weights(params.weights, n, "dr");
    const double gamma = params.gamma.value_or(1.0 / static_cast<double>(n));
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("dr: gamma must be > 0");
    if (!params.lambda) throw ConfigError("dr: lambda schedule is not set");
    for (std::size_t t = 0; t < params.run.max_iter; ++t) {
        const double l = params.lambda(t);
        if (!(l > 0.0) || !(l < 2.0)) throw ConfigError("dr: lambda must lie in ]0, 2[");
    }

    Recorder rec(problem, params.run);
    std::vector<Vector> z(n, Vector(problem.shape));
    Vector x(problem.shape);
    std::vector<double> moved(n);
    for (std::size_t t = 0; t < params.run.max_iter; ++t) {
        rec.start();
        const double half = 0.5 * params.lambda(t);
        // z <- (1 - lambda/2) z + (lambda/2) R_{gamma A} R_{N_S} z
        parallel_for(n, params.run.workers, [&](std::size_t i) {
            const Vector q = 2.0 * x - z[i];
            const Vector r = 2.0 * problem.terms[i].g.prox(q, gamma / w[i]) - q;
            Vector next = (1.0 - half) * z[i] + half * r;
            moved[i] = squared_norm(next - z[i]);
            z[i] = std::move(next);
        });
        x = weighted_sum(z, w, problem.shape);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += w[i] * moved[i];
        if (rec.finish(t + 1, x, std::sqrt(acc) / (2.0 * half), "dr")) break;
    }
    return rec.done(std::move(x));
}

// ------------------------------------------------------------ Chambolle-Pock

SolveResult chpo_solve(const SplitProblem& problem, const ChPoParams& params) {
    check_run(params.run, "chpo");
    if (problem.smooth) {
        throw ConfigError("chpo: a smooth term is not supported; recast it as G(L x)");
    }
    const std::size_t m = problem.terms.size();
    if (m == 0) throw ConfigError("chpo: problem has no terms");
    double norm_sq = 0.0;
    for (const auto& term : problem.terms) norm_sq += op_norm(term) * op_norm(term);
    const double sigma = params.sigma;
    const double tau = params.tau.value_or(0.9 / (sigma * norm_sq));
    if (!(sigma > 0.0) || !(tau > 0.0)) throw ConfigError("chpo: sigma and tau must be > 0");
    if (!(params.theta >= 0.0 && params.theta <= 1.0)) {
        throw ConfigError("chpo: theta must lie in [0, 1]");
    }
    if (!(sigma * tau * norm_sq < 1.0)) {
        throw ConfigError("chpo: sigma tau ||Lambda||^2 = " + std::to_string(sigma * tau * norm_sq) +
                          " must be < 1");
    }

    Recorder rec(problem, params.run);
    Vector x(problem.shape);
    Vector xbar(problem.shape);
    std::vector<Vector> xi(m);
    std::vector<Vector> back(m);
    for (std::size_t i = 0; i < m; ++i) {
        xi[i] = Vector(problem.terms[i].op ? problem.terms[i].op.out_shape() : problem.shape);
    }
    for (std::size_t t = 0; t < params.run.max_iter; ++t) {
        rec.start();
        parallel_for(m, params.run.workers, [&](std::size_t i) {
            const auto& term = problem.terms[i];
            Vector arg = xi[i];
            arg += sigma * forward(term, xbar);
            xi[i] = prox_conjugate(term.g, arg, sigma);
            back[i] = backward(term, xi[i]);
        });
        Vector next = x;
        for (std::size_t i = 0; i < m; ++i) next -= tau * back[i];
        const Vector step = next - x;
        xbar = next + params.theta * step;
        x = std::move(next);
        if (rec.finish(t + 1, x, norm(step), "chpo")) break;
    }
    return rec.done(std::move(x));
}

// ------------------------------------------------------------ HPE

double hpe_step(double varsigma, double beta) {
    if (!(varsigma > 0.0) || varsigma > 1.0) throw ConfigError("hpe: varsigma must lie in ]0, 1]");
    if (!std::isfinite(beta)) return varsigma;
    const double sb = varsigma * beta;
    return varsigma * 2.0 * sb / (1.0 + std::sqrt(1.0 + 4.0 * sb * sb));
}

SolveResult hpe_solve(const SplitProblem& problem, const HpeParams& params) {
    check_run(params.run, "hpe");
    require_simple_terms(problem, "hpe");
    const std::size_t n = problem.terms.size();
    const auto w = resolve_weights(params.weights, n, "hpe");
    const double gamma = hpe_step(params.varsigma, problem.beta());
    const double g2 = gamma * gamma;

    Recorder rec(problem, params.run);
    std::vector<Vector> z(n, Vector(problem.shape));
    std::vector<Vector> v(n, Vector(problem.shape));
    std::vector<double> moved(n);
    Vector x(problem.shape);
    Vector u(problem.shape);
    for (std::size_t t = 0; t < params.run.max_iter; ++t) {
        rec.start();
        Vector grad(problem.shape);
        if (problem.smooth) grad = problem.smooth->gradient(x);
        parallel_for(n, params.run.workers, [&](std::size_t i) {
            Vector arg = g2 * x;
            arg += (1.0 - g2) * z[i];
            arg -= gamma * grad;
            arg += gamma * (v[i] - u);
            Vector zi = problem.terms[i].g.prox(arg, gamma / w[i]);
            moved[i] = squared_norm(zi - z[i]);
            z[i] = std::move(zi);
            v[i] -= gamma * z[i];
            v[i] += gamma * x;
        });
        x = weighted_sum(z, w, problem.shape);
        u = weighted_sum(v, w, problem.shape);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += w[i] * moved[i];
        if (rec.finish(t + 1, x, std::sqrt(acc), "hpe")) break;
    }
    return rec.done(std::move(x));
}

// ------------------------------------------------------------ Combettes-Pesquet

double cope_step_bound(const SplitProblem& problem) {
    double norm_sq = 0.0;
    for (const auto& term : problem.terms) norm_sq += op_norm(term) * op_norm(term);
    const double inv_beta = problem.smooth ? 1.0 / problem.smooth->beta : 0.0;
    return 1.0 / (inv_beta + std::sqrt(norm_sq));
}

SolveResult cope_solve(const SplitProblem& problem, const CoPeParams& params) {
    check_run(params.run, "cope");
    const std::size_t m = problem.terms.size();
    if (m == 0 && !problem.smooth) throw ConfigError("cope: problem is empty");
    const double bound = cope_step_bound(problem);
    const double gamma = params.gamma.value_or(0.9 * bound);
    if (!(gamma > 0.0) || !(gamma < bound)) {
        throw ConfigError("cope: gamma must lie in ]0, " + std::to_string(bound) + "[");
    }

    Recorder rec(problem, params.run);
    Vector x(problem.shape);
    std::vector<Vector> v(m);
    std::vector<Vector> p(m);
    std::vector<Vector> back(m);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = Vector(problem.terms[i].op ? problem.terms[i].op.out_shape() : problem.shape);
    }
    const auto gradient = [&](const Vector& at) {
        return problem.smooth ? problem.smooth->gradient(at) : Vector(problem.shape);
    };
    for (std::size_t t = 0; t < params.run.max_iter; ++t) {
        rec.start();
        Vector y = gradient(x);
        for (std::size_t i = 0; i < m; ++i) y += backward(problem.terms[i], v[i]);
        y = x - gamma * y;
        parallel_for(m, params.run.workers, [&](std::size_t i) {
            const auto& term = problem.terms[i];
            const Vector zi = v[i] + gamma * forward(term, x);
            p[i] = prox_conjugate(term.g, zi, gamma);
            v[i] += p[i] - zi + gamma * forward(term, y);
            back[i] = backward(term, p[i]);
        });
        Vector dir = gradient(y);
        for (std::size_t i = 0; i < m; ++i) dir += back[i];
        const Vector step = -gamma * dir;
        x += step;
        if (rec.finish(t + 1, x, norm(step), "cope")) break;
    }
    return rec.done(std::move(x));
}

}  // namespace gfb
