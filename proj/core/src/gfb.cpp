#include "gfb/gfb.hpp"

#include <cmath>
#include <limits>

#include "gfb/errors.hpp"
#include "gfb/parallel.hpp"

namespace gfb {

CocoerciveOp as_cocoercive(const SmoothFn& f) {
    return {f.name, f.gradient, f.beta};
}

ResolventOp as_resolvent(const ProxFn& g) {
    return {g.name, g.prox, g.value};
}

double GfbProblem::beta() const {
    return B ? B->beta : kInfinity;
}

GfbProblem GfbProblem::from(Shape shape, std::optional<SmoothFn> f, const std::vector<ProxFn>& g) {
    GfbProblem p;
    p.shape = shape;
    if (f) p.B = as_cocoercive(*f);
    for (const auto& gi : g) p.A.push_back(as_resolvent(gi));
    p.objective = [f, g](const Vector& x) {
        double v = f ? f->value(x) : 0.0;
        for (const auto& gi : g) v += gi.value(x);
        return v;
    };
    return p;
}

GfbState GfbState::zeros(const Shape& shape, const std::vector<double>& weights) {
    GfbState s;
    s.z = ProductPoint::replicate(Vector(shape), weights);
    s.x = Vector(shape);
    return s;
}

namespace {

void check_problem(const GfbProblem& problem, const CheckedConfig& cfg) {
    if (problem.A.size() != cfg.n()) {
        throw ConfigError("gfb: problem has " + std::to_string(problem.A.size()) +
                          " terms but the configuration has n = " + std::to_string(cfg.n()));
    }
    if (problem.B && problem.B->beta != cfg.beta()) {
        throw ConfigError("gfb: configuration was validated for a different beta");
    }
}

void check_state(const GfbState& s, const GfbProblem& problem, const CheckedConfig& cfg) {
    if (s.z.n() != cfg.n()) throw DimensionError("gfb: state has the wrong number of components");
    for (const auto& zi : s.z.parts) require_same_shape(zi.shape(), problem.shape, "gfb state");
    require_same_shape(s.x.shape(), problem.shape, "gfb state");
}

/// Performs the step in place. When `residual` is given, stores
/// sqrt(sum_i w_i ||p_i - x||^2) computed from the error-free prox outputs.
void step_in_place(GfbState& s, const GfbProblem& problem, const CheckedConfig& cfg,
                   double* residual) {
    const std::size_t t = s.t;
    const double gamma = cfg.gamma(t);
    const double lambda = cfg.lambda(t);
    const auto& errors = cfg.config().errors;
    const auto& w = cfg.weights();

    Vector grad(problem.shape);
    if (problem.B) grad = problem.B->apply(s.x);
    if (errors && errors->gradient_error) grad += errors->gradient_error(t, problem.shape);

    const std::size_t n = cfg.n();
    std::vector<double> dist_sq(n, 0.0);
    parallel_for(n, cfg.config().workers, [&](std::size_t i) {
        Vector arg = 2.0 * s.x;
        arg -= s.z.parts[i];
        arg -= gamma * grad;
        Vector p = problem.A[i].resolvent(arg, gamma / w[i]);
        p -= s.x;
        if (residual) dist_sq[i] = squared_norm(p);
        if (errors && errors->prox_error) p += errors->prox_error(t, i, problem.shape);
        s.z.parts[i] += lambda * p;
    });
    s.x = barycenter(s.z);
    ++s.t;
    if (!s.x.all_finite()) throw NumericalError("gfb: non-finite iterate", s.t);
    if (residual) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += w[i] * dist_sq[i];
        *residual = std::sqrt(acc);
    }
}

}  // namespace

GfbState gfb_step(GfbState state, const GfbProblem& problem, const CheckedConfig& cfg) {
    check_problem(problem, cfg);
    check_state(state, problem, cfg);
    step_in_place(state, problem, cfg, nullptr);
    return state;
}

double fixed_point_residual(const GfbState& state, const GfbProblem& problem,
                            const CheckedConfig& cfg) {
    check_problem(problem, cfg);
    check_state(state, problem, cfg);
    const double gamma = cfg.gamma(state.t);
    const auto& w = cfg.weights();
    const Vector x = barycenter(state.z);
    const Vector grad = problem.B ? problem.B->apply(x) : Vector(problem.shape);

    // T2 = Id - gamma B J_{N_S}
    ProductPoint t2 = state.z;
    for (auto& part : t2.parts) part -= gamma * grad;
    // T1 = (R_A R_{N_S} + Id) / 2
    const Vector center = barycenter(t2);
    ProductPoint diff = t2;
    parallel_for(state.z.n(), cfg.config().workers, [&](std::size_t i) {
        Vector q = 2.0 * center - t2.parts[i];
        Vector r = 2.0 * problem.A[i].resolvent(q, gamma / w[i]) - q;
        diff.parts[i] = 0.5 * (r + t2.parts[i]) - state.z.parts[i];
    });
    return product_norm(diff);
}

GfbResult gfb_solve(const GfbProblem& problem, const CheckedConfig& cfg,
                    std::optional<GfbState> init) {
    check_problem(problem, cfg);
    const SolverConfig& c = cfg.config();
    GfbResult result;
    GfbState s = init ? std::move(*init) : GfbState::zeros(problem.shape, cfg.weights());
    check_state(s, problem, cfg);
    if (init) s.x = barycenter(s.z);
    if (c.reference && c.reference->n() != cfg.n()) {
        throw ConfigError("gfb_solve: reference point has the wrong number of components");
    }

    const bool exact = !c.errors;
    const bool with_objective = c.record_objective && static_cast<bool>(problem.objective);
    double best = std::numeric_limits<double>::infinity();
    Vector best_x = s.x;
    Stopwatch clock;
    result.log.records.reserve(c.max_iter);

    for (std::size_t k = 0; k < c.max_iter; ++k) {
        IterateRecord rec;
        double residual = kNaN;
        clock.start();
        if (exact) {
            step_in_place(s, problem, cfg, &residual);
        } else {
            clock.stop();
            residual = fixed_point_residual(s, problem, cfg);
            clock.start();
            step_in_place(s, problem, cfg, nullptr);
        }
        clock.stop();

        rec.iter = s.t;
        rec.residual = residual;
        rec.time_ms = clock.elapsed_ms();
        if (with_objective) {
            rec.objective = problem.objective(s.x);
            if (rec.objective < best) {
                best = rec.objective;
                best_x = s.x;
            }
        }
        if (c.reference) rec.distance = product_norm(s.z - *c.reference);
        result.log.records.push_back(rec);
        if (residual < c.stop_tol) {
            result.converged = true;
            break;
        }
    }

    result.iterations = result.log.size();
    if (!std::isfinite(best)) best_x = s.x;
    result.best_x = best_x;
    result.best_objective = std::isfinite(best) ? best : kNaN;
    result.x = result.converged ? s.x : best_x;
    result.state = std::move(s);
    return result;
}

GfbResult gfb_solve(const GfbProblem& problem, SolverConfig cfg, std::optional<GfbState> init) {
    if (cfg.n == 0 && cfg.weights.empty()) cfg.n = problem.A.size();
    if (!cfg.gamma) {
        const double beta = problem.beta();
        cfg.gamma = constant_schedule(std::isfinite(beta) ? 1.8 * beta : 1.0);
    }
    return gfb_solve(problem, validate_config(std::move(cfg), problem.beta()), std::move(init));
}

Vector prox_of_sum(const Vector& y, const std::vector<ProxFn>& g, SolverConfig cfg) {
    if (g.empty()) return y;
    SmoothFn f;
    f.name = "half_sq_distance";
    f.value = [y](const Vector& x) { return 0.5 * squared_norm(x - y); };
    f.gradient = [y](const Vector& x) { return x - y; };
    f.beta = 1.0;
    const GfbProblem problem = GfbProblem::from(y.shape(), f, g);
    if (!cfg.gamma) cfg.gamma = constant_schedule(1.8);
    cfg.record_objective = false;
    return gfb_solve(problem, std::move(cfg)).state.x;
}

}  // namespace gfb
