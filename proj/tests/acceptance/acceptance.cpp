// Acceptance suite: one PASS/FAIL line per criterion. Criterion 7 is soft
// and prints DEVIATION instead of failing the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfb/baselines.hpp"
#include "gfb/blocks.hpp"
#include "gfb/cli/commands.hpp"
#include "gfb/errors.hpp"
#include "gfb/functions.hpp"
#include "gfb/gfb.hpp"
#include "gfb/image_ops.hpp"
#include "gfb/problems.hpp"
#include "gfb/wavelet.hpp"
#include "test_support.hpp"

using namespace gfb;
using gfb::testing::adjoint_mismatch;
using gfb::testing::firm_nonexpansive_violation;
using gfb::testing::materialize;
using gfb::testing::max_abs_diff;
using gfb::testing::random_vector;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (!ok) detail << "; ";
            ok = false;
            detail << what;
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// ---------------------------------------------------------------- 1

/// Largest violation of x - p in gamma mu d|.|(p), coordinatewise.
double l1_optimality_gap(const Vector& x, const Vector& p, double t) {
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = x[k] - p[k];
        if (p[k] != 0.0) {
            worst = std::max(worst, std::abs(r - t * (p[k] > 0 ? 1.0 : -1.0)));
        } else {
            worst = std::max(worst, std::max(0.0, std::abs(r) - t));
        }
    }
    return worst;
}

/// Blockwise optimality of a block soft-threshold.
double block_optimality_gap(const Vector& x, const Vector& p, const BlockLayer& layer, double t) {
    double worst = 0.0;
    std::vector<bool> covered(x.size(), false);
    for (std::size_t b = 0; b < layer.num_blocks(); ++b) {
        double np = 0.0, nx = 0.0;
        for (auto i : layer.block(b)) {
            np += p[i] * p[i];
            nx += x[i] * x[i];
            covered[i] = true;
        }
        np = std::sqrt(np);
        nx = std::sqrt(nx);
        const double th = t * layer.weight(b);
        if (np == 0.0) {
            worst = std::max(worst, std::max(0.0, nx - th));
        } else {
            for (auto i : layer.block(b)) worst = std::max(worst, std::abs(x[i] - p[i] - th * p[i] / np));
        }
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!covered[k]) worst = std::max(worst, std::abs(x[k] - p[k]));
    }
    return worst;
}

void criterion1(Outcome& out) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unif(0.05, 2.0);
    const std::size_t n = 8;

    double e_l1 = 0.0, e_blk = 0.0, e_quad = 0.0, e_ker = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double gamma = unif(rng), mu = unif(rng);
        const Vector x = random_vector(Shape::flat(30), rng, 2.0);
        e_l1 = std::max(e_l1, l1_optimality_gap(x, prox_l1(x, gamma, mu), gamma * mu));
    }
    const BlockStructure blocks = build_square_blocks(n, 4, 2);
    for (int k = 0; k < 60; ++k) {
        const double gamma = unif(rng), mu = unif(rng);
        const Vector x = random_vector(Shape::stack(n, 4), rng, 2.0);
        const BlockLayer& layer = blocks.layers[static_cast<std::size_t>(k) % blocks.layers.size()];
        e_blk = std::max(e_blk, block_optimality_gap(x, prox_block_l12(x, gamma, layer, mu), layer, gamma * mu));
    }

    const LinOp frame = make_wavelet_frame(n, 2);
    const std::vector<LinOp> fidelity_ops = {
        identity(Shape::image(n)), make_blur(n, 1.2), make_mask(Mask::random(n, 0.4, 5)),
        compose(make_blur(n, 0.8), frame), compose(make_mask(Mask::random(n, 0.6, 6)), frame),
        dense_operator(Eigen::MatrixXd::Random(12, 7))};
    for (int k = 0; k < 60; ++k) {
        const LinOp& op = fidelity_ops[static_cast<std::size_t>(k) % fidelity_ops.size()];
        const double gamma = unif(rng);
        const Eigen::MatrixXd l = materialize(op);
        const Vector x = random_vector(op.in_shape(), rng);
        const Vector y = random_vector(op.out_shape(), rng);
        const Eigen::MatrixXd a =
            Eigen::MatrixXd::Identity(l.cols(), l.cols()) + gamma * l.transpose() * l;
        const Eigen::VectorXd ref = a.ldlt().solve(x.values() + gamma * l.transpose() * y.values());
        e_quad = std::max(e_quad, (prox_quad_fidelity(x, gamma, y, op).values() - ref).cwiseAbs().maxCoeff());
    }

    const std::vector<LinOp> ker_ops = {make_gradient(n), compose(make_gradient(n), frame),
                                        compose(make_blur(n, 1.0), frame), make_mask(Mask::random(n, 0.3, 7))};
    for (int k = 0; k < 60; ++k) {
        const LinOp& op = ker_ops[static_cast<std::size_t>(k) % ker_ops.size()];
        const Eigen::MatrixXd l = materialize(op);
        const Vector x = random_vector(op.in_shape(), rng);
        const Vector u = random_vector(op.out_shape(), rng);
        const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(l.cols(), l.cols()) + l.transpose() * l;
        const Eigen::VectorXd xs = a.ldlt().solve(x.values() + l.transpose() * u.values());
        const Eigen::VectorXd us = l * xs;
        const auto [px, pu] = prox_ker_constraint(x, u, unif(rng), op);
        e_ker = std::max(e_ker, std::max((px.values() - xs).cwiseAbs().maxCoeff(),
                                         (pu.values() - us).cwiseAbs().maxCoeff()));
    }

    double fne = 0.0;
    const LinOp blur = make_blur(n, 1.0);
    const Vector yb = random_vector(Shape::image(n), rng);
    const LinOp grad = make_gradient(n);
    Layout lay;
    const Slice xs = lay.add(Shape::image(n));
    const Slice us = lay.add(grad.out_shape());
    const std::vector<std::pair<std::string, std::function<Vector(const Vector&)>>> prox_ops = {
        {"l1", [](const Vector& v) { return prox_l1(v, 0.7, 0.9); }},
        {"l12", [&](const Vector& v) { return prox_block_l12(v, 0.7, blocks.layers[1], 0.9); }},
        {"quad", [&](const Vector& v) { return prox_quad_fidelity(v, 0.7, yb, blur); }},
        {"ker", [&](const Vector& v) { return kernel_constraint(grad, xs, us, lay.total()).prox(v, 0.7); }},
    };
    const std::vector<Shape> prox_shapes = {Shape::flat(30), Shape::stack(n, 4), Shape::image(n), lay.shape()};
    for (std::size_t k = 0; k < prox_ops.size(); ++k) {
        const double v = firm_nonexpansive_violation(prox_ops[k].second, prox_shapes[k], rng, 100, 2.0);
        out.require(v <= 1e-12, "firm nonexpansiveness of " + prox_ops[k].first + " violated by " + sci(v));
        fne = std::max(fne, v);
    }
    out.require(e_l1 <= 1e-8, "l1 error " + sci(e_l1));
    out.require(e_blk <= 1e-8, "block l12 error " + sci(e_blk));
    out.require(e_quad <= 1e-8, "quadratic fidelity error " + sci(e_quad));
    out.require(e_ker <= 1e-8, "kernel projection error " + sci(e_ker));
    if (out.ok) {
        out.detail << "max errors l1 " << sci(e_l1) << ", l12 " << sci(e_blk) << ", quad " << sci(e_quad)
                   << ", ker " << sci(e_ker) << "; firm nonexpansive slack " << sci(fne);
    }
}

// ---------------------------------------------------------------- 2

void criterion2(Outcome& out) {
    std::mt19937_64 rng(202);
    const std::size_t n = 16;
    const LinOp haar = make_wavelet_frame(n, 3, WaveletFamily::haar);
    const LinOp db2 = make_wavelet_frame(n, 2, WaveletFamily::daubechies2);
    const std::vector<LinOp> ops = {
        identity(Shape::image(n)), make_blur(n, 2.0), make_mask(Mask::random(n, 0.4, 3)), make_gradient(n), haar,
        db2, compose(make_mask(Mask::random(n, 0.4, 3)), make_blur(n, 2.0)),
        compose(make_gradient(n), haar), dense_operator(Eigen::MatrixXd::Random(9, 5)),
        slice_selector(Slice{3, Shape::flat(4)}, 10)};
    double adj = 0.0;
    for (const auto& op : ops) {
        for (int k = 0; k < 5; ++k) adj = std::max(adj, adjoint_mismatch(op, rng));
    }
    out.require(adj <= 1e-12, "adjoint mismatch " + sci(adj));

    double parseval = 0.0;
    for (const auto& w : {haar, db2}) {
        for (int k = 0; k < 5; ++k) {
            const Vector y = random_vector(Shape::image(n), rng);
            parseval = std::max(parseval, max_abs_diff(w.apply(w.adjoint(y)), y));
        }
    }
    out.require(parseval <= 1e-10, "W W* deviates from Id by " + sci(parseval));

    double smw = 0.0;
    const std::vector<LinOp> gram_ops = {make_blur(n, 2.0), make_mask(Mask::random(n, 0.5, 4)),
                                         make_gradient(n), compose(make_blur(n, 1.5), haar),
                                         dense_operator(Eigen::MatrixXd::Random(6, 9))};
    for (const auto& op : gram_ops) {
        for (double gamma : {0.01, 1.0, 37.0}) {
            const Vector rhs = random_vector(op.out_shape(), rng);
            const Vector v = invert_id_plus_gamma_LLt(op, gamma, rhs);
            const Vector back = v + gamma * op.apply(op.adjoint(v));
            smw = std::max(smw, norm(back - rhs) / norm(rhs));
        }
    }
    out.require(smw <= 1e-8, "shifted Gram residual " + sci(smw));

    double fd = 0.0;
    RestorationSpec spec;
    spec.size = 16;
    spec.levels = 2;
    spec.op = DegradationKind::blur_mask;
    spec.sigma = 1.0;
    const RestorationProblem p = build_restoration(spec);
    const SmoothFn f = *p.forms.forward.problem.smooth;
    const SmoothFn g = plus_ridge(quad_fidelity(random_vector(Shape::flat(7), rng),
                                                dense_operator(Eigen::MatrixXd::Random(7, 5))),
                                  0.3);
    for (const auto& [fn, shape] : {std::pair{f, p.forms.forward.problem.shape}, std::pair{g, Shape::flat(5)}}) {
        for (int k = 0; k < 5; ++k) {
            const Vector x = random_vector(shape, rng);
            const Vector d = random_vector(shape, rng);
            const double h = 1e-5;
            const double numeric = (fn.value(x + h * d) - fn.value(x - h * d)) / (2.0 * h);
            const double analytic = dot(fn.gradient(x), d);
            fd = std::max(fd, std::abs(numeric - analytic) / std::max(1e-12, std::abs(analytic)));
        }
    }
    out.require(fd <= 1e-5, "gradient vs finite difference " + sci(fd));
    if (out.ok) {
        out.detail << "adjoint " << sci(adj) << ", Parseval " << sci(parseval) << ", shifted Gram "
                   << sci(smw) << ", finite difference " << sci(fd);
    }
}

// ---------------------------------------------------------------- 3

void criterion3(Outcome& out) {
    std::mt19937_64 rng(303);
    const std::size_t steps = 200;

    // n = 1 against forward-backward.
    const Vector y = random_vector(Shape::flat(40), rng);
    const SmoothFn f = quad_fidelity(y, dense_operator(Eigen::MatrixXd::Random(40, 40) * 0.3));
    const ProxFn g = l1_norm(0.2);
    const double gamma = 1.5 * f.beta, lambda = 1.1;
    SplitProblem sp;
    sp.shape = Shape::flat(40);
    sp.smooth = f;
    sp.terms.push_back({g, {}});
    FbParams fp;
    fp.gamma = gamma;
    fp.lambda = lambda;
    fp.run.max_iter = steps;
    fp.run.stop_tol = 0.0;
    std::vector<Vector> fb;
    fp.run.observer = [&](std::size_t, const Vector& x) { fb.push_back(x); };
    fb_solve(sp, fp);

    SolverConfig c1;
    c1.n = 1;
    c1.gamma = constant_schedule(gamma);
    c1.lambda = constant_schedule(lambda);
    c1.max_iter = steps;
    const CheckedConfig cfg1 = validate_config(c1, f.beta);
    const GfbProblem p1 = GfbProblem::from(sp.shape, f, {g});
    GfbState s1 = GfbState::zeros(sp.shape, cfg1.weights());
    double fb_dev = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        s1 = gfb_step(s1, p1, cfg1);
        fb_dev = std::max(fb_dev, max_abs_diff(s1.x, fb[t]));
    }
    out.require(fb.size() == steps && fb_dev <= 1e-14, "n = 1 deviates from FB by " + sci(fb_dev));

    // F = 0 against product-space Douglas-Rachford.
    const Vector c = random_vector(Shape::flat(25), rng);
    const std::vector<ProxFn> terms = {quad_fidelity_term(c, identity(c.shape())), l1_norm(0.3),
                                       indicator_box(-0.5, 0.7), scaled(l1_norm(1.0), 0.1)};
    const std::vector<double> weights = {0.1, 0.2, 0.3, 0.4};
    const double dr_gamma = 0.6, dr_lambda = 1.4;
    SplitProblem dp;
    dp.shape = c.shape();
    for (const auto& t : terms) dp.terms.push_back({t, {}});
    DrParams drp;
    drp.gamma = dr_gamma;
    drp.lambda = constant_schedule(dr_lambda);
    drp.weights = weights;
    drp.run.max_iter = steps;
    drp.run.stop_tol = 0.0;
    std::vector<Vector> dr;
    drp.run.observer = [&](std::size_t, const Vector& x) { dr.push_back(x); };
    dr_solve(dp, drp);

    SolverConfig c2;
    c2.weights = weights;
    c2.n = terms.size();
    c2.gamma = constant_schedule(dr_gamma);
    c2.lambda = constant_schedule(dr_lambda);
    c2.max_iter = steps;
    const CheckedConfig cfg2 = validate_config(c2, kInfinity);
    const GfbProblem p2 = GfbProblem::from(c.shape(), std::nullopt, terms);
    GfbState s2 = GfbState::zeros(c.shape(), cfg2.weights());
    double dr_dev = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        s2 = gfb_step(s2, p2, cfg2);
        dr_dev = std::max(dr_dev, max_abs_diff(s2.x, dr[t]));
    }
    out.require(dr.size() == steps && dr_dev <= 1e-12, "B = 0 deviates from DR by " + sci(dr_dev));
    if (out.ok) out.detail << "max per-step deviation: FB " << sci(fb_dev) << ", DR " << sci(dr_dev);
}

// ---------------------------------------------------------------- 4

std::vector<SyntheticSpec> agreement_suite() {
    std::vector<SyntheticSpec> specs;
    for (std::uint64_t seed : {3u, 17u}) {
        specs.push_back({SyntheticFamily::lasso_1d, 1, 0.5, seed});
        specs.push_back({SyntheticFamily::two_l1, 8, 0.5, seed});
        specs.push_back({SyntheticFamily::two_l1, 64, 0.3, seed});
        specs.push_back({SyntheticFamily::group_2d, 16, 0.4, seed});
        specs.push_back({SyntheticFamily::constrained_quadratic, 4, 0.5, seed});
    }
    return specs;
}

void criterion4(Outcome& out) {
    const std::size_t budget = 20000;
    double worst = 0.0, worst_res = 0.0;
    std::size_t worst_iters = 0;
    for (const auto& spec : agreement_suite()) {
        const SyntheticProblem sp = build_synthetic(spec);
        const std::string tag = to_string(spec.family) + "/d" + std::to_string(sp.spec.d) + "/s" +
                                std::to_string(spec.seed);
        const double scale = std::max(norm(sp.oracle), 1e-12);
        RunControl rc;
        rc.max_iter = budget;
        rc.stop_tol = 1e-13;
        rc.record_objective = false;

        const auto check = [&](const char* who, const Vector& x, std::size_t iters) {
            const double rel = norm(x - sp.oracle) / scale;
            worst = std::max(worst, rel);
            worst_iters = std::max(worst_iters, iters);
            out.require(rel <= 1e-5, std::string(who) + " on " + tag + " off by " + sci(rel));
        };

        SolverConfig gc;
        gc.max_iter = budget;
        gc.stop_tol = 1e-13;
        gc.record_objective = false;
        const GfbProblem gp = to_gfb_problem(sp.forms.forward.problem);
        const GfbResult g = gfb_solve(gp, gc);
        check("gfb", sp.forms.forward.primary(g.state.x), g.iterations);
        const CheckedConfig cc = validate_config(
            [&] {
                SolverConfig d = SolverConfig::defaults(gp.beta());
                d.n = gp.A.size();
                return d;
            }(),
            gp.beta());
        const double res = fixed_point_residual(g.state, gp, cc);
        worst_res = std::max(worst_res, res);
        out.require(res < 1e-8, "gfb residual on " + tag + " is " + sci(res));

        DrParams dp;
        dp.run = rc;
        const SolveResult d = dr_solve(sp.forms.douglas.problem, dp);
        check("dr", sp.forms.douglas.primary(d.x), d.iterations);
        ChPoParams cp;
        cp.run = rc;
        const SolveResult c = chpo_solve(sp.forms.primal_dual.problem, cp);
        check("chpo", sp.forms.primal_dual.primary(c.x), c.iterations);
        HpeParams hp;
        hp.run = rc;
        const SolveResult h = hpe_solve(sp.forms.forward.problem, hp);
        check("hpe", sp.forms.forward.primary(h.x), h.iterations);
        CoPeParams op;
        op.run = rc;
        const SolveResult o = cope_solve(sp.forms.composite.problem, op);
        check("cope", sp.forms.composite.primary(o.x), o.iterations);
    }
    if (out.ok) {
        out.detail << agreement_suite().size() << " problems x 5 solvers, worst relative error " << sci(worst)
                   << ", most iterations " << worst_iters << ", worst gfb residual " << sci(worst_res);
    }
}

// ---------------------------------------------------------------- 5

void criterion5(Outcome& out) {
    double worst_rise = 0.0, worst_move = 0.0;
    for (auto fam : all_synthetic_families()) {
        for (std::uint64_t seed : {3u, 11u}) {
            const SyntheticProblem sp = build_synthetic({fam, 8, 0.5, seed});
            const GfbProblem p = to_gfb_problem(sp.forms.forward.problem);
            const std::string tag = to_string(fam) + "/s" + std::to_string(seed);

            SolverConfig exact;
            exact.max_iter = 20000;
            exact.stop_tol = 1e-15;
            exact.record_objective = false;
            const GfbResult ref = gfb_solve(p, exact);

            SolverConfig probe = exact;
            probe.max_iter = 500;
            probe.stop_tol = 0.0;
            probe.reference = ref.state.z;
            const GfbResult r = gfb_solve(p, probe);
            double prev = product_norm(GfbState::zeros(p.shape, ref.state.z.weights).z - ref.state.z);
            for (const auto& rec : r.log.records) {
                worst_rise = std::max(worst_rise, rec.distance - prev);
                prev = rec.distance;
            }

            SolverConfig noisy = exact;
            noisy.errors = polynomial_errors(0.1, 2.0, 1000 + seed);
            const GfbResult e = gfb_solve(p, noisy);
            const double move = norm(e.state.x - ref.state.x) / std::max(1.0, norm(ref.state.x));
            worst_move = std::max(worst_move, move);
            out.require(move < 1e-5, "summable errors moved " + tag + " by " + sci(move));
        }
    }
    out.require(worst_rise <= 1e-10, "distance to the fixed point rose by " + sci(worst_rise));

    const SyntheticProblem two = build_synthetic({SyntheticFamily::two_l1, 16, 0.5, 5});
    const GfbProblem p = to_gfb_problem(two.forms.forward.problem);
    const double beta = p.beta(), gamma = 1.8 * beta;
    const double lam = 0.99 * fixed_step_lambda_bound(beta, gamma);
    SolverConfig c;
    c.gamma = constant_schedule(gamma);
    c.lambda = constant_schedule(lam);
    c.max_iter = 20000;
    c.stop_tol = 1e-12;
    const GfbResult r = gfb_solve(p, c);
    const double err = norm(r.x - two.oracle) / std::max(1.0, norm(two.oracle));
    out.require(std::abs(fixed_step_lambda_bound(1.0, 1.8) - 1.0555555555555556) < 1e-15,
                "lambda bound formula");
    out.require(r.converged && err < 1e-8,
                "lambda = " + sci(lam) + " did not converge (error " + sci(err) + ")");
    if (out.ok) {
        out.detail << "max distance rise " << sci(worst_rise) << ", max error-induced move " << sci(worst_move)
                   << ", lambda = 0.99 x 1.0555... converged in " << r.iterations << " iterations";
    }
}

// ---------------------------------------------------------------- 6

void criterion6(Outcome& out) {
    const auto label = [](SolverConfig cfg, double beta) -> std::string {
        try {
            validate_config(std::move(cfg), beta);
        } catch (const ConfigError& e) {
            return e.assumption().empty() ? "unlabeled" : e.assumption();
        }
        return "accepted";
    };
    const auto make = [](double gamma, double lambda, StepMode mode) {
        SolverConfig c;
        c.n = 2;
        c.gamma = constant_schedule(gamma);
        c.lambda = constant_schedule(lambda);
        c.mode = mode;
        c.max_iter = 100;
        return c;
    };
    const auto fixed = StepMode::fixed_step;
    const auto varying = StepMode::varying_step;
    const double beta = 0.5;
    const double bound = fixed_step_lambda_bound(beta, 0.9);
    struct Case {
        std::string name;
        SolverConfig cfg;
        std::string expect;
    };
    std::vector<Case> cases = {
        {"gamma = 2 beta", make(2 * beta, 1.0, fixed), "A1(i)"},
        {"gamma > 2 beta", make(3 * beta, 1.0, fixed), "A1(i)"},
        {"gamma = 0", make(0.0, 1.0, fixed), "A1(i)"},
        {"lambda = bound", make(0.9, bound, fixed), "A1(ii)"},
        {"lambda just below bound", make(0.9, std::nextafter(bound, 0.0), fixed), "accepted"},
        {"lambda = 0", make(0.9, 0.0, fixed), "A1(ii)"},
        {"lambda = 3/2 at small gamma", make(0.1, 1.5, fixed), "A1(ii)"},
        {"varying gamma = 2 beta", make(2 * beta, 1.0, varying), "A2(i)"},
        {"varying lambda = 1", make(0.9, 1.0, varying), "accepted"},
        {"varying lambda > 1", make(0.9, std::nextafter(1.0, 2.0), varying), "A2(ii)"},
        {"varying lambda = 0", make(0.9, 0.0, varying), "A2(ii)"},
    };
    SolverConfig late = make(0.9, 1.0, fixed);
    late.gamma = [](std::size_t t) { return t < 99 ? 0.9 : 1.0; };
    cases.push_back({"non-constant gamma in fixed mode", late, "A1(i)"});
    SolverConfig late_v = make(0.9, 1.0, varying);
    late_v.gamma = [](std::size_t t) { return t < 99 ? 0.9 : 1.0; };
    cases.push_back({"varying gamma reaching 2 beta", late_v, "A2(i)"});
    SolverConfig errs = make(0.9, 1.0, fixed);
    errs.errors = polynomial_errors(0.1, 1.0, 1);
    cases.push_back({"non-summable errors", errs, "A0(iii)"});

    for (auto& c : cases) {
        const std::string got = label(c.cfg, beta);
        out.require(got == c.expect, c.name + ": expected " + c.expect + ", got " + got);
    }
    if (out.ok) out.detail << cases.size() << " boundary and violation cases labeled correctly";
}

// ---------------------------------------------------------------- 7

bool criterion7(Outcome& out) {
    const RestorationProblem problem =
        build_restoration(load_restoration_config(std::filesystem::path(GFB_DATA_DIR) / "composite_tv.cfg"));
    cli::RunOptions options;
    options.iterations = 100;
    double best = kInfinity, gfb_final = kNaN;
    std::ostringstream values;
    for (Algorithm a : comparison_algorithms()) {
        const auto run = cli::run_solver(problem.forms, a, cli::restoration_defaults(problem, a), options);
        const double final_obj = run.result.log.back().objective;
        values << (a == Algorithm::gfb ? "" : ", ") << to_string(a) << " " << final_obj;
        best = std::min(best, final_obj);
        if (a == Algorithm::gfb) gfb_final = final_obj;
    }
    out.detail << "objective at iteration 100: " << values.str();
    return gfb_final <= 1.001 * best;
}

// ---------------------------------------------------------------- 8

void criterion8(Outcome& out) {
    std::mt19937_64 rng(808);
    double single = 0.0, pair = 0.0;
    const BlockLayer layer = build_square_blocks(8, 1, 2, {1.0}).layers[3];
    for (int k = 0; k < 20; ++k) {
        const Vector y = random_vector(Shape::image(8), rng, 2.0);
        single = std::max(single, max_abs_diff(prox_of_sum(y, {l1_norm(0.4)}), prox_l1(y, 1.0, 0.4)));
        single = std::max(single, max_abs_diff(prox_of_sum(y, {block_l12_norm(layer, 0.6)}),
                                               prox_block_l12(y, 1.0, layer, 0.6)));
        Vector clip = y;
        for (std::size_t i = 0; i < clip.size(); ++i) clip[i] = std::clamp(clip[i], -0.5, 0.8);
        single = std::max(single, max_abs_diff(prox_of_sum(y, {indicator_box(-0.5, 0.8)}), clip));
        single = std::max(single, max_abs_diff(prox_of_sum(y, {}), y));
        SolverConfig tight;
        tight.max_iter = 5000;
        tight.stop_tol = 1e-12;
        pair = std::max(pair, max_abs_diff(prox_of_sum(y, {l1_norm(0.3), l1_norm(0.5)}, tight),
                                           prox_l1(y, 1.0, 0.8)));
    }
    out.require(single <= 1e-8, "single-term reduction off by " + sci(single));
    out.require(pair <= 1e-8, "l1 + l1 off by " + sci(pair));
    if (out.ok) out.detail << "single-term " << sci(single) << ", l1 + l1 " << sci(pair);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<bool(Outcome&)> run;
        bool soft;
    };
    const auto hard = [](void (*f)(Outcome&)) {
        return [f](Outcome& o) {
            f(o);
            return o.ok;
        };
    };
    const std::vector<Criterion> criteria = {
        {1, "prox correctness", 10, hard(criterion1), false},
        {2, "operator algebra", 10, hard(criterion2), false},
        {3, "reduction identities", 5, hard(criterion3), false},
        {4, "solution agreement", 60, hard(criterion4), false},
        {5, "convergence diagnostics", 60, hard(criterion5), false},
        {6, "config validation gate", 1, hard(criterion6), false},
        {7, "composite + TV protocol", 300, criterion7, true},
        {8, "prox of a sum", 5, hard(criterion8), false},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome out;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = c.run(out);
        } catch (const std::exception& e) {
            out.detail << "exception: " << e.what();
            ok = false;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) {
            out.detail << (out.detail.str().empty() ? "" : "; ") << "runtime over " << c.limit_s << " s";
            ok = false;
        }
        const char* status = ok ? "PASS" : (c.soft ? "DEVIATION" : "FAIL");
        std::printf("%s criterion %d: %s (%.2f s) %s\n", status, c.id, c.name, secs, out.detail.str().c_str());
        std::fflush(stdout);
        if (!ok && !c.soft) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
