#include "gfb/functions.hpp"

#include <cmath>

namespace gfb {

namespace {

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string(what) + " must be finite and >= 0");
    }
}

}  // namespace

Vector prox_l1(const Vector& x, double gamma, double mu) {
    require_nonnegative(gamma, "prox_l1: gamma");
    require_nonnegative(mu, "prox_l1: mu");
    const double t = gamma * mu;
    Vector out = x;
    for (auto& v : out.values()) v = std::copysign(std::max(std::abs(v) - t, 0.0), v);
    return out;
}

Vector prox_block_l12(const Vector& x, double gamma, const BlockLayer& layer, double mu) {
    require_nonnegative(gamma, "prox_block_l12: gamma");
    require_nonnegative(mu, "prox_block_l12: mu");
    if (x.size() != layer.dimension()) {
        throw DimensionError("prox_block_l12: vector size " + std::to_string(x.size()) +
                             " does not match layer dimension " +
                             std::to_string(layer.dimension()));
    }
    Vector out = x;
    for (std::size_t b = 0; b < layer.num_blocks(); ++b) {
        const auto idx = layer.block(b);
        double sq = 0.0;
        for (std::size_t i : idx) sq += x[i] * x[i];
        const double nrm = std::sqrt(sq);
        const double thr = gamma * mu * layer.weight(b);
        const double scale = nrm <= thr ? 0.0 : 1.0 - thr / nrm;
        for (std::size_t i : idx) out[i] = scale * x[i];
    }
    return out;
}

double tv_norm(const Vector& g) {
    if (g.shape().channels != 2) throw DimensionError("tv_norm: expected a 2-channel field");
    const auto v = g.channel(0);
    const auto h = g.channel(1);
    double total = 0.0;
    for (std::size_t p = 0; p < v.size(); ++p) total += std::hypot(v[p], h[p]);
    return total;
}

Vector prox_quad_fidelity(const Vector& x, double gamma, const Vector& y, const LinOp& op) {
    require_nonnegative(gamma, "prox_quad_fidelity: gamma");
    require_same_shape(op.in_shape(), x.shape(), "prox_quad_fidelity");
    require_same_shape(op.out_shape(), y.shape(), "prox_quad_fidelity");
    if (gamma == 0.0) return x;
    if (!has_shifted_gram_inverse(op)) {
        throw ConfigError("prox_quad_fidelity: (Id + gamma L*L) has no closed-form inverse for '" +
                          op.name() +
                          "'; introduce an auxiliary variable u = L x with a kernel-constraint "
                          "indicator and put the fidelity on u");
    }
    Vector r = x + gamma * op.adjoint(y);
    const Vector lr = op.apply(r);
    r -= gamma * op.adjoint(invert_id_plus_gamma_LLt(op, gamma, lr));
    return r;
}

std::pair<Vector, Vector> prox_ker_constraint(const Vector& x, const Vector& u, double /*gamma*/,
                                              const LinOp& op) {
    require_same_shape(op.in_shape(), x.shape(), "prox_ker_constraint");
    require_same_shape(op.out_shape(), u.shape(), "prox_ker_constraint");
    if (!has_shifted_gram_inverse(op)) {
        throw ConfigError("prox_ker_constraint: unsupported operator '" + op.name() + "'");
    }
    Vector r = x + op.adjoint(u);
    const Vector lr = op.apply(r);
    r -= op.adjoint(invert_id_plus_gamma_LLt(op, 1.0, lr));
    Vector lx = op.apply(r);
    return {std::move(r), std::move(lx)};
}

Vector prox_conjugate(const ProxFn& g, const Vector& z, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("prox_conjugate: gamma must be > 0");
    return z - gamma * g.prox((1.0 / gamma) * z, 1.0 / gamma);
}

SmoothFn quad_fidelity(const Vector& y, const LinOp& op) {
    require_same_shape(op.out_shape(), y.shape(), "quad_fidelity");
    const double b = op.norm_bound();
    SmoothFn f;
    f.name = "quad_fidelity(" + op.name() + ")";
    f.value = [y, op](const Vector& x) { return 0.5 * squared_norm(y - op.apply(x)); };
    f.gradient = [y, op](const Vector& x) { return op.adjoint(op.apply(x) - y); };
    f.beta = b > 0.0 ? 1.0 / (b * b) : kInfinity;
    return f;
}

SmoothFn plus_ridge(SmoothFn f, double c) {
    require_nonnegative(c, "plus_ridge: c");
    SmoothFn g;
    g.name = f.name + "+ridge";
    g.value = [v = f.value, c](const Vector& x) { return v(x) + 0.5 * c * squared_norm(x); };
    g.gradient = [d = f.gradient, c](const Vector& x) { return d(x) + c * x; };
    g.beta = 1.0 / (1.0 / f.beta + c);
    return g;
}

ProxFn zero_function() {
    return {"zero", [](const Vector&) { return 0.0; }, [](const Vector& x, double) { return x; }};
}

ProxFn l1_norm(double mu) {
    require_nonnegative(mu, "l1_norm: mu");
    return {"l1",
            [mu](const Vector& x) { return mu * x.values().lpNorm<1>(); },
            [mu](const Vector& x, double gamma) { return prox_l1(x, gamma, mu); }};
}

ProxFn block_l12_norm(BlockLayer layer, double mu) {
    require_nonnegative(mu, "block_l12_norm: mu");
    auto shared = std::make_shared<const BlockLayer>(std::move(layer));
    return {"block_l12",
            [shared, mu](const Vector& x) { return mu * block_norm(x, *shared); },
            [shared, mu](const Vector& x, double gamma) {
                return prox_block_l12(x, gamma, *shared, mu);
            }};
}

ProxFn quad_fidelity_term(const Vector& y, const LinOp& op) {
    if (!has_shifted_gram_inverse(op)) {
        throw ConfigError("quad_fidelity_term: no closed-form prox for '" + op.name() +
                          "'; use an auxiliary variable");
    }
    return {"quad_fidelity",
            [y, op](const Vector& x) { return 0.5 * squared_norm(y - op.apply(x)); },
            [y, op](const Vector& x, double gamma) { return prox_quad_fidelity(x, gamma, y, op); }};
}

ProxFn kernel_constraint(const LinOp& op, Slice xs, Slice us, std::size_t total) {
    require_same_shape(op.in_shape(), xs.shape, "kernel_constraint");
    require_same_shape(op.out_shape(), us.shape, "kernel_constraint");
    if (xs.end() > total || us.end() > total) throw DimensionError("kernel_constraint: slices");
    if (!has_shifted_gram_inverse(op)) {
        throw ConfigError("kernel_constraint: unsupported operator '" + op.name() + "'");
    }
    return {"ker(" + op.name() + ")",
            [op, xs, us](const Vector& z) {
                const Vector u = extract(z, us);
                const double gap = norm(u - op.apply(extract(z, xs)));
                return gap <= 1e-9 * (1.0 + norm(u)) ? 0.0 : kInfinity;
            },
            [op, xs, us](const Vector& z, double gamma) {
                auto [x, u] = prox_ker_constraint(extract(z, xs), extract(z, us), gamma, op);
                Vector out = z;
                insert(out, xs, x);
                insert(out, us, u);
                return out;
            }};
}

ProxFn indicator_point(Vector c) {
    return {"point",
            [c](const Vector& x) { return norm(x - c) <= 1e-12 * (1.0 + norm(c)) ? 0.0 : kInfinity; },
            [c](const Vector& x, double) {
                require_same_shape(c.shape(), x.shape(), "indicator_point");
                return c;
            }};
}

ProxFn indicator_nonnegative() {
    return {"nonnegative",
            [](const Vector& x) { return x.values().minCoeff() >= 0.0 ? 0.0 : kInfinity; },
            [](const Vector& x, double) {
                Vector out = x;
                out.values() = out.values().cwiseMax(0.0);
                return out;
            }};
}

ProxFn indicator_box(double lo, double hi) {
    if (!(lo <= hi)) throw ConfigError("indicator_box: lo must not exceed hi");
    return {"box",
            [lo, hi](const Vector& x) {
                return x.values().minCoeff() >= lo && x.values().maxCoeff() <= hi ? 0.0 : kInfinity;
            },
            [lo, hi](const Vector& x, double) {
                Vector out = x;
                out.values() = out.values().cwiseMax(lo).cwiseMin(hi);
                return out;
            }};
}

ProxFn scaled(ProxFn g, double mu) {
    require_nonnegative(mu, "scaled: mu");
    return {std::to_string(mu) + "*" + g.name,
            [v = g.value, mu](const Vector& x) { return mu == 0.0 ? 0.0 : mu * v(x); },
            [p = g.prox, mu](const Vector& x, double gamma) { return p(x, gamma * mu); }};
}

ProxFn on_slice(ProxFn g, Slice slice, std::size_t total) {
    if (slice.end() > total) throw DimensionError("on_slice: slice exceeds total size");
    return {g.name + "@slice",
            [v = g.value, slice](const Vector& z) { return v(extract(z, slice)); },
            [p = g.prox, slice](const Vector& z, double gamma) {
                Vector out = z;
                insert(out, slice, p(extract(z, slice), gamma));
                return out;
            }};
}

}  // namespace gfb
