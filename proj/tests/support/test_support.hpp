#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "gfb/functions.hpp"
#include "gfb/linop.hpp"

namespace gfb::testing {

inline Vector random_vector(const Shape& shape, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vector v(shape);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng);
    return v;
}

/// Column k is op applied to the k-th basis vector.
inline Eigen::MatrixXd materialize(const LinOp& op) {
    const Shape in = op.in_shape();
    const Shape out = op.out_shape();
    Eigen::MatrixXd m(out.size(), in.size());
    for (std::size_t k = 0; k < in.size(); ++k) {
        Vector e(in);
        e[k] = 1.0;
        m.col(static_cast<Eigen::Index>(k)) = op.apply(e).values();
    }
    return m;
}

/// |<Lx, y> - <x, L*y>| / (||Lx|| ||y|| + ||x|| ||L*y||).
inline double adjoint_mismatch(const LinOp& op, std::mt19937_64& rng) {
    const Vector x = random_vector(op.in_shape(), rng);
    const Vector y = random_vector(op.out_shape(), rng);
    const Vector lx = op.apply(x);
    const Vector lty = op.adjoint(y);
    const double scale = norm(lx) * norm(y) + norm(x) * norm(lty);
    return std::abs(dot(lx, y) - dot(x, lty)) / scale;
}

/// Largest violation of ||Pu - Pv||^2 <= <Pu - Pv, u - v> over `pairs`
/// random pairs, relative to ||u - v||^2.
inline double firm_nonexpansive_violation(const std::function<Vector(const Vector&)>& p,
                                          const Shape& shape, std::mt19937_64& rng,
                                          int pairs = 100, double scale = 1.0) {
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const Vector u = random_vector(shape, rng, scale);
        const Vector v = random_vector(shape, rng, scale);
        const Vector d = p(u) - p(v);
        const double viol = (squared_norm(d) - dot(d, u - v)) / squared_norm(u - v);
        worst = std::max(worst, viol);
    }
    return worst;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

inline double relative_error(const Vector& x, const Vector& ref) {
    return norm(x - ref) / std::max(norm(ref), 1e-300);
}

}  // namespace gfb::testing
