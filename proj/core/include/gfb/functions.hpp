#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "gfb/blocks.hpp"
#include "gfb/linop.hpp"

namespace gfb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Differentiable convex function whose gradient is (1/beta)-Lipschitz.
struct SmoothFn {
    std::string name;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    double beta = 1.0;
};

/// Convex function with a computable proximity operator
/// prox(x, gamma) = argmin_y 1/2 ||x - y||^2 + gamma G(y).
/// `value` may return +infinity (indicators).
struct ProxFn {
    std::string name;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&, double)> prox;
};

// ---------------------------------------------------------------- closed forms

/// Componentwise soft-thresholding by gamma * mu.
Vector prox_l1(const Vector& x, double gamma, double mu);

/// Block soft-thresholding by gamma * mu * w_b on each block of the layer;
/// blocks whose norm does not exceed the threshold are set to zero.
Vector prox_block_l12(const Vector& x, double gamma, const BlockLayer& layer, double mu);

/// sum_p sqrt(v_p^2 + h_p^2) of an N x N x 2 gradient field.
double tv_norm(const Vector& g);

/// prox of gamma/2 ||y - L .||^2, i.e. (Id + gamma L*L)^{-1}(x + gamma L* y),
/// evaluated with the Sherman-Morrison-Woodbury identity. L must reduce to
/// identity, mask, blur or dense after peeling tight-frame factors.
Vector prox_quad_fidelity(const Vector& x, double gamma, const Vector& y, const LinOp& op);

/// Orthogonal projection of (x, u) onto {(x, u) : u = L x}.
std::pair<Vector, Vector> prox_ker_constraint(const Vector& x, const Vector& u, double gamma,
                                              const LinOp& op);

/// prox of gamma G* via the Moreau identity: z - gamma prox_{G/gamma}(z/gamma).
Vector prox_conjugate(const ProxFn& g, const Vector& z, double gamma);

// ---------------------------------------------------------------- smooth terms

/// 1/2 ||y - L x||^2, gradient L*(Lx - y), beta = 1 / norm_bound(L)^2.
SmoothFn quad_fidelity(const Vector& y, const LinOp& op);

/// F + c/2 ||x||^2.
SmoothFn plus_ridge(SmoothFn f, double c);

// ---------------------------------------------------------------- simple terms

ProxFn zero_function();
ProxFn l1_norm(double mu);
/// mu * sum_b w_b ||x_b|| over one non-overlapping layer.
ProxFn block_l12_norm(BlockLayer layer, double mu);
/// 1/2 ||y - L x||^2 used as a prox term.
ProxFn quad_fidelity_term(const Vector& y, const LinOp& op);
/// Indicator of {u = L x} on a concatenated variable holding x and u.
ProxFn kernel_constraint(const LinOp& op, Slice x, Slice u, std::size_t total);
ProxFn indicator_point(Vector c);
ProxFn indicator_nonnegative();
ProxFn indicator_box(double lo, double hi);
/// mu * G.
ProxFn scaled(ProxFn g, double mu);
/// Applies `g` to one slice of a concatenated variable; the rest is untouched.
ProxFn on_slice(ProxFn g, Slice slice, std::size_t total);

}  // namespace gfb
