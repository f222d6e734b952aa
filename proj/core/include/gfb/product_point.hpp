#pragma once

#include <vector>

#include "gfb/vector.hpp"

namespace gfb {

/// Point z = (z_1, ..., z_n) of the product space with the weighted inner
/// product <a, b> = sum_i w_i <a_i, b_i>.
struct ProductPoint {
    std::vector<Vector> parts;
    std::vector<double> weights;

    /// n copies of `value` with the given weights.
    static ProductPoint replicate(const Vector& value, std::vector<double> weights);

    std::size_t n() const { return parts.size(); }
    const Shape& shape() const { return parts.front().shape(); }
};

/// n equal weights 1/n.
std::vector<double> equal_weights(std::size_t n);

/// Throws ConfigError unless n >= 1, every weight is in (0, 1] (1 only when
/// n = 1) and the weights sum to one within 1e-12.
void check_weights(const std::vector<double>& weights);

double product_dot(const ProductPoint& a, const ProductPoint& b);
double product_norm(const ProductPoint& a);

/// Weighted barycenter sum_i w_i z_i, accumulated left to right.
Vector barycenter(const ProductPoint& z);

/// Orthogonal projection onto the diagonal subspace {(x, ..., x)}.
ProductPoint project_S(const ProductPoint& z);

ProductPoint operator-(const ProductPoint& a, const ProductPoint& b);

}  // namespace gfb
