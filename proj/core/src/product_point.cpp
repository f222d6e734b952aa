#include "gfb/product_point.hpp"

#include <cmath>

namespace gfb {

namespace {

void check_compatible(const ProductPoint& a, const ProductPoint& b, const char* where) {
    if (a.n() != b.n() || a.weights != b.weights) {
        throw ConfigError(std::string(where) + ": product points have different weights");
    }
    for (std::size_t i = 0; i < a.n(); ++i) {
        require_same_shape(a.parts[i].shape(), b.parts[i].shape(), where);
    }
}

}  // namespace

ProductPoint ProductPoint::replicate(const Vector& value, std::vector<double> weights) {
    ProductPoint z;
    z.parts.assign(weights.size(), value);
    z.weights = std::move(weights);
    return z;
}

std::vector<double> equal_weights(std::size_t n) {
    if (n == 0) throw ConfigError("equal_weights: n must be at least 1");
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

void check_weights(const std::vector<double>& weights) {
    if (weights.empty()) throw ConfigError("weights: n must be at least 1");
    double sum = 0.0;
    for (double w : weights) {
        const bool ok = weights.size() == 1 ? (w > 0.0 && w <= 1.0) : (w > 0.0 && w < 1.0);
        if (!ok || !std::isfinite(w)) {
            throw ConfigError("weights: every weight must lie in ]0,1[");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("weights: weights must sum to 1");
}

double product_dot(const ProductPoint& a, const ProductPoint& b) {
    check_compatible(a, b, "product_dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i) s += a.weights[i] * dot(a.parts[i], b.parts[i]);
    return s;
}

double product_norm(const ProductPoint& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i) s += a.weights[i] * squared_norm(a.parts[i]);
    return std::sqrt(s);
}

Vector barycenter(const ProductPoint& z) {
    if (z.n() == 0) throw ConfigError("barycenter: empty product point");
    Vector x(z.shape());
    for (std::size_t i = 0; i < z.n(); ++i) {
        require_same_shape(x.shape(), z.parts[i].shape(), "barycenter");
        x.values() += z.weights[i] * z.parts[i].values();
    }
    return x;
}

ProductPoint project_S(const ProductPoint& z) {
    return ProductPoint::replicate(barycenter(z), z.weights);
}

ProductPoint operator-(const ProductPoint& a, const ProductPoint& b) {
    check_compatible(a, b, "ProductPoint::operator-");
    ProductPoint d = a;
    for (std::size_t i = 0; i < a.n(); ++i) d.parts[i] -= b.parts[i];
    return d;
}

}  // namespace gfb
