#include "gfb/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gfb {

// ---------------------------------------------------------------- Mask

Mask::Mask(std::size_t n, std::vector<bool> missing) : n_(n), missing_(std::move(missing)) {
    if (missing_.size() != n * n) throw DimensionError("Mask: missing set must have N*N entries");
}

Mask Mask::random(std::size_t n, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("Mask: rho must lie in [0,1]");
    const std::size_t total = n * n;
    const auto count = static_cast<std::size_t>(std::llround(rho * static_cast<double>(total)));
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<bool> missing(total, false);
    for (std::size_t k = 0; k < count; ++k) missing[idx[k]] = true;
    return Mask(n, std::move(missing));
}

double Mask::rho() const {
    const auto m = std::count(missing_.begin(), missing_.end(), true);
    return static_cast<double>(m) / static_cast<double>(missing_.size());
}

Vector Mask::apply(const Vector& y) const {
    Vector out = y;
    for (std::size_t p = 0; p < missing_.size(); ++p) {
        if (missing_[p]) out[p] = 0.0;
    }
    return out;
}

std::optional<Vector> Mask::solve_shifted_gram(double gamma, const Vector& rhs) const {
    Vector out = rhs;
    const double s = 1.0 / (1.0 + gamma);
    for (std::size_t p = 0; p < missing_.size(); ++p) {
        if (!missing_[p]) out[p] *= s;
    }
    return out;
}

// ---------------------------------------------------------------- GaussianBlur

GaussianBlur::GaussianBlur(std::size_t n, double sigma)
    : n_(n), sigma_(sigma), radius_(0), kernel_(Shape::image(n)) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("GaussianBlur: sigma must be positive");
    }
    radius_ = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<Fft2d::Tap> taps;
    double mass = 0.0;
    for (int i = -radius_; i <= radius_; ++i) {
        for (int j = -radius_; j <= radius_; ++j) {
            const double w = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
            taps.push_back({i, j, w});
            mass += w;
        }
    }
    for (auto& t : taps) t.value /= mass;

    const long m = static_cast<long>(n);
    for (const auto& t : taps) {
        const auto r = static_cast<std::size_t>(((t.row % m) + m) % m);
        const auto c = static_cast<std::size_t>(((t.col % m) + m) % m);
        kernel_.at(r, c) += t.value;
    }

    fft_ = std::make_shared<const Fft2d>(n);
    transfer_ = fft_->kernel_spectrum(taps);
    bound_ = 0.0;
    for (const auto& h : transfer_) bound_ = std::max(bound_, std::abs(h));
}

Vector GaussianBlur::filter(const Vector& y, bool conjugate) const {
    ComplexImage f = fft_->forward(y.channel(0));
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] *= conjugate ? std::conj(transfer_[k]) : transfer_[k];
    }
    std::vector<double> out = fft_->inverse_real(f);
    return Vector(Shape::image(n_), Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())));
}

Vector GaussianBlur::apply(const Vector& y) const { return filter(y, false); }

Vector GaussianBlur::adjoint(const Vector& y) const { return filter(y, true); }

std::optional<Vector> GaussianBlur::solve_shifted_gram(double gamma, const Vector& rhs) const {
    ComplexImage f = fft_->forward(rhs.channel(0));
    for (std::size_t k = 0; k < f.size(); ++k) f[k] /= 1.0 + gamma * std::norm(transfer_[k]);
    std::vector<double> out = fft_->inverse_real(f);
    return Vector(Shape::image(n_), Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())));
}

// ---------------------------------------------------------------- ImageGradient

ImageGradient::ImageGradient(std::size_t n) : n_(n), fft_(std::make_shared<const Fft2d>(n)) {
    const Fft2d::Tap v[] = {{0, 0, -1.0}, {1, 0, 1.0}};
    const Fft2d::Tap h[] = {{0, 0, -1.0}, {0, 1, 1.0}};
    dv_ = fft_->kernel_spectrum(v);
    dh_ = fft_->kernel_spectrum(h);
}

double ImageGradient::norm_bound() const { return std::sqrt(8.0); }

Vector ImageGradient::apply(const Vector& y) const {
    Vector g(out_shape());
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t up = (i + n - 1) % n;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t left = (j + n - 1) % n;
            g.at(i, j, 0) = y.at(up, j) - y.at(i, j);
            g.at(i, j, 1) = y.at(i, left) - y.at(i, j);
        }
    }
    return g;
}

Vector ImageGradient::adjoint(const Vector& g) const {
    Vector y(in_shape());
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t down = (i + 1) % n;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t right = (j + 1) % n;
            y.at(i, j) = g.at(down, j, 0) - g.at(i, j, 0) + g.at(i, right, 1) - g.at(i, j, 1);
        }
    }
    return y;
}

std::optional<Vector> ImageGradient::solve_shifted_gram(double gamma, const Vector& rhs) const {
    // (Id + gamma d d^H)^{-1} per frequency, d = (D_v, D_h).
    ComplexImage rv = fft_->forward(rhs.channel(0));
    ComplexImage rh = fft_->forward(rhs.channel(1));
    for (std::size_t k = 0; k < rv.size(); ++k) {
        const auto proj = std::conj(dv_[k]) * rv[k] + std::conj(dh_[k]) * rh[k];
        const double d2 = std::norm(dv_[k]) + std::norm(dh_[k]);
        const auto coef = gamma * proj / (1.0 + gamma * d2);
        rv[k] -= coef * dv_[k];
        rh[k] -= coef * dh_[k];
    }
    std::vector<double> v = fft_->inverse_real(rv);
    std::vector<double> h = fft_->inverse_real(rh);
    Vector out(out_shape());
    std::copy(v.begin(), v.end(), out.channel(0).begin());
    std::copy(h.begin(), h.end(), out.channel(1).begin());
    return out;
}

LinOp make_mask(Mask mask) { return LinOp(std::make_shared<Mask>(std::move(mask))); }

LinOp make_blur(std::size_t n, double sigma) {
    return LinOp(std::make_shared<GaussianBlur>(n, sigma));
}

LinOp make_gradient(std::size_t n) { return LinOp(std::make_shared<ImageGradient>(n)); }

}  // namespace gfb
