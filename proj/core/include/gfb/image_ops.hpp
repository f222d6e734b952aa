#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gfb/fft.hpp"
#include "gfb/linop.hpp"

namespace gfb {

/// Inpainting mask M: (M y)_p = 0 for p in the missing set, y_p otherwise.
class Mask final : public LinearOperator {
public:
    /// `missing` has N*N entries, true marking a missing pixel.
    Mask(std::size_t n, std::vector<bool> missing);

    /// Exactly round(rho N^2) missing pixels drawn uniformly from `seed`.
    static Mask random(std::size_t n, double rho, std::uint64_t seed);

    std::size_t n() const { return n_; }
    const std::vector<bool>& missing() const { return missing_; }
    /// |missing| / N^2.
    double rho() const;

    Shape in_shape() const override { return Shape::image(n_); }
    Shape out_shape() const override { return Shape::image(n_); }
    Vector apply(const Vector& y) const override;
    Vector adjoint(const Vector& y) const override { return apply(y); }
    double norm_bound() const override { return 1.0; }
    std::string name() const override { return "mask"; }
    bool supports_shifted_gram() const override { return true; }
    std::optional<Vector> solve_shifted_gram(double gamma, const Vector& rhs) const override;

private:
    std::size_t n_;
    std::vector<bool> missing_;
};

/// Periodic convolution with a sampled Gaussian of width sigma, truncated
/// at radius ceil(4 sigma) and normalized to unit mass.
class GaussianBlur final : public LinearOperator {
public:
    GaussianBlur(std::size_t n, double sigma);

    double sigma() const { return sigma_; }
    int radius() const { return radius_; }
    /// N x N kernel image with the center at pixel (0, 0), wrapped.
    const Vector& kernel() const { return kernel_; }
    const ComplexImage& transfer() const { return transfer_; }

    Shape in_shape() const override { return Shape::image(n_); }
    Shape out_shape() const override { return Shape::image(n_); }
    Vector apply(const Vector& y) const override;
    Vector adjoint(const Vector& y) const override;
    double norm_bound() const override { return bound_; }
    std::string name() const override { return "blur"; }
    bool supports_shifted_gram() const override { return true; }
    std::optional<Vector> solve_shifted_gram(double gamma, const Vector& rhs) const override;

private:
    Vector filter(const Vector& y, bool conjugate) const;

    std::size_t n_;
    double sigma_;
    int radius_;
    Vector kernel_;
    std::shared_ptr<const Fft2d> fft_;
    ComplexImage transfer_;
    double bound_;
};

/// Finite-difference gradient (V * y, H * y) with the 2x2 stencils
/// V = [-1 0; 1 0], H = [-1 1; 0 0] anchored at the upper-left tap, periodic.
/// Output channel 0 is vertical, channel 1 horizontal.
class ImageGradient final : public LinearOperator {
public:
    explicit ImageGradient(std::size_t n);

    Shape in_shape() const override { return Shape::image(n_); }
    Shape out_shape() const override { return Shape::stack(n_, 2); }
    Vector apply(const Vector& y) const override;
    Vector adjoint(const Vector& g) const override;
    /// sqrt(8).
    double norm_bound() const override;
    std::string name() const override { return "grad"; }
    bool supports_shifted_gram() const override { return true; }
    std::optional<Vector> solve_shifted_gram(double gamma, const Vector& rhs) const override;

private:
    std::size_t n_;
    std::shared_ptr<const Fft2d> fft_;
    ComplexImage dv_;
    ComplexImage dh_;
};

LinOp make_mask(Mask mask);
LinOp make_blur(std::size_t n, double sigma);
LinOp make_gradient(std::size_t n);

}  // namespace gfb
