#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gfb {

using ComplexImage = std::vector<std::complex<double>>;

/// Unnormalized 2-D DFT of square N x N arrays (row-major). Plans are built
/// once; transforms are safe to run concurrently.
class Fft2d {
public:
    explicit Fft2d(std::size_t n);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::size_t n() const { return n_; }

    ComplexImage forward(std::span<const double> image) const;
    /// Inverse transform including the 1/N^2 factor; returns the real part.
    std::vector<double> inverse_real(const ComplexImage& spectrum) const;

    /// Spectrum of a kernel given by its taps at periodic offsets.
    struct Tap {
        long row;
        long col;
        double value;
    };
    ComplexImage kernel_spectrum(std::span<const Tap> taps) const;

private:
    struct Plans;
    std::size_t n_;
    std::unique_ptr<Plans> plans_;
};

}  // namespace gfb
