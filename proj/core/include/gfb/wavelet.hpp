#pragma once

#include <vector>

#include "gfb/linop.hpp"

namespace gfb {

enum class WaveletFamily { haar, daubechies2 };

WaveletFamily parse_wavelet_family(const std::string& name);

/// Undecimated separable wavelet frame on N x N periodic images.
///
/// As a LinearOperator this is the synthesis W : N x N x J -> N x N with
/// J = 3 * levels + 1; the analysis is its adjoint W*. The filter banks are
/// scaled so that |H|^2 + |G|^2 = 1 at every scale, which makes W W* = Id
/// exactly. With Haar filters each atom at scale j has norm 2^-j.
///
/// Channel layout: channels 3(j-1), 3(j-1)+1, 3(j-1)+2 hold the three
/// detail subbands of scale j (1-based); the last channel is the coarse
/// approximation at scale `levels`.
class WaveletFrame final : public LinearOperator {
public:
    WaveletFrame(std::size_t n, int levels, WaveletFamily family = WaveletFamily::haar);

    std::size_t n() const { return n_; }
    int levels() const { return levels_; }
    std::size_t redundancy() const { return static_cast<std::size_t>(3 * levels_ + 1); }
    /// Scale j in [1, levels] of a coefficient channel.
    int scale_of_channel(std::size_t channel) const;

    Vector synthesis(const Vector& coeffs) const;
    Vector analysis(const Vector& image) const;

    Shape in_shape() const override { return Shape::stack(n_, redundancy()); }
    Shape out_shape() const override { return Shape::image(n_); }
    Vector apply(const Vector& x) const override { return synthesis(x); }
    Vector adjoint(const Vector& y) const override { return analysis(y); }
    double norm_bound() const override { return 1.0; }
    std::string name() const override { return "wavelet"; }
    bool is_coisometry() const override { return true; }

private:
    std::size_t n_;
    int levels_;
    std::vector<double> low_;
    std::vector<double> high_;
};

LinOp make_wavelet_frame(std::size_t n, int levels, WaveletFamily family = WaveletFamily::haar);

}  // namespace gfb
