#include "gfb/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace gfb {

namespace {

using Plane = std::vector<double>;

// Periodic filtering along one axis with taps dilated by `step`.
// Forward: out[i] = sum_k f[k] in[i - k*step]; transposed: in[i + k*step].
Plane filter_axis(const Plane& in, std::size_t n, bool along_rows, const std::vector<double>& f,
                  std::size_t step, bool transposed) {
    Plane out(n * n, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const std::size_t shift = (k * step) % n;
        const std::size_t off = transposed ? shift : (n - shift) % n;
        const double w = f[k];
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const std::size_t src =
                    along_rows ? ((r + off) % n) * n + c : r * n + (c + off) % n;
                out[r * n + c] += w * in[src];
            }
        }
    }
    return out;
}

}  // namespace

WaveletFamily parse_wavelet_family(const std::string& name) {
    if (name == "haar") return WaveletFamily::haar;
    if (name == "db2" || name == "daubechies2") return WaveletFamily::daubechies2;
    throw ConfigError("unknown wavelet family '" + name + "'");
}

WaveletFrame::WaveletFrame(std::size_t n, int levels, WaveletFamily family)
    : n_(n), levels_(levels) {
    if (levels < 1) throw ConfigError("WaveletFrame: levels must be >= 1");
    if (levels > 30 || n % (std::size_t{1} << levels) != 0) {
        throw ConfigError("WaveletFrame: N=" + std::to_string(n) +
                          " is not divisible by 2^levels=" + std::to_string(1L << std::min(levels, 30)));
    }
    if (family == WaveletFamily::haar) {
        low_ = {0.5, 0.5};
        high_ = {0.5, -0.5};
    } else {
        const double s3 = std::sqrt(3.0);
        const double d = 4.0 * std::sqrt(2.0);
        const std::vector<double> h0 = {(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
        const double r = 1.0 / std::sqrt(2.0);
        for (std::size_t k = 0; k < 4; ++k) {
            low_.push_back(h0[k] * r);
            high_.push_back((k % 2 == 0 ? 1.0 : -1.0) * h0[3 - k] * r);
        }
    }
}

int WaveletFrame::scale_of_channel(std::size_t channel) const {
    if (channel >= redundancy()) throw DimensionError("WaveletFrame: channel out of range");
    if (channel == redundancy() - 1) return levels_;
    return static_cast<int>(channel / 3) + 1;
}

Vector WaveletFrame::analysis(const Vector& image) const {
    require_same_shape(out_shape(), image.shape(), "WaveletFrame::analysis");
    const std::size_t n = n_;
    Vector coeffs(in_shape());
    Plane approx(image.channel(0).begin(), image.channel(0).end());
    for (int j = 1; j <= levels_; ++j) {
        const std::size_t step = std::size_t{1} << (j - 1);
        const Plane lo = filter_axis(approx, n, true, low_, step, true);
        const Plane hi = filter_axis(approx, n, true, high_, step, true);
        const Plane bands[3] = {filter_axis(lo, n, false, high_, step, true),
                                filter_axis(hi, n, false, low_, step, true),
                                filter_axis(hi, n, false, high_, step, true)};
        for (std::size_t b = 0; b < 3; ++b) {
            auto dst = coeffs.channel(static_cast<std::size_t>(3 * (j - 1)) + b);
            std::copy(bands[b].begin(), bands[b].end(), dst.begin());
        }
        approx = filter_axis(lo, n, false, low_, step, true);
    }
    auto dst = coeffs.channel(redundancy() - 1);
    std::copy(approx.begin(), approx.end(), dst.begin());
    return coeffs;
}

Vector WaveletFrame::synthesis(const Vector& coeffs) const {
    require_same_shape(in_shape(), coeffs.shape(), "WaveletFrame::synthesis");
    const std::size_t n = n_;
    auto last = coeffs.channel(redundancy() - 1);
    Plane approx(last.begin(), last.end());
    for (int j = levels_; j >= 1; --j) {
        const std::size_t step = std::size_t{1} << (j - 1);
        const auto band = [&](std::size_t b) {
            auto c = coeffs.channel(static_cast<std::size_t>(3 * (j - 1)) + b);
            return Plane(c.begin(), c.end());
        };
        Plane lo = filter_axis(approx, n, false, low_, step, false);
        const Plane lo_h = filter_axis(band(0), n, false, high_, step, false);
        Plane hi = filter_axis(band(1), n, false, low_, step, false);
        const Plane hi_h = filter_axis(band(2), n, false, high_, step, false);
        for (std::size_t p = 0; p < n * n; ++p) {
            lo[p] += lo_h[p];
            hi[p] += hi_h[p];
        }
        const Plane a = filter_axis(lo, n, true, low_, step, false);
        const Plane b = filter_axis(hi, n, true, high_, step, false);
        for (std::size_t p = 0; p < n * n; ++p) approx[p] = a[p] + b[p];
    }
    Vector out(out_shape());
    std::copy(approx.begin(), approx.end(), out.channel(0).begin());
    return out;
}

LinOp make_wavelet_frame(std::size_t n, int levels, WaveletFamily family) {
    return LinOp(std::make_shared<WaveletFrame>(n, levels, family));
}

}  // namespace gfb
