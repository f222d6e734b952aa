#include "gfb/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "gfb/errors.hpp"

namespace gfb {

namespace {
// FFTW planning is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t wrap(long i, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}
}  // namespace

struct Fft2d::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

Fft2d::Fft2d(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (n == 0) throw DimensionError("Fft2d: size must be positive");
    ComplexImage scratch(n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int ni = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    plans_->forward =
        fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->backward =
        fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plans_->forward || !plans_->backward) throw Error("Fft2d: FFTW planning failed");
}

Fft2d::~Fft2d() {
    std::lock_guard lock(planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

ComplexImage Fft2d::forward(std::span<const double> image) const {
    if (image.size() != n_ * n_) throw DimensionError("Fft2d::forward: size mismatch");
    ComplexImage buf(image.begin(), image.end());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans_->forward, p, p);
    return buf;
}

std::vector<double> Fft2d::inverse_real(const ComplexImage& spectrum) const {
    if (spectrum.size() != n_ * n_) throw DimensionError("Fft2d::inverse_real: size mismatch");
    ComplexImage buf = spectrum;
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans_->backward, p, p);
    const double scale = 1.0 / static_cast<double>(n_ * n_);
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real() * scale;
    return out;
}

ComplexImage Fft2d::kernel_spectrum(std::span<const Tap> taps) const {
    std::vector<double> k(n_ * n_, 0.0);
    for (const Tap& t : taps) k[wrap(t.row, n_) * n_ + wrap(t.col, n_)] += t.value;
    return forward(k);
}

}  // namespace gfb
