#include <random>

#include <benchmark/benchmark.h>

#include "gfb/blocks.hpp"
#include "gfb/functions.hpp"
#include "gfb/image_ops.hpp"
#include "gfb/wavelet.hpp"

namespace {

gfb::Vector noise(const gfb::Shape& shape, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    gfb::Vector v(shape);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng);
    return v;
}

void BM_BlurApply(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gfb::LinOp blur = gfb::make_blur(n, 2.0);
    const gfb::Vector x = noise(blur.in_shape(), 1);
    for (auto _ : state) benchmark::DoNotOptimize(blur.apply(x));
}
BENCHMARK(BM_BlurApply)->Arg(64)->Arg(256);

void BM_WaveletSynthesis(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gfb::LinOp w = gfb::make_wavelet_frame(n, 4);
    const gfb::Vector c = noise(w.in_shape(), 2);
    for (auto _ : state) benchmark::DoNotOptimize(w.apply(c));
}
BENCHMARK(BM_WaveletSynthesis)->Arg(64)->Arg(256);

void BM_WaveletAnalysis(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gfb::LinOp w = gfb::make_wavelet_frame(n, 4);
    const gfb::Vector y = noise(w.out_shape(), 3);
    for (auto _ : state) benchmark::DoNotOptimize(w.adjoint(y));
}
BENCHMARK(BM_WaveletAnalysis)->Arg(64)->Arg(256);

void BM_Gradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gfb::LinOp g = gfb::make_gradient(n);
    const gfb::Vector x = noise(g.in_shape(), 4);
    for (auto _ : state) benchmark::DoNotOptimize(g.apply(x));
}
BENCHMARK(BM_Gradient)->Arg(64)->Arg(256);

void BM_BlockThreshold(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gfb::BlockStructure b = gfb::build_square_blocks(n, 13, 4);
    const gfb::Vector x = noise(gfb::Shape::stack(n, 13), 5);
    for (auto _ : state) benchmark::DoNotOptimize(gfb::prox_block_l12(x, 1.0, b.layers[0], 0.1));
}
BENCHMARK(BM_BlockThreshold)->Arg(64)->Arg(256);

void BM_QuadFidelityProx(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gfb::LinOp l = gfb::compose(gfb::make_blur(n, 2.0), gfb::make_wavelet_frame(n, 4));
    const gfb::Vector x = noise(l.in_shape(), 6);
    const gfb::Vector y = noise(l.out_shape(), 7);
    for (auto _ : state) benchmark::DoNotOptimize(gfb::prox_quad_fidelity(x, 0.5, y, l));
}
BENCHMARK(BM_QuadFidelityProx)->Arg(64);

}  // namespace
