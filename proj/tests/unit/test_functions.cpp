#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gfb/errors.hpp"
#include "gfb/functions.hpp"
#include "gfb/image_ops.hpp"
#include "gfb/wavelet.hpp"
#include "test_support.hpp"

using namespace gfb;
using gfb::testing::firm_nonexpansive_violation;
using gfb::testing::materialize;
using gfb::testing::max_abs_diff;
using gfb::testing::random_vector;

TEST(ProxL1, ScalarExamples) {
    EXPECT_DOUBLE_EQ(prox_l1(Vector{2.0}, 1.0, 1.0)[0], 1.0);
    EXPECT_DOUBLE_EQ(prox_l1(Vector{0.5}, 1.0, 1.0)[0], 0.0);
    EXPECT_DOUBLE_EQ(prox_l1(Vector{-3.0}, 0.5, 2.0)[0], -2.0);
    EXPECT_DOUBLE_EQ(prox_l1(Vector{0.7}, 0.0, 5.0)[0], 0.7);
    EXPECT_THROW(prox_l1(Vector{1.0}, -1.0, 1.0), ConfigError);
    EXPECT_THROW(prox_l1(Vector{1.0}, 1.0, -1.0), ConfigError);
}

TEST(ProxL1, MoreauIdentityWithUnitBallClip) {
    std::mt19937_64 rng(1);
    const ProxFn l1 = l1_norm(1.0);
    for (double gamma : {0.1, 1.0, 3.0}) {
        const Vector x = random_vector(Shape::flat(50), rng, 2.0);
        const Vector p = prox_l1(x, gamma, 1.0);
        Vector clip = (1.0 / gamma) * x;
        for (std::size_t k = 0; k < clip.size(); ++k) clip[k] = std::clamp(clip[k], -1.0, 1.0);
        EXPECT_LT(max_abs_diff(p + gamma * clip, x), 1e-12);
        // prox of gamma G* is the projection onto the unit ball for G = l1
        Vector proj = x;
        for (std::size_t k = 0; k < proj.size(); ++k) proj[k] = std::clamp(proj[k], -1.0, 1.0);
        EXPECT_LT(max_abs_diff(prox_conjugate(l1, x, gamma), proj), 1e-12);
    }
}

TEST(ProxBlock, ThresholdExamples) {
    const BlockLayer layer(2, {{0, 1}}, {1.0});
    const Vector x{3.0, 4.0};
    const Vector at = prox_block_l12(x, 1.0, layer, 5.0);
    EXPECT_EQ(at[0], 0.0);
    EXPECT_EQ(at[1], 0.0);
    const Vector half = prox_block_l12(x, 1.0, layer, 2.5);
    EXPECT_DOUBLE_EQ(half[0], 1.5);
    EXPECT_DOUBLE_EQ(half[1], 2.0);
}

TEST(ProxBlock, UncoveredCoefficientsUntouchedAndSingletonsGiveL1) {
    const BlockLayer partial(4, {{0, 2}}, {2.0});
    const Vector x{3.0, 7.0, 4.0, -1.0};
    const Vector p = prox_block_l12(x, 0.5, partial, 1.0);
    EXPECT_DOUBLE_EQ(p[1], 7.0);
    EXPECT_DOUBLE_EQ(p[3], -1.0);
    EXPECT_DOUBLE_EQ(p[0], 3.0 * 0.8);

    std::mt19937_64 rng(2);
    const Vector y = random_vector(Shape::flat(30), rng);
    EXPECT_LT(max_abs_diff(prox_block_l12(y, 0.7, singleton_blocks(30), 0.9), prox_l1(y, 0.7, 0.9)),
              1e-15);
}

TEST(Blocks, OverlapAndRangeAreRejected) {
    EXPECT_THROW(BlockLayer(4, {{0, 1}, {1, 2}}, {1.0, 1.0}), ConfigError);
    EXPECT_THROW(BlockLayer(4, {{0, 4}}, {1.0}), ConfigError);
    EXPECT_THROW(BlockLayer(4, {{0}}, {-1.0}), ConfigError);
}

TEST(Blocks, SquareBlockLayerCounts) {
    EXPECT_EQ(build_square_blocks(8, 1, 1, {1.0}).layers.size(), 1u);
    EXPECT_EQ(build_square_blocks(8, 1, 1, {1.0}).layers[0].num_blocks(), 64u);
    EXPECT_EQ(build_square_blocks(8, 1, 2, {1.0}).layers.size(), 4u);
    EXPECT_EQ(build_square_blocks(8, 4, 4).layers.size(), 16u);
    EXPECT_THROW(build_square_blocks(4, 1, 8, {1.0}), ConfigError);
    EXPECT_THROW(build_square_blocks(6, 1, 4, {1.0}), ConfigError);
    EXPECT_THROW(build_square_blocks(8, 1, 0, {1.0}), ConfigError);
}

TEST(Blocks, EveryCoefficientInExactlySSquaredBlocks) {
    for (std::size_t s : {1u, 2u, 4u}) {
        const auto bs = build_square_blocks(4, 2, s, {1.0, 1.0});
        std::vector<int> count(32, 0);
        std::set<std::vector<std::size_t>> distinct;
        for (const auto& layer : bs.layers) {
            for (std::size_t b = 0; b < layer.num_blocks(); ++b) {
                const auto blk = layer.block(b);
                EXPECT_EQ(blk.size(), s * s);
                std::vector<std::size_t> sorted(blk.begin(), blk.end());
                std::sort(sorted.begin(), sorted.end());
                distinct.insert(sorted);
                for (auto idx : blk) ++count[idx];
            }
        }
        for (int c : count) EXPECT_EQ(c, static_cast<int>(s * s)) << "S=" << s;
        // for S = N the S^2 offsets all produce the same wrapped block
        if (s < 4) {
            EXPECT_EQ(distinct.size(), bs.num_blocks());
        }
    }
}

TEST(Blocks, ScaleWeights) {
    const auto bs = build_square_blocks(8, 7, 1);
    const auto& layer = bs.layers[0];
    // channel c holds blocks c*64 .. c*64+63
    EXPECT_DOUBLE_EQ(layer.weight(0), 0.5);
    EXPECT_DOUBLE_EQ(layer.weight(3 * 64), 0.25);
    EXPECT_DOUBLE_EQ(layer.weight(6 * 64), 0.25);
    EXPECT_THROW(build_square_blocks(8, 5, 1), ConfigError);
}

TEST(TvNorm, Examples) {
    EXPECT_EQ(tv_norm(Vector(Shape::stack(3, 2))), 0.0);
    Vector g(Shape::stack(3, 2));
    g.at(1, 1, 0) = 3.0;
    g.at(1, 1, 1) = 4.0;
    EXPECT_DOUBLE_EQ(tv_norm(g), 5.0);
    std::mt19937_64 rng(3);
    const Vector r = random_vector(Shape::stack(5, 2), rng);
    EXPECT_NEAR(tv_norm(r), block_norm(r, tv_blocks(5)), 1e-12);
    EXPECT_THROW(tv_norm(Vector(Shape::image(3))), DimensionError);
}

TEST(QuadFidelity, IdentityAndMinimizer) {
    const Vector y{1.0, -2.0};
    const SmoothFn f = quad_fidelity(Vector(Shape::flat(2)), identity(Shape::flat(2)));
    EXPECT_DOUBLE_EQ(f.beta, 1.0);
    EXPECT_EQ(max_abs_diff(f.gradient(y), y), 0.0);
    const SmoothFn g = quad_fidelity(y, identity(Shape::flat(2)));
    EXPECT_EQ(norm(g.gradient(y)), 0.0);
    EXPECT_THROW(quad_fidelity(Vector(Shape::flat(3)), identity(Shape::flat(2))), DimensionError);
}

TEST(QuadFidelity, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(4);
    const LinOp l = compose(make_blur(6, 0.8), make_wavelet_frame(6, 1));
    const Vector y = random_vector(l.out_shape(), rng);
    const SmoothFn f = quad_fidelity(y, l);
    const Vector x = random_vector(l.in_shape(), rng);
    const Vector g = f.gradient(x);
    const Vector dir = random_vector(l.in_shape(), rng);
    const double h = 1e-5;
    const double fd = (f.value(x + h * dir) - f.value(x - h * dir)) / (2 * h);
    EXPECT_NEAR(fd, dot(g, dir), 1e-5 * std::abs(dot(g, dir)));
}

TEST(QuadFidelity, CocoercivityAndLipschitz) {
    std::mt19937_64 rng(5);
    const LinOp l = compose(make_mask(Mask::random(8, 0.5, 1)), compose(make_blur(8, 1.0), make_wavelet_frame(8, 2)));
    const SmoothFn f = quad_fidelity(random_vector(l.out_shape(), rng), l);
    for (int k = 0; k < 50; ++k) {
        const Vector u = random_vector(l.in_shape(), rng);
        const Vector v = random_vector(l.in_shape(), rng);
        const Vector d = f.gradient(u) - f.gradient(v);
        EXPECT_GE(dot(d, u - v), f.beta * squared_norm(d) - 1e-12);
        EXPECT_LE(norm(d), norm(u - v) / f.beta + 1e-12);
    }
    const SmoothFn r = plus_ridge(f, 0.5);
    EXPECT_NEAR(r.beta, 1.0 / (1.0 / f.beta + 0.5), 1e-15);
}

namespace {

Vector dense_prox_quad(const LinOp& l, const Vector& x, double gamma, const Vector& y) {
    const Eigen::MatrixXd a = materialize(l);
    const Eigen::MatrixXd sys =
        Eigen::MatrixXd::Identity(a.cols(), a.cols()) + gamma * a.transpose() * a;
    return Vector(x.shape(), sys.ldlt().solve(x.values() + gamma * a.transpose() * y.values()));
}

}  // namespace

TEST(ProxQuadFidelity, ScalarAndIdentityCases) {
    const LinOp id = identity(Shape::flat(1));
    EXPECT_DOUBLE_EQ(prox_quad_fidelity(Vector{0.0}, 1.0, Vector{1.0}, id)[0], 0.5);
    EXPECT_DOUBLE_EQ(prox_quad_fidelity(Vector{0.3}, 0.0, Vector{1.0}, id)[0], 0.3);
}

TEST(ProxQuadFidelity, MatchesDenseSolve) {
    std::mt19937_64 rng(6);
    const LinOp w = make_wavelet_frame(6, 1);
    const std::vector<LinOp> ops = {
        make_mask(Mask::random(6, 0.4, 3)),
        compose(make_mask(Mask::random(6, 0.4, 3)), w),
        compose(make_blur(6, 0.9), w),
        identity(Shape::image(6)),
    };
    for (const auto& l : ops) {
        for (double gamma : {0.2, 1.0, 4.0}) {
            const Vector x = random_vector(l.in_shape(), rng);
            const Vector y = random_vector(l.out_shape(), rng);
            const Vector p = prox_quad_fidelity(x, gamma, y, l);
            EXPECT_LT(max_abs_diff(p, dense_prox_quad(l, x, gamma, y)), 1e-10);
            const Vector opt = p - x + gamma * l.adjoint(l.apply(p) - y);
            EXPECT_LT(norm(opt), 1e-8);
        }
    }
}

TEST(ProxQuadFidelity, CompositeOperatorRequiresAuxiliaryVariable) {
    const LinOp mkw = compose(compose(make_mask(Mask::random(8, 0.3, 1)), make_blur(8, 1.0)),
                              make_wavelet_frame(8, 1));
    try {
        prox_quad_fidelity(Vector(mkw.in_shape()), 1.0, Vector(mkw.out_shape()), mkw);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("auxiliary"), std::string::npos);
    }
    EXPECT_THROW(quad_fidelity_term(Vector(mkw.out_shape()), mkw), ConfigError);
}

TEST(ProxKerConstraint, MatchesDenseProjection) {
    std::mt19937_64 rng(7);
    const LinOp w = make_wavelet_frame(6, 1);
    for (const LinOp& l : {compose(make_gradient(6), w), compose(make_blur(6, 0.7), w)}) {
        const Eigen::MatrixXd a = materialize(l);
        const auto nx = a.cols(), nu = a.rows();
        Eigen::MatrixXd c(nu, nx + nu);
        c << a, -Eigen::MatrixXd::Identity(nu, nu);
        const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(nx + nu, nx + nu) -
                                     c.transpose() * (c * c.transpose()).ldlt().solve(c);
        for (int k = 0; k < 3; ++k) {
            const Vector x = random_vector(l.in_shape(), rng);
            const Vector u = random_vector(l.out_shape(), rng);
            const auto [px, pu] = prox_ker_constraint(x, u, 1.0, l);
            Eigen::VectorXd v(nx + nu);
            v << x.values(), u.values();
            const Eigen::VectorXd ref = proj * v;
            EXPECT_LT((px.values() - ref.head(nx)).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LT((pu.values() - ref.tail(nu)).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LT(norm(pu - l.apply(px)), 1e-8);
            // idempotent
            const auto [qx, qu] = prox_ker_constraint(px, pu, 3.0, l);
            EXPECT_LT(max_abs_diff(qx, px), 1e-10);
            EXPECT_LT(max_abs_diff(qu, pu), 1e-10);
        }
        const Vector x = random_vector(l.in_shape(), rng);
        const auto [fx, fu] = prox_ker_constraint(x, l.apply(x), 1.0, l);
        EXPECT_LT(max_abs_diff(fx, x), 1e-12);
    }
}

TEST(ProxFns, FirmNonexpansiveness) {
    std::mt19937_64 rng(8);
    const Shape img = Shape::image(8);
    const LinOp gw = compose(make_gradient(8), make_wavelet_frame(8, 1));
    Layout layout;
    const Slice xs = layout.add(gw.in_shape());
    const Slice us = layout.add(gw.out_shape());
    const std::vector<std::pair<ProxFn, Shape>> fns = {
        {zero_function(), img},
        {l1_norm(0.3), img},
        {block_l12_norm(build_square_blocks(8, 1, 2, {1.0}).layers[1], 0.5), img},
        {quad_fidelity_term(random_vector(img, rng), make_blur(8, 1.2)), img},
        {kernel_constraint(gw, xs, us, layout.total()), layout.shape()},
        {indicator_nonnegative(), img},
        {indicator_box(-0.5, 0.5), img},
        {indicator_point(random_vector(img, rng)), img},
        {scaled(l1_norm(1.0), 0.4), img},
        {on_slice(l1_norm(0.2), us, layout.total()), layout.shape()},
    };
    for (const auto& [g, shape] : fns) {
        for (double gamma : {0.3, 1.7}) {
            const auto p = [&g = g, gamma](const Vector& v) { return g.prox(v, gamma); };
            EXPECT_LE(firm_nonexpansive_violation(p, shape, rng, 100), 1e-12) << g.name;
        }
    }
}

TEST(ProxFns, ValuesOfIndicatorsAndSlices) {
    const LinOp id = identity(Shape::flat(2));
    Layout layout;
    const Slice xs = layout.add(Shape::flat(2));
    const Slice us = layout.add(Shape::flat(2));
    const ProxFn k = kernel_constraint(id, xs, us, layout.total());
    EXPECT_EQ(k.value(Vector{1.0, 2.0, 1.0, 2.0}), 0.0);
    EXPECT_EQ(k.value(Vector{1.0, 2.0, 1.0, 2.5}), kInfinity);
    EXPECT_EQ(indicator_nonnegative().value(Vector{0.0, -1e-9}), kInfinity);
    EXPECT_EQ(indicator_box(0, 1).value(Vector{0.0, 1.0}), 0.0);
    const ProxFn s = on_slice(l1_norm(1.0), us, layout.total());
    const Vector v{5.0, -5.0, 3.0, -0.5};
    EXPECT_DOUBLE_EQ(s.value(v), 3.5);
    const Vector p = s.prox(v, 1.0);
    EXPECT_EQ(p[0], 5.0);
    EXPECT_EQ(p[1], -5.0);
    EXPECT_EQ(p[2], 2.0);
    EXPECT_EQ(p[3], 0.0);
    const Vector c{1.0, 2.0};
    EXPECT_EQ(max_abs_diff(indicator_point(c).prox(Vector{9.0, 9.0}, 1.0), c), 0.0);
}
