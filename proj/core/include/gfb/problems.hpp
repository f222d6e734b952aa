#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gfb/baselines.hpp"
#include "gfb/blocks.hpp"
#include "gfb/gfb.hpp"
#include "gfb/wavelet.hpp"

namespace gfb {

enum class Algorithm { gfb, fb, dr, chpo, hpe, cope };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);
/// gfb, dr, chpo, hpe, cope.
std::vector<Algorithm> comparison_algorithms();

/// A problem written for one family of solvers. `x` locates the primary
/// unknown inside the solver variable (the whole variable when there are
/// no auxiliary parts).
struct SolverForm {
    SplitProblem problem;
    Slice x;

    Vector primary(const Vector& v) const { return extract(v, x); }
};

/// The same minimization written for each solver family.
struct FormSet {
    /// Smooth F plus simple terms on the solver variable (gfb, fb, hpe).
    SolverForm forward;
    /// F = 0, simple terms only (dr).
    SolverForm douglas;
    /// F = 0, terms G_i(L_i x) (chpo).
    SolverForm primal_dual;
    /// Smooth F plus terms G_i(L_i x) (cope).
    SolverForm composite;

    const SolverForm& for_algorithm(Algorithm a) const;
};

/// Solver-ready GFB problem from a form whose terms all act directly on
/// the variable. Keeps the form's objective.
GfbProblem to_gfb_problem(const SplitProblem& p);

// ---------------------------------------------------------------- restoration

enum class DegradationKind { identity, blur, mask, blur_mask };

DegradationKind parse_degradation(const std::string& name);
std::string to_string(DegradationKind k);

struct RestorationSpec {
    /// "phantom" or a path to a binary PGM.
    std::string image = "phantom";
    /// Side of the phantom; ignored when an image file is given.
    std::size_t size = 64;
    DegradationKind op = DegradationKind::blur;
    double sigma = 2.0;
    double rho = 0.4;
    double sigma_w = 2.5e-2;
    double mu = 1.3e-3;
    double nu = 0.0;
    std::size_t S = 2;
    int levels = 4;
    std::uint64_t seed = 1;
    WaveletFamily wavelet = WaveletFamily::haar;
};

/// Flat `key = value` text, one entry per line, `#` comments. Keys: image,
/// size, op, sigma, rho, sigma_w, mu, nu, S, levels, seed, wavelet.
/// Relative image paths are resolved against `base_dir`.
RestorationSpec parse_restoration_config(const std::string& text,
                                         const std::filesystem::path& base_dir = {});
RestorationSpec load_restoration_config(const std::filesystem::path& path);
std::string format_restoration_config(const RestorationSpec& spec);

/// Piecewise-smooth N x N test image with values in [0, 1].
Vector make_phantom(std::size_t n);

struct RestorationProblem {
    RestorationSpec spec;
    Vector original;
    Vector observed;
    LinOp phi;
    LinOp frame;
    LinOp gradient;
    BlockStructure blocks;
    FormSet forms;

    /// 1/2 ||y - Phi W x||^2 + mu sum_k ||x||_{B_k} + nu ||grad W x||_TV.
    double objective(const Vector& coeffs) const;
    Vector image_of(const Vector& coeffs) const { return frame.apply(coeffs); }
    std::size_t num_terms(Algorithm a) const;
};

/// Throws ConfigError on invalid parameters (divisibility of N by 2^levels
/// and by S, negative weights, ...).
RestorationProblem build_restoration(const RestorationSpec& spec);

// ---------------------------------------------------------------- synthetic

enum class SyntheticFamily { lasso_1d, two_l1, group_2d, constrained_quadratic };

SyntheticFamily parse_synthetic_family(const std::string& name);
std::string to_string(SyntheticFamily f);
std::vector<SyntheticFamily> all_synthetic_families();

struct SyntheticSpec {
    SyntheticFamily family = SyntheticFamily::lasso_1d;
    /// Unknowns; fixed to 1 for lasso-1d, 16 for group-2d, 4 for
    /// constrained-quadratic, and at most 64 for two-l1.
    std::size_t d = 8;
    double mu = 0.5;
    std::uint64_t seed = 3;
};

struct SyntheticProblem {
    SyntheticSpec spec;
    FormSet forms;
    Vector oracle;
};

SyntheticProblem build_synthetic(const SyntheticSpec& spec);

/// Minimizer of 1/2 ||A x - b||^2 subject to x >= 0 by enumerating the
/// 2^d active sets (d <= 16).
Vector nonnegative_least_squares_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// 20 log10(||reference|| / ||reference - estimate||); +infinity when equal.
double snr(const Vector& reference, const Vector& estimate);

}  // namespace gfb
