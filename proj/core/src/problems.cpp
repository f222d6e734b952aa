#include "gfb/problems.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gfb/errors.hpp"
#include "gfb/image_ops.hpp"
#include "gfb/pgm.hpp"

namespace gfb {

Algorithm parse_algorithm(const std::string& name) {
    if (name == "gfb") return Algorithm::gfb;
    if (name == "fb") return Algorithm::fb;
    if (name == "dr") return Algorithm::dr;
    if (name == "chpo") return Algorithm::chpo;
    if (name == "hpe") return Algorithm::hpe;
    if (name == "cope") return Algorithm::cope;
    throw ConfigError("unknown algorithm '" + name + "' (expected gfb, fb, dr, chpo, hpe, cope)");
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::gfb: return "gfb";
        case Algorithm::fb: return "fb";
        case Algorithm::dr: return "dr";
        case Algorithm::chpo: return "chpo";
        case Algorithm::hpe: return "hpe";
        case Algorithm::cope: return "cope";
    }
    return "?";
}

std::vector<Algorithm> comparison_algorithms() {
    return {Algorithm::gfb, Algorithm::dr, Algorithm::chpo, Algorithm::hpe, Algorithm::cope};
}

const SolverForm& FormSet::for_algorithm(Algorithm a) const {
    switch (a) {
        case Algorithm::gfb:
        case Algorithm::fb:
        case Algorithm::hpe: return forward;
        case Algorithm::dr: return douglas;
        case Algorithm::chpo: return primal_dual;
        case Algorithm::cope: return composite;
    }
    return forward;
}

GfbProblem to_gfb_problem(const SplitProblem& p) {
    std::vector<ProxFn> g;
    g.reserve(p.terms.size());
    for (const auto& term : p.terms) {
        if (term.op) throw ConfigError("to_gfb_problem: every term must act on the variable directly");
        g.push_back(term.g);
    }
    GfbProblem out = GfbProblem::from(p.shape, p.smooth, g);
    if (p.objective) out.objective = p.objective;
    return out;
}

// ---------------------------------------------------------------- restoration

DegradationKind parse_degradation(const std::string& name) {
    if (name == "identity") return DegradationKind::identity;
    if (name == "blur") return DegradationKind::blur;
    if (name == "mask") return DegradationKind::mask;
    if (name == "blur_mask") return DegradationKind::blur_mask;
    throw ConfigError("unknown op '" + name + "' (expected identity, blur, mask, blur_mask)");
}

std::string to_string(DegradationKind k) {
    switch (k) {
        case DegradationKind::identity: return "identity";
        case DegradationKind::blur: return "blur";
        case DegradationKind::mask: return "mask";
        case DegradationKind::blur_mask: return "blur_mask";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || !std::isfinite(v)) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        if (!value.empty() && value[0] != '-') v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) {
        throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return v;
}

std::string format_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

RestorationSpec parse_restoration_config(const std::string& text,
                                         const std::filesystem::path& base_dir) {
    RestorationSpec spec;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "image") {
            spec.image = value;
            if (value != "phantom" && std::filesystem::path(value).is_relative() && !base_dir.empty()) {
                spec.image = (base_dir / value).string();
            }
        } else if (key == "size") {
            spec.size = parse_unsigned(key, value);
        } else if (key == "op") {
            spec.op = parse_degradation(value);
        } else if (key == "sigma") {
            spec.sigma = parse_real(key, value);
        } else if (key == "rho") {
            spec.rho = parse_real(key, value);
        } else if (key == "sigma_w") {
            spec.sigma_w = parse_real(key, value);
        } else if (key == "mu") {
            spec.mu = parse_real(key, value);
        } else if (key == "nu") {
            spec.nu = parse_real(key, value);
        } else if (key == "S") {
            spec.S = parse_unsigned(key, value);
        } else if (key == "levels") {
            spec.levels = static_cast<int>(parse_unsigned(key, value));
        } else if (key == "seed") {
            spec.seed = parse_unsigned(key, value);
        } else if (key == "wavelet") {
            spec.wavelet = parse_wavelet_family(value);
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return spec;
}

RestorationSpec load_restoration_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_restoration_config(buf.str(), path.parent_path());
}

std::string format_restoration_config(const RestorationSpec& s) {
    std::ostringstream os;
    os << "image = " << s.image << "\n"
       << "size = " << s.size << "\n"
       << "op = " << to_string(s.op) << "\n"
       << "sigma = " << format_real(s.sigma) << "\n"
       << "rho = " << format_real(s.rho) << "\n"
       << "sigma_w = " << format_real(s.sigma_w) << "\n"
       << "mu = " << format_real(s.mu) << "\n"
       << "nu = " << format_real(s.nu) << "\n"
       << "S = " << s.S << "\n"
       << "levels = " << s.levels << "\n"
       << "seed = " << s.seed << "\n"
       << "wavelet = " << (s.wavelet == WaveletFamily::haar ? "haar" : "db2") << "\n";
    return os.str();
}

Vector make_phantom(std::size_t n) {
    if (n == 0) throw ConfigError("make_phantom: size must be positive");
    Vector img(Shape::image(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double u = (static_cast<double>(c) + 0.5) / static_cast<double>(n);
            const double v = (static_cast<double>(r) + 0.5) / static_cast<double>(n);
            double val = 0.15 + 0.3 * u;
            const double du = u - 0.35, dv = v - 0.4;
            if (du * du + dv * dv < 0.04) val = 0.85 - 0.2 * v;
            if (u > 0.58 && u < 0.88 && v > 0.12 && v < 0.42) val = 0.05 + 0.5 * v;
            if (u > 0.15 && u < 0.3 && v > 0.7 && v < 0.9) val = 0.95;
            const double bu = u - 0.72, bv = v - 0.72;
            val += 0.3 * std::exp(-(bu * bu + bv * bv) / 0.008);
            img.at(r, c) = std::clamp(val, 0.0, 1.0);
        }
    }
    return img;
}

double RestorationProblem::objective(const Vector& coeffs) const {
    const Vector residual = observed - phi.apply(frame.apply(coeffs));
    double v = 0.5 * squared_norm(residual);
    for (const auto& layer : blocks.layers) v += spec.mu * block_norm(coeffs, layer);
    if (spec.nu > 0.0) {
        v += spec.nu * tv_norm(gradient.apply(frame.apply(coeffs)));
    }
    return v;
}

std::size_t RestorationProblem::num_terms(Algorithm a) const {
    return forms.for_algorithm(a).problem.terms.size();
}

RestorationProblem build_restoration(const RestorationSpec& in) {
    RestorationSpec spec = in;
    if (spec.mu < 0.0 || spec.nu < 0.0) throw ConfigError("restoration: mu and nu must be >= 0");
    if (spec.sigma_w < 0.0) throw ConfigError("restoration: sigma_w must be >= 0");
    if (spec.levels < 1) throw ConfigError("restoration: levels must be >= 1");

    RestorationProblem p;
    if (spec.image == "phantom") {
        p.original = make_phantom(spec.size);
    } else {
        p.original = read_pgm(spec.image);
        spec.size = p.original.shape().rows;
    }
    const std::size_t n = spec.size;
    const Shape img = Shape::image(n);
    const Shape grad_shape = Shape::stack(n, 2);

    p.frame = make_wavelet_frame(n, spec.levels, spec.wavelet);
    const Shape coeff_shape = p.frame.in_shape();
    const std::size_t j = coeff_shape.channels;
    p.blocks = build_square_blocks(n, j, spec.S);

    LinOp blur_op;
    LinOp mask_op;
    switch (spec.op) {
        case DegradationKind::identity: p.phi = identity(img); break;
        case DegradationKind::blur: p.phi = blur_op = make_blur(n, spec.sigma); break;
        case DegradationKind::mask:
            p.phi = mask_op = make_mask(Mask::random(n, spec.rho, spec.seed));
            break;
        case DegradationKind::blur_mask:
            blur_op = make_blur(n, spec.sigma);
            mask_op = make_mask(Mask::random(n, spec.rho, spec.seed));
            p.phi = compose(mask_op, blur_op);
            break;
    }

    std::mt19937_64 rng(spec.seed ^ 0x6E6F697365ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    p.observed = p.phi.apply(p.original);
    for (std::size_t k = 0; k < p.observed.size(); ++k) p.observed[k] += spec.sigma_w * gauss(rng);
    p.spec = spec;

    const LinOp L = compose(p.phi, p.frame);
    const LinOp grad = make_gradient(n);
    const LinOp grad_w = compose(grad, p.frame);
    const bool tv = spec.nu > 0.0;
    const Vector y = p.observed;
    const double mu = spec.mu;
    const double nu = spec.nu;
    const BlockLayer tv_layer = tv_blocks(n);

    p.gradient = grad;
    // Psi reads the primary slice only.
    const auto make_objective = [&p](Slice x) {
        const Vector obs = p.observed;
        const LinOp phi = p.phi;
        const LinOp frame = p.frame;
        const auto layers = std::make_shared<const std::vector<BlockLayer>>(p.blocks.layers);
        const double m = p.spec.mu, v = p.spec.nu;
        const LinOp g = p.gradient;
        return [=](const Vector& var) {
            const Vector c = extract(var, x);
            const Vector image = frame.apply(c);
            double val = 0.5 * squared_norm(obs - phi.apply(image));
            for (const auto& layer : *layers) val += m * block_norm(c, layer);
            if (v > 0.0) val += v * tv_norm(g.apply(image));
            return val;
        };
    };

    // Smooth fidelity plus simple terms, auxiliary u = grad W x.
    {
        Layout layout;
        const Slice xs = layout.add(coeff_shape);
        Slice us;
        if (tv) us = layout.add(grad_shape);
        const std::size_t total = layout.total();
        const Shape var = tv ? layout.shape() : coeff_shape;
        SplitProblem sp;
        sp.shape = var;
        sp.smooth = quad_fidelity(y, tv ? compose(L, slice_selector(xs, total)) : L);
        for (const auto& layer : p.blocks.layers) {
            sp.terms.push_back({block_l12_norm(tv ? layer.embedded(xs.offset, total) : layer, mu), {}});
        }
        if (tv) {
            sp.terms.push_back({block_l12_norm(tv_layer.embedded(us.offset, total), nu), {}});
            sp.terms.push_back({kernel_constraint(grad_w, xs, us, total), {}});
        }
        sp.objective = make_objective(Slice{0, coeff_shape});
        p.forms.forward = {std::move(sp), Slice{0, coeff_shape}};
    }

    // F = 0: fidelity as a prox term, with u1 = K W x in the composite case.
    {
        const bool direct = spec.op != DegradationKind::blur_mask;
        Layout layout;
        const Slice xs = layout.add(coeff_shape);
        Slice u1, u2;
        if (!direct) u1 = layout.add(img);
        if (tv) u2 = layout.add(grad_shape);
        const std::size_t total = layout.total();
        const bool aux = !direct || tv;
        const Shape var = aux ? layout.shape() : coeff_shape;
        SplitProblem sp;
        sp.shape = var;
        if (direct) {
            sp.terms.push_back(
                {quad_fidelity_term(y, aux ? compose(L, slice_selector(xs, total)) : L), {}});
        } else {
            sp.terms.push_back({on_slice(quad_fidelity_term(y, mask_op), u1, total), {}});
            sp.terms.push_back({kernel_constraint(compose(blur_op, p.frame), xs, u1, total), {}});
        }
        for (const auto& layer : p.blocks.layers) {
            sp.terms.push_back({block_l12_norm(aux ? layer.embedded(xs.offset, total) : layer, mu), {}});
        }
        if (tv) {
            sp.terms.push_back({block_l12_norm(tv_layer.embedded(u2.offset, total), nu), {}});
            sp.terms.push_back({kernel_constraint(grad_w, xs, u2, total), {}});
        }
        sp.objective = make_objective(Slice{0, coeff_shape});
        p.forms.douglas = {std::move(sp), Slice{0, coeff_shape}};
    }

    // min G(Lambda x), Lambda = (Phi W, Id, ..., Id, grad W).
    {
        SplitProblem sp;
        sp.shape = coeff_shape;
        sp.terms.push_back({quad_fidelity_term(y, identity(img)), L});
        for (const auto& layer : p.blocks.layers) sp.terms.push_back({block_l12_norm(layer, mu), {}});
        if (tv) sp.terms.push_back({block_l12_norm(tv_layer, nu), grad_w});
        sp.objective = make_objective(Slice{0, coeff_shape});
        p.forms.primal_dual = {std::move(sp), Slice{0, coeff_shape}};
    }

    // Smooth fidelity, blocks on x, TV through L = grad W.
    {
        SplitProblem sp;
        sp.shape = coeff_shape;
        sp.smooth = quad_fidelity(y, L);
        for (const auto& layer : p.blocks.layers) sp.terms.push_back({block_l12_norm(layer, mu), {}});
        if (tv) sp.terms.push_back({block_l12_norm(tv_layer, nu), grad_w});
        sp.objective = make_objective(Slice{0, coeff_shape});
        p.forms.composite = {std::move(sp), Slice{0, coeff_shape}};
    }
    return p;
}

// ---------------------------------------------------------------- synthetic

SyntheticFamily parse_synthetic_family(const std::string& name) {
    if (name == "lasso-1d") return SyntheticFamily::lasso_1d;
    if (name == "two-l1") return SyntheticFamily::two_l1;
    if (name == "group-2d") return SyntheticFamily::group_2d;
    if (name == "constrained-quadratic") return SyntheticFamily::constrained_quadratic;
    throw ConfigError("unknown synthetic family '" + name + "'");
}

std::string to_string(SyntheticFamily f) {
    switch (f) {
        case SyntheticFamily::lasso_1d: return "lasso-1d";
        case SyntheticFamily::two_l1: return "two-l1";
        case SyntheticFamily::group_2d: return "group-2d";
        case SyntheticFamily::constrained_quadratic: return "constrained-quadratic";
    }
    return "?";
}

std::vector<SyntheticFamily> all_synthetic_families() {
    return {SyntheticFamily::lasso_1d, SyntheticFamily::two_l1, SyntheticFamily::group_2d,
            SyntheticFamily::constrained_quadratic};
}

Vector nonnegative_least_squares_oracle(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const auto d = static_cast<std::size_t>(a.cols());
    if (d == 0 || d > 16) throw ConfigError("nnls oracle: 1 <= d <= 16 required");
    if (a.rows() != b.size()) throw DimensionError("nnls oracle: A and b disagree");
    const double scale = 1.0 + (a.transpose() * b).cwiseAbs().maxCoeff();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::vector<Eigen::Index> free;
        for (std::size_t k = 0; k < d; ++k) {
            if (mask & (std::size_t{1} << k)) free.push_back(static_cast<Eigen::Index>(k));
        }
        Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
        if (!free.empty()) {
            Eigen::MatrixXd af(a.rows(), static_cast<Eigen::Index>(free.size()));
            for (std::size_t k = 0; k < free.size(); ++k) af.col(static_cast<Eigen::Index>(k)) = a.col(free[k]);
            const Eigen::VectorXd xf = (af.transpose() * af).ldlt().solve(af.transpose() * b);
            for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = xf[static_cast<Eigen::Index>(k)];
        }
        const Eigen::VectorXd g = a.transpose() * (a * x - b);
        bool ok = true;
        for (std::size_t k = 0; k < d && ok; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            if (mask & (std::size_t{1} << k)) {
                ok = x[kk] >= 0.0;
            } else {
                ok = g[kk] >= -1e-12 * scale;
            }
        }
        if (ok) return Vector(Shape::flat(d), x);
    }
    throw Error("nnls oracle: no KKT point found");
}

namespace {

/// Forms for min 1/2 ||A x - b||^2 + sum_i G_i(x) with simple G_i.
FormSet quadratic_forms(const Shape& shape, const Vector& b, const LinOp& a,
                        const std::vector<ProxFn>& g) {
    FormSet f;
    const SmoothFn smooth = quad_fidelity(b, a);
    SplitProblem fwd;
    fwd.shape = shape;
    fwd.smooth = smooth;
    for (const auto& gi : g) fwd.terms.push_back({gi, {}});
    f.forward = {fwd, Slice{0, shape}};
    f.composite = {fwd, Slice{0, shape}};

    SplitProblem dr;
    dr.shape = shape;
    dr.terms.push_back({quad_fidelity_term(b, a), {}});
    for (const auto& gi : g) dr.terms.push_back({gi, {}});
    f.douglas = {dr, Slice{0, shape}};

    SplitProblem pd;
    pd.shape = shape;
    pd.terms.push_back({quad_fidelity_term(b, identity(b.shape())), a});
    for (const auto& gi : g) pd.terms.push_back({gi, {}});
    f.primal_dual = {pd, Slice{0, shape}};
    return f;
}

Vector soft(const Vector& y, double t) {
    return prox_l1(y, 1.0, t);
}

}  // namespace

SyntheticProblem build_synthetic(const SyntheticSpec& in) {
    SyntheticProblem out;
    out.spec = in;
    if (!(in.mu > 0.0)) throw ConfigError("synthetic: mu must be > 0");
    std::mt19937_64 rng(in.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double mu = in.mu;

    switch (in.family) {
        case SyntheticFamily::lasso_1d: {
            out.spec.d = 1;
            const Shape s = Shape::flat(1);
            const double mag = mu + 0.5 + std::abs(gauss(rng));
            Vector y(s);
            y[0] = gauss(rng) < 0.0 ? -mag : mag;
            out.forms = quadratic_forms(s, y, identity(s), {l1_norm(mu)});
            out.oracle = soft(y, mu);
            break;
        }
        case SyntheticFamily::two_l1: {
            if (in.d == 0 || in.d > 64) throw ConfigError("synthetic two-l1: 1 <= d <= 64 required");
            const Shape s = Shape::flat(in.d);
            Vector y(s);
            for (std::size_t k = 0; k < in.d; ++k) y[k] = 2.0 * gauss(rng);
            out.forms = quadratic_forms(s, y, identity(s), {l1_norm(mu), l1_norm(mu)});
            out.oracle = soft(y, 2.0 * mu);
            break;
        }
        case SyntheticFamily::group_2d: {
            out.spec.d = 16;
            const Shape s = Shape::image(4);
            const BlockLayer layer = build_square_blocks(4, 1, 2, {1.0}).layers.front();
            Vector y(s);
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = 1.5 * gauss(rng);
            out.forms = quadratic_forms(s, y, identity(s), {l1_norm(mu), block_l12_norm(layer, mu)});
            // prox of l1 + group norm: group shrinkage of the soft-thresholded input
            out.oracle = prox_block_l12(soft(y, mu), 1.0, layer, mu);
            break;
        }
        case SyntheticFamily::constrained_quadratic: {
            out.spec.d = 4;
            Eigen::MatrixXd a(6, 4);
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = gauss(rng);
            }
            Eigen::VectorXd truth(4);
            truth << 1.0, -0.7, 0.4, -0.2;
            Eigen::VectorXd b = a * truth;
            for (Eigen::Index r = 0; r < b.size(); ++r) b[r] += 0.1 * gauss(rng);
            const Vector bv(Shape::flat(6), b);
            out.forms = quadratic_forms(Shape::flat(4), bv, dense_operator(a), {indicator_nonnegative()});
            out.oracle = nonnegative_least_squares_oracle(a, b);
            break;
        }
    }
    return out;
}

double snr(const Vector& reference, const Vector& estimate) {
    require_same_shape(reference.shape(), estimate.shape(), "snr");
    const double err = norm(reference - estimate);
    if (err == 0.0) return kInfinity;
    return 20.0 * std::log10(norm(reference) / err);
}

}  // namespace gfb
