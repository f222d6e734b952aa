#include "gfb/linop.hpp"

#include <cmath>
#include <random>

namespace gfb {

std::optional<Vector> LinearOperator::solve_shifted_gram(double, const Vector&) const {
    return std::nullopt;
}

Vector LinOp::apply(const Vector& x) const {
    require_same_shape(impl_->in_shape(), x.shape(), (impl_->name() + "::apply").c_str());
    return impl_->apply(x);
}

Vector LinOp::adjoint(const Vector& y) const {
    require_same_shape(impl_->out_shape(), y.shape(), (impl_->name() + "::adjoint").c_str());
    return impl_->adjoint(y);
}

namespace {

class Identity final : public LinearOperator {
public:
    explicit Identity(Shape s) : shape_(s) {}
    Shape in_shape() const override { return shape_; }
    Shape out_shape() const override { return shape_; }
    Vector apply(const Vector& x) const override { return x; }
    Vector adjoint(const Vector& y) const override { return y; }
    double norm_bound() const override { return 1.0; }
    std::string name() const override { return "identity"; }
    bool is_coisometry() const override { return true; }
    bool supports_shifted_gram() const override { return true; }
    std::optional<Vector> solve_shifted_gram(double gamma, const Vector& rhs) const override {
        return (1.0 / (1.0 + gamma)) * rhs;
    }

private:
    Shape shape_;
};

class Composition final : public LinearOperator {
public:
    Composition(LinOp outer, LinOp inner) : outer_(std::move(outer)), inner_(std::move(inner)) {
        require_same_shape(inner_.out_shape(), outer_.in_shape(), "compose");
    }
    Shape in_shape() const override { return inner_.in_shape(); }
    Shape out_shape() const override { return outer_.out_shape(); }
    Vector apply(const Vector& x) const override { return outer_.apply(inner_.apply(x)); }
    Vector adjoint(const Vector& y) const override { return inner_.adjoint(outer_.adjoint(y)); }
    double norm_bound() const override { return outer_.norm_bound() * inner_.norm_bound(); }
    std::string name() const override { return outer_.name() + "*" + inner_.name(); }
    bool is_coisometry() const override {
        return outer_.get().is_coisometry() && inner_.get().is_coisometry();
    }

    const LinOp& outer() const { return outer_; }
    const LinOp& inner() const { return inner_; }

private:
    LinOp outer_;
    LinOp inner_;
};

class SliceSelector final : public LinearOperator {
public:
    SliceSelector(Slice s, std::size_t total) : slice_(s), total_(total) {
        if (s.end() > total) throw DimensionError("slice_selector: slice exceeds total size");
    }
    Shape in_shape() const override { return Shape::flat(total_); }
    Shape out_shape() const override { return slice_.shape; }
    Vector apply(const Vector& x) const override { return extract(x, slice_); }
    Vector adjoint(const Vector& y) const override {
        Vector out(Shape::flat(total_));
        insert(out, slice_, y);
        return out;
    }
    double norm_bound() const override { return 1.0; }
    std::string name() const override { return "select"; }
    bool is_coisometry() const override { return true; }

private:
    Slice slice_;
    std::size_t total_;
};

class DenseOperator final : public LinearOperator {
public:
    explicit DenseOperator(Eigen::MatrixXd m) : m_(std::move(m)) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_);
        bound_ = m_.size() == 0 ? 0.0 : svd.singularValues()(0) * (1.0 + 1e-12);
    }
    Shape in_shape() const override { return Shape::flat(static_cast<std::size_t>(m_.cols())); }
    Shape out_shape() const override { return Shape::flat(static_cast<std::size_t>(m_.rows())); }
    Vector apply(const Vector& x) const override { return Vector(out_shape(), m_ * x.values()); }
    Vector adjoint(const Vector& y) const override {
        return Vector(in_shape(), m_.transpose() * y.values());
    }
    double norm_bound() const override { return bound_; }
    std::string name() const override { return "dense"; }
    bool supports_shifted_gram() const override { return true; }
    std::optional<Vector> solve_shifted_gram(double gamma, const Vector& rhs) const override {
        const Eigen::Index r = m_.rows();
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(r, r) + gamma * m_ * m_.transpose();
        return Vector(rhs.shape(), a.ldlt().solve(rhs.values()));
    }

private:
    Eigen::MatrixXd m_;
    double bound_ = 0.0;
};

void collect_factors(const LinOp& op, std::vector<LinOp>& out) {
    if (const auto* c = dynamic_cast<const Composition*>(&op.get())) {
        collect_factors(c->outer(), out);
        collect_factors(c->inner(), out);
    } else {
        out.push_back(op);
    }
}

// The factor whose shifted Gram operator equals that of `op`, if any.
std::optional<LinOp> gram_factor(const LinOp& op) {
    std::vector<LinOp> fs = op.factors();
    while (fs.size() > 1 && fs.back().get().is_coisometry()) fs.pop_back();
    if (fs.size() != 1) return std::nullopt;
    return fs.front();
}

}  // namespace

std::vector<LinOp> LinOp::factors() const {
    std::vector<LinOp> out;
    collect_factors(*this, out);
    return out;
}

LinOp identity(Shape shape) { return LinOp(std::make_shared<Identity>(shape)); }

LinOp compose(const LinOp& outer, const LinOp& inner) {
    return LinOp(std::make_shared<Composition>(outer, inner));
}

LinOp slice_selector(Slice slice, std::size_t total) {
    return LinOp(std::make_shared<SliceSelector>(slice, total));
}

LinOp dense_operator(Eigen::MatrixXd matrix) {
    return LinOp(std::make_shared<DenseOperator>(std::move(matrix)));
}

bool has_shifted_gram_inverse(const LinOp& op) {
    auto f = gram_factor(op);
    if (!f) return false;
    return f->get().is_coisometry() || f->get().supports_shifted_gram();
}

Vector invert_id_plus_gamma_LLt(const LinOp& op, double gamma, const Vector& rhs) {
    if (!(gamma >= 0.0)) throw ConfigError("invert_id_plus_gamma_LLt: gamma must be >= 0");
    require_same_shape(op.out_shape(), rhs.shape(), "invert_id_plus_gamma_LLt");
    if (gamma == 0.0) return rhs;
    auto f = gram_factor(op);
    if (f) {
        if (auto out = f->get().solve_shifted_gram(gamma, rhs)) return *out;
        if (f->get().is_coisometry()) return (1.0 / (1.0 + gamma)) * rhs;
    }
    throw ConfigError("invert_id_plus_gamma_LLt: no closed-form inverse for operator '" +
                      op.name() +
                      "'; split it with an auxiliary variable and a kernel constraint");
}

double estimate_norm(const LinOp& op, int iterations, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Vector x(op.in_shape());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = nd(rng);
    double est = 0.0;
    for (int k = 0; k < iterations; ++k) {
        const double nx = norm(x);
        if (nx == 0.0) return 0.0;
        x *= 1.0 / nx;
        x = op.adjoint(op.apply(x));
        est = std::sqrt(norm(x));
    }
    return est;
}

}  // namespace gfb
