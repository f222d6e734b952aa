#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfb/vector.hpp"

namespace gfb {

/// Bounded linear operator between finite-dimensional coordinate spaces.
/// Implementations are immutable after construction.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual Shape in_shape() const = 0;
    virtual Shape out_shape() const = 0;
    virtual Vector apply(const Vector& x) const = 0;
    virtual Vector adjoint(const Vector& y) const = 0;
    /// Upper bound on the operator norm.
    virtual double norm_bound() const = 0;
    virtual std::string name() const = 0;

    /// True when L L* = Id (tight frame synthesis, coordinate selection).
    virtual bool is_coisometry() const { return false; }

    /// Whether solve_shifted_gram has a closed form.
    virtual bool supports_shifted_gram() const { return false; }

    /// (Id + gamma L L*)^{-1} rhs, for operators whose L L* is diagonal in the
    /// pixel or Fourier domain. Empty when no such closed form exists.
    virtual std::optional<Vector> solve_shifted_gram(double gamma, const Vector& rhs) const;
};

/// Shared handle to an immutable operator; checks shapes at the boundary.
class LinOp {
public:
    LinOp() = default;
    explicit LinOp(std::shared_ptr<const LinearOperator> impl) : impl_(std::move(impl)) {}

    Vector apply(const Vector& x) const;
    Vector adjoint(const Vector& y) const;
    Shape in_shape() const { return impl_->in_shape(); }
    Shape out_shape() const { return impl_->out_shape(); }
    double norm_bound() const { return impl_->norm_bound(); }
    std::string name() const { return impl_->name(); }

    const LinearOperator& get() const { return *impl_; }
    explicit operator bool() const { return static_cast<bool>(impl_); }

    /// Factors of a composition, outermost first; a single-element list
    /// for anything else.
    std::vector<LinOp> factors() const;

private:
    std::shared_ptr<const LinearOperator> impl_;
};

LinOp identity(Shape shape);

/// outer o inner.
LinOp compose(const LinOp& outer, const LinOp& inner);

/// Restriction of a concatenated variable to one of its slices.
LinOp slice_selector(Slice slice, std::size_t total);

/// Explicit matrix acting on flat vectors.
LinOp dense_operator(Eigen::MatrixXd matrix);

/// (Id + gamma L L*)^{-1} rhs. Trailing co-isometric factors (frame
/// synthesis, slice selection) are peeled off since they do not change
/// L L*; the remaining factor must be identity, mask, blur, gradient or a
/// dense matrix. Throws ConfigError otherwise.
Vector invert_id_plus_gamma_LLt(const LinOp& op, double gamma, const Vector& rhs);

/// Whether invert_id_plus_gamma_LLt supports `op`.
bool has_shifted_gram_inverse(const LinOp& op);

/// Power iteration estimate of ||L||, for diagnostics.
double estimate_norm(const LinOp& op, int iterations = 50, unsigned seed = 7);

}  // namespace gfb
