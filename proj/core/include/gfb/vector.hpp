#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include <Eigen/Core>

#include "gfb/errors.hpp"

namespace gfb {

/// Dimension descriptor. Flat vectors use rows = length, cols = channels = 1.
/// Storage is channel-major: entry (r, c, k) lives at k*rows*cols + r*cols + c.
struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 1;
    std::size_t channels = 1;

    static Shape flat(std::size_t n) { return {n, 1, 1}; }
    static Shape image(std::size_t n) { return {n, n, 1}; }
    static Shape stack(std::size_t n, std::size_t c) { return {n, n, c}; }

    std::size_t size() const { return rows * cols * channels; }
    std::size_t plane() const { return rows * cols; }

    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

void require_same_shape(const Shape& a, const Shape& b, const char* where);

/// Real vector with a shape. Value semantics; arithmetic goes through
/// `values()` (an Eigen column vector).
class Vector {
public:
    Vector() = default;
    explicit Vector(Shape shape);
    Vector(Shape shape, Eigen::VectorXd values);
    Vector(std::initializer_list<double> values);

    static Vector zeros(Shape shape) { return Vector(shape); }
    static Vector constant(Shape shape, double value);

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    Eigen::VectorXd& values() { return values_; }
    const Eigen::VectorXd& values() const { return values_; }

    double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

    double& at(std::size_t r, std::size_t c, std::size_t k = 0) {
        return (*this)[k * shape_.plane() + r * shape_.cols + c];
    }
    double at(std::size_t r, std::size_t c, std::size_t k = 0) const {
        return (*this)[k * shape_.plane() + r * shape_.cols + c];
    }

    std::span<double> channel(std::size_t k);
    std::span<const double> channel(std::size_t k) const;

    /// Same data under another shape of equal size.
    Vector reshaped(Shape shape) const;

    bool all_finite() const { return values_.allFinite(); }

    Vector& operator+=(const Vector& o);
    Vector& operator-=(const Vector& o);
    Vector& operator*=(double s) {
        values_ *= s;
        return *this;
    }

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(double s, Vector a) { return a *= s; }
    friend Vector operator*(Vector a, double s) { return a *= s; }

private:
    Shape shape_{};
    Eigen::VectorXd values_;
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double squared_norm(const Vector& a);

/// Contiguous sub-range of a concatenated variable.
struct Slice {
    std::size_t offset = 0;
    Shape shape{};

    std::size_t end() const { return offset + shape.size(); }
};

Vector extract(const Vector& v, const Slice& s);
void insert(Vector& v, const Slice& s, const Vector& part);

/// Lays out consecutive slices of a flat concatenated variable.
class Layout {
public:
    Slice add(Shape shape);
    std::size_t total() const { return total_; }
    Shape shape() const { return Shape::flat(total_); }

private:
    std::size_t total_ = 0;
};

}  // namespace gfb
