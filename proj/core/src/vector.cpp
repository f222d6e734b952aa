#include "gfb/vector.hpp"

#include <utility>

namespace gfb {

std::string to_string(const Shape& s) {
    return std::to_string(s.rows) + "x" + std::to_string(s.cols) + "x" +
           std::to_string(s.channels);
}

void require_same_shape(const Shape& a, const Shape& b, const char* where) {
    if (!(a == b)) {
        throw DimensionError(std::string(where) + ": shape mismatch " + to_string(a) +
                             " vs " + to_string(b));
    }
}

Vector::Vector(Shape shape)
    : shape_(shape), values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.size()))) {}

Vector::Vector(Shape shape, Eigen::VectorXd values) : shape_(shape), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != shape_.size()) {
        throw DimensionError("Vector: data length " + std::to_string(values_.size()) +
                             " does not match shape " + to_string(shape_));
    }
}

Vector::Vector(std::initializer_list<double> values)
    : shape_(Shape::flat(values.size())), values_(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) values_[i++] = v;
}

Vector Vector::constant(Shape shape, double value) {
    return Vector(shape, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(shape.size()), value));
}

std::span<double> Vector::channel(std::size_t k) {
    if (k >= shape_.channels) throw DimensionError("Vector::channel: index out of range");
    return {values_.data() + k * shape_.plane(), shape_.plane()};
}

std::span<const double> Vector::channel(std::size_t k) const {
    if (k >= shape_.channels) throw DimensionError("Vector::channel: index out of range");
    return {values_.data() + k * shape_.plane(), shape_.plane()};
}

Vector Vector::reshaped(Shape shape) const {
    if (shape.size() != shape_.size()) {
        throw DimensionError("Vector::reshaped: " + to_string(shape_) + " -> " + to_string(shape));
    }
    return Vector(shape, values_);
}

Vector& Vector::operator+=(const Vector& o) {
    require_same_shape(shape_, o.shape_, "Vector::operator+=");
    values_ += o.values_;
    return *this;
}

Vector& Vector::operator-=(const Vector& o) {
    require_same_shape(shape_, o.shape_, "Vector::operator-=");
    values_ -= o.values_;
    return *this;
}

double dot(const Vector& a, const Vector& b) {
    require_same_shape(a.shape(), b.shape(), "dot");
    return a.values().dot(b.values());
}

double squared_norm(const Vector& a) { return a.values().squaredNorm(); }

double norm(const Vector& a) { return a.values().norm(); }

Vector extract(const Vector& v, const Slice& s) {
    if (s.end() > v.size()) throw DimensionError("extract: slice exceeds vector");
    return Vector(s.shape, v.values().segment(static_cast<Eigen::Index>(s.offset),
                                              static_cast<Eigen::Index>(s.shape.size())));
}

void insert(Vector& v, const Slice& s, const Vector& part) {
    if (s.end() > v.size()) throw DimensionError("insert: slice exceeds vector");
    require_same_shape(s.shape, part.shape(), "insert");
    v.values().segment(static_cast<Eigen::Index>(s.offset),
                       static_cast<Eigen::Index>(s.shape.size())) = part.values();
}

Slice Layout::add(Shape shape) {
    Slice s{total_, shape};
    total_ += shape.size();
    return s;
}

}  // namespace gfb
