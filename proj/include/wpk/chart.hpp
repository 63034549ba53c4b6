#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "wpk/dual.hpp"
#include "wpk/expr.hpp"

namespace wpk {

class ChartError : public Error {
 public:
  using Error::Error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// An open coordinate box.
class Chart {
 public:
  Chart(std::vector<std::string> names, std::vector<Interval> bounds);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const Interval& bounds(std::size_t i) const { return bounds_[i]; }

  // Index of a coordinate name, or dim() when absent.
  std::size_t index_of(std::string_view name) const;

  bool contains(std::span<const double> coords) const;

  // New chart with coordinate `name` on `range` placed in front.
  Chart prepend(const std::string& name, Interval range) const;

  // Box center; the default basepoint for line integrals.
  std::vector<double> center() const;

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> bounds_;
};

struct Point {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
};

// SplitMix64: state advances by 0x9E3779B97F4A7C15 and each output is
// mixed with multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB
// (shifts 30, 27, 31). Uniform doubles take the top 53 bits times 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t state_;
};

// Points drawn uniformly from the box shrunk by `margin` of each side's
// width. Coordinates are drawn point-major, coordinate-minor.
std::vector<Point> sample_points(const Chart& chart, std::size_t count, std::uint64_t seed,
                                 double margin = 0.05);

// Evaluator behind every field: maps chart coordinates of scalar type S to
// a fixed number of output components of the same type.
class FieldNode {
 public:
  virtual ~FieldNode() = default;
  virtual void eval(std::span<const double> x, std::span<double> out) const = 0;
  virtual void eval(std::span<const DualScalar> x, std::span<DualScalar> out) const = 0;
  virtual void eval(std::span<const HyperDual> x, std::span<HyperDual> out) const = 0;
};

template <class F>
class LambdaNode final : public FieldNode {
 public:
  explicit LambdaNode(F f) : f_(std::move(f)) {}
  void eval(std::span<const double> x, std::span<double> out) const override { f_(x, out); }
  void eval(std::span<const DualScalar> x, std::span<DualScalar> out) const override { f_(x, out); }
  void eval(std::span<const HyperDual> x, std::span<HyperDual> out) const override { f_(x, out); }

 private:
  F f_;
};

// Type-erased multi-component field over a chart of dimension in_dim().
// `F` is a generic callable (std::span<const S>, std::span<S>) invoked for
// S in {double, DualScalar, HyperDual}.
class Field {
 public:
  Field() = default;

  template <class F>
  static Field make(std::size_t in_dim, std::size_t size, F f) {
    Field out;
    out.node_ = std::make_shared<LambdaNode<F>>(std::move(f));
    out.in_dim_ = in_dim;
    out.size_ = size;
    return out;
  }

  static Field constant(std::size_t in_dim, std::vector<double> values);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t size() const { return size_; }

  template <class S>
  std::vector<S> eval(std::span<const S> x) const {
    std::vector<S> out(size_);
    node_->eval(x, std::span<S>(out));
    return out;
  }
  template <class S>
  std::vector<S> eval(const std::vector<S>& x) const {
    return eval(std::span<const S>(x));
  }

 private:
  std::shared_ptr<const FieldNode> node_;
  std::size_t in_dim_ = 0;
  std::size_t size_ = 0;
};

// Coordinates seeded as independent dual variables, one slot each.
std::vector<DualScalar> seed(std::span<const double> coords);

// Lift S-valued coordinates one differentiation level.
template <class S>
std::vector<lifted_t<S>> seed_lifted(std::span<const S> x) {
  std::vector<lifted_t<S>> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(lifted_t<S>::variable(x[i], i, x.size()));
  return out;
}

// Values and the full Jacobian of a field at a point. grad(c, i) = d_i comp c.
struct Jet {
  Eigen::VectorXd value;
  Eigen::MatrixXd grad;
};
Jet jet(const Field& f, const Point& pt);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Field f);

  template <class F>
  static ScalarField make(std::size_t dim, F f) {
    return ScalarField(Field::make(dim, 1, [f = std::move(f)](auto x, auto out) { out[0] = f(x); }));
  }
  static ScalarField constant(std::size_t dim, double v);
  static ScalarField coordinate(std::size_t dim, std::size_t index);

  // Expression over chart coordinate names plus constant parameters.
  static ScalarField from_expr(const Chart& chart, const expr::Expr& e,
                               const std::map<std::string, double, std::less<>>& params = {});

  std::size_t dim() const { return field_.in_dim(); }
  const Field& field() const { return field_; }

  template <class S>
  S eval(std::span<const S> x) const {
    return field_.eval(x)[0];
  }
  double value(const Point& pt) const;
  DualScalar dual(const Point& pt) const;

 private:
  Field field_;
};

// Contravariant components X^i.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(Field f);
  static VectorField constant(std::vector<double> components);
  static VectorField basis(std::size_t dim, std::size_t i);

  std::size_t dim() const { return field_.in_dim(); }
  const Field& field() const { return field_; }
  Eigen::VectorXd at(const Point& pt) const;

 private:
  Field field_;
};

// (1,1)-tensor stored row-major: component (i, j) is J^i_j, (JX)^i = J^i_j X^j.
class EndomorphismField {
 public:
  EndomorphismField() = default;
  explicit EndomorphismField(Field f);
  static EndomorphismField constant(const Eigen::MatrixXd& m);

  std::size_t dim() const { return field_.in_dim(); }
  const Field& field() const { return field_; }
  Eigen::MatrixXd at(const Point& pt) const;

 private:
  Field field_;
};

// Symmetric (0,2)-tensor stored row-major with both triangles filled.
class MetricField {
 public:
  MetricField() = default;
  explicit MetricField(Field f);
  static MetricField constant(const Eigen::MatrixXd& m);

  std::size_t dim() const { return field_.in_dim(); }
  const Field& field() const { return field_; }
  Eigen::MatrixXd at(const Point& pt) const;

 private:
  Field field_;
};

// Strictly increasing multi-indices of length k from {0..n-1}, in
// lexicographic order. Coefficient c of a k-form belongs to indices()[c].
class MultiIndexSet {
 public:
  MultiIndexSet(std::size_t n, std::size_t k);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return sets_.size(); }
  const std::vector<std::size_t>& operator[](std::size_t c) const { return sets_[c]; }
  const std::vector<std::vector<std::size_t>>& all() const { return sets_; }
  // Position of a strictly increasing multi-index.
  std::size_t position(std::span<const std::size_t> idx) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::vector<std::size_t>> sets_;
  std::map<std::vector<std::size_t>, std::size_t> lookup_;
};

std::size_t binomial(std::size_t n, std::size_t k);

// Differential k-form with coefficients on increasing multi-indices. Its
// value on vectors is the determinant pairing sum_I w_I det[(X_a)^{I_b}],
// so dx^0 ^ dx^1 (d_0, d_1) = 1.
class KForm {
 public:
  KForm() = default;
  KForm(std::size_t degree, Field coeffs);
  static KForm zero(std::size_t dim, std::size_t degree);
  static KForm constant(std::size_t dim, std::size_t degree, std::vector<double> coeffs);
  // One-form from per-coordinate component fields (empty field = zero).
  static KForm one_form(std::vector<ScalarField> components);

  std::size_t dim() const { return coeffs_.in_dim(); }
  std::size_t degree() const { return degree_; }
  const Field& field() const { return coeffs_; }
  const MultiIndexSet& indices() const { return *indices_; }

  Eigen::VectorXd coefficients(const Point& pt) const;
  double apply(const Point& pt, std::span<const Eigen::VectorXd> vectors) const;

 private:
  std::size_t degree_ = 0;
  Field coeffs_;
  std::shared_ptr<const MultiIndexSet> indices_;
};

// Exact forward-mode partial derivative of a scalar field.
double partial(const ScalarField& f, const Point& pt, std::size_t direction);

// Central difference (f(x+h) - f(x-h)) / 2h by plain real evaluation.
double fd_partial(const Chart& chart, const ScalarField& f, const Point& pt, std::size_t direction,
                  double step);

// Field whose value is the partial derivative of f in `direction`. It can be
// evaluated on double and DualScalar inputs; HyperDual inputs would need a
// third derivative and raise an Error.
ScalarField partial_field(const ScalarField& f, std::size_t direction);

// Field algebra used to assemble structures.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField exp(const ScalarField& a);
ScalarField log(const ScalarField& a);

// Pull a field on chart coordinates (x_offset .. x_offset+dim-1) back to a
// chart of dimension `total_dim` that contains it as a trailing block.
Field lift(const Field& f, std::size_t total_dim, std::size_t offset);

// Metric scaled pointwise by a positive scalar field.
MetricField scale(const ScalarField& factor, const MetricField& g);

// J applied to X as a vector field.
VectorField apply(const EndomorphismField& J, const VectorField& X);

}  // namespace wpk
