#include "wpk/chart.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wpk {

namespace {

template <class Span>
using scalar_of = std::remove_cv_t<typename Span::element_type>;

}  // namespace

Chart::Chart(std::vector<std::string> names, std::vector<Interval> bounds)
    : names_(std::move(names)), bounds_(std::move(bounds)) {
  if (names_.empty()) throw ChartError("chart must have at least one coordinate");
  if (names_.size() != bounds_.size()) throw ChartError("chart names and bounds differ in length");
  if (names_.size() > kMaxDirections) {
    throw ChartError("chart dimension " + std::to_string(names_.size()) + " exceeds the supported maximum " +
                     std::to_string(kMaxDirections));
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!(bounds_[i].lo < bounds_[i].hi)) throw ChartError("empty interval for coordinate '" + names_[i] + "'");
    if (!seen.insert(names_[i]).second) throw ChartError("duplicate coordinate name '" + names_[i] + "'");
  }
}

std::size_t Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return names_.size();
}

bool Chart::contains(std::span<const double> coords) const {
  if (coords.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (coords[i] < bounds_[i].lo || coords[i] > bounds_[i].hi) return false;
  }
  return true;
}

Chart Chart::prepend(const std::string& name, Interval range) const {
  std::vector<std::string> names{name};
  names.insert(names.end(), names_.begin(), names_.end());
  std::vector<Interval> bounds{range};
  bounds.insert(bounds.end(), bounds_.begin(), bounds_.end());
  return Chart(std::move(names), std::move(bounds));
}

std::vector<double> Chart::center() const {
  std::vector<double> c;
  c.reserve(dim());
  for (const Interval& b : bounds_) c.push_back(0.5 * (b.lo + b.hi));
  return c;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Point> sample_points(const Chart& chart, std::size_t count, std::uint64_t seed, double margin) {
  if (!(margin >= 0.0 && margin < 0.5)) throw ChartError("sampling margin must lie in [0, 0.5)");
  SplitMix64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    Point pt;
    pt.coords.reserve(chart.dim());
    for (const Interval& b : chart.bounds()) {
      const double w = b.hi - b.lo;
      const double lo = b.lo + margin * w;
      const double hi = b.hi - margin * w;
      pt.coords.push_back(lo + rng.uniform() * (hi - lo));
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

Field Field::constant(std::size_t in_dim, std::vector<double> values) {
  const std::size_t n = values.size();
  return make(in_dim, n, [values = std::move(values)](auto, auto out) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i];
  });
}

std::vector<DualScalar> seed(std::span<const double> coords) {
  std::vector<DualScalar> out;
  out.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) out.push_back(DualScalar::variable(coords[i], i, coords.size()));
  return out;
}

Jet jet(const Field& f, const Point& pt) {
  const auto x = seed(pt.coords);
  const auto v = f.eval(x);
  Jet j{Eigen::VectorXd(f.size()), Eigen::MatrixXd::Zero(f.size(), pt.dim())};
  for (std::size_t c = 0; c < f.size(); ++c) {
    j.value(c) = v[c].value();
    for (std::size_t i = 0; i < pt.dim(); ++i) j.grad(c, i) = v[c].d(i);
  }
  return j;
}

ScalarField::ScalarField(Field f) : field_(std::move(f)) {
  if (field_.size() != 1) throw Error("scalar field must have exactly one component");
}

ScalarField ScalarField::constant(std::size_t dim, double v) { return ScalarField(Field::constant(dim, {v})); }

ScalarField ScalarField::coordinate(std::size_t dim, std::size_t index) {
  return make(dim, [index](auto x) { return x[index]; });
}

ScalarField ScalarField::from_expr(const Chart& chart, const expr::Expr& e,
                                   const std::map<std::string, double, std::less<>>& params) {
  std::map<std::string, std::size_t, std::less<>> slots;
  for (std::size_t i = 0; i < chart.dim(); ++i) slots.emplace(chart.names()[i], i);
  std::vector<double> constants;
  for (const std::string& name : e.free_variables()) {
    if (slots.count(name) != 0) continue;
    const auto it = params.find(name);
    if (it == params.end()) throw expr::EvalError("unbound variable '" + name + "'");
    slots.emplace(name, chart.dim() + constants.size());
    constants.push_back(it->second);
  }
  auto program = std::make_shared<const expr::Program>(e, slots);
  const std::size_t dim = chart.dim();
  return make(dim, [program, constants, dim](auto x) {
    using S = scalar_of<decltype(x)>;
    if (constants.empty()) return program->run<S>(x);
    std::vector<S> inputs(x.begin(), x.end());
    for (double c : constants) inputs.emplace_back(c);
    return program->run<S>(std::span<const S>(inputs));
  });
}

double ScalarField::value(const Point& pt) const { return eval(std::span<const double>(pt.coords)); }

DualScalar ScalarField::dual(const Point& pt) const {
  const auto x = seed(pt.coords);
  return eval(std::span<const DualScalar>(x));
}

VectorField::VectorField(Field f) : field_(std::move(f)) {
  if (field_.size() != field_.in_dim()) throw Error("vector field needs one component per coordinate");
}

VectorField VectorField::constant(std::vector<double> components) {
  const std::size_t n = components.size();
  return VectorField(Field::constant(n, std::move(components)));
}

VectorField VectorField::basis(std::size_t dim, std::size_t i) {
  std::vector<double> c(dim, 0.0);
  c[i] = 1.0;
  return constant(std::move(c));
}

Eigen::VectorXd VectorField::at(const Point& pt) const {
  const auto v = field_.eval(std::span<const double>(pt.coords));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

EndomorphismField::EndomorphismField(Field f) : field_(std::move(f)) {
  if (field_.size() != field_.in_dim() * field_.in_dim()) throw Error("endomorphism field needs dim^2 components");
}

EndomorphismField EndomorphismField::constant(const Eigen::MatrixXd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return EndomorphismField(Field::constant(n, std::move(v)));
}

Eigen::MatrixXd EndomorphismField::at(const Point& pt) const {
  const std::size_t n = dim();
  const auto v = field_.eval(std::span<const double>(pt.coords));
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i * n + j];
  }
  return m;
}

MetricField::MetricField(Field f) : field_(std::move(f)) {
  if (field_.size() != field_.in_dim() * field_.in_dim()) throw Error("metric field needs dim^2 components");
}

MetricField MetricField::constant(const Eigen::MatrixXd& m) {
  return MetricField(EndomorphismField::constant(m).field());
}

Eigen::MatrixXd MetricField::at(const Point& pt) const { return EndomorphismField(field_).at(pt); }

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndexSet::MultiIndexSet(std::size_t n, std::size_t k) : n_(n), k_(k) {
  if (k > n) throw Error("form degree exceeds dimension");
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    lookup_.emplace(idx, sets_.size());
    sets_.push_back(idx);
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::size_t MultiIndexSet::position(std::span<const std::size_t> idx) const {
  const auto it = lookup_.find(std::vector<std::size_t>(idx.begin(), idx.end()));
  if (it == lookup_.end()) throw Error("multi-index is not strictly increasing or out of range");
  return it->second;
}

KForm::KForm(std::size_t degree, Field coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)),
      indices_(std::make_shared<const MultiIndexSet>(coeffs_.in_dim(), degree)) {
  if (coeffs_.size() != indices_->size()) throw Error("k-form coefficient count must be C(dim, k)");
}

KForm KForm::zero(std::size_t dim, std::size_t degree) {
  return constant(dim, degree, std::vector<double>(binomial(dim, degree), 0.0));
}

KForm KForm::constant(std::size_t dim, std::size_t degree, std::vector<double> coeffs) {
  return KForm(degree, Field::constant(dim, std::move(coeffs)));
}

KForm KForm::one_form(std::vector<ScalarField> components) {
  const std::size_t n = components.size();
  return KForm(1, Field::make(n, n, [components = std::move(components)](auto x, auto out) {
                 for (std::size_t i = 0; i < components.size(); ++i) {
                   if (components[i].dim() == 0) {
                     out[i] = 0.0;
                   } else {
                     out[i] = components[i].eval(x);
                   }
                 }
               }));
}

Eigen::VectorXd KForm::coefficients(const Point& pt) const {
  const auto v = coeffs_.eval(std::span<const double>(pt.coords));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double KForm::apply(const Point& pt, std::span<const Eigen::VectorXd> vectors) const {
  if (vectors.size() != degree_) throw Error("k-form applied to wrong number of vectors");
  const Eigen::VectorXd w = coefficients(pt);
  if (degree_ == 0) return w(0);
  double sum = 0.0;
  Eigen::MatrixXd m(degree_, degree_);
  for (std::size_t c = 0; c < indices_->size(); ++c) {
    const auto& idx = (*indices_)[c];
    for (std::size_t a = 0; a < degree_; ++a) {
      for (std::size_t b = 0; b < degree_; ++b) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = vectors[a](static_cast<Eigen::Index>(idx[b]));
      }
    }
    sum += w(static_cast<Eigen::Index>(c)) * m.determinant();
  }
  return sum;
}

double partial(const ScalarField& f, const Point& pt, std::size_t direction) {
  return f.dual(pt).d(direction);
}

double fd_partial(const Chart& chart, const ScalarField& f, const Point& pt, std::size_t direction, double step) {
  const Interval& b = chart.bounds(direction);
  const double x = pt.coords[direction];
  if (x - step < b.lo || x + step > b.hi) {
    throw ChartError("finite-difference stencil leaves the chart in coordinate '" + chart.names()[direction] + "'");
  }
  std::vector<double> plus = pt.coords;
  std::vector<double> minus = pt.coords;
  plus[direction] += step;
  minus[direction] -= step;
  const double fp = f.eval(std::span<const double>(plus));
  const double fm = f.eval(std::span<const double>(minus));
  return (fp - fm) / (2.0 * step);
}

ScalarField partial_field(const ScalarField& f, std::size_t direction) {
  return ScalarField::make(f.dim(), [f, direction](auto x) {
    using S = scalar_of<decltype(x)>;
    if constexpr (std::is_same_v<S, HyperDual>) {
      throw Error("differentiation order exceeded: derived field evaluated at third order");
      return S{};
    } else {
      const auto lx = seed_lifted(x);
      return f.eval(std::span<const lifted_t<S>>(lx)).d(direction);
    }
  });
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField::make(a.dim(), [a, b](auto x) { return a.eval(x) + b.eval(x); });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField::make(a.dim(), [a, b](auto x) { return a.eval(x) - b.eval(x); });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField::make(a.dim(), [a, b](auto x) { return a.eval(x) * b.eval(x); });
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField::make(a.dim(), [a, b](auto x) {
    const auto den = b.eval(x);
    if (primal(den) == 0.0) throw Error("division by zero in field quotient");
    return a.eval(x) / den;
  });
}
ScalarField operator*(double s, const ScalarField& a) {
  return ScalarField::make(a.dim(), [s, a](auto x) { return s * a.eval(x); });
}
ScalarField exp(const ScalarField& a) {
  return ScalarField::make(a.dim(), [a](auto x) {
    using std::exp;
    return exp(a.eval(x));
  });
}
ScalarField log(const ScalarField& a) {
  return ScalarField::make(a.dim(), [a](auto x) {
    using std::log;
    const auto v = a.eval(x);
    if (primal(v) <= 0.0) throw Error("log of non-positive field value");
    return log(v);
  });
}

Field lift(const Field& f, std::size_t total_dim, std::size_t offset) {
  if (offset + f.in_dim() > total_dim) throw Error("lifted field does not fit in the target chart");
  return Field::make(total_dim, f.size(), [f, offset](auto x, auto out) {
    const auto v = f.eval(x.subspan(offset, f.in_dim()));
    std::copy(v.begin(), v.end(), out.begin());
  });
}

MetricField scale(const ScalarField& factor, const MetricField& g) {
  return MetricField(Field::make(g.dim(), g.dim() * g.dim(), [factor, g](auto x, auto out) {
    const auto s = factor.eval(x);
    const auto m = g.field().eval(x);
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = s * m[i];
  }));
}

VectorField apply(const EndomorphismField& J, const VectorField& X) {
  const std::size_t n = J.dim();
  return VectorField(Field::make(n, n, [J, X, n](auto x, auto out) {
    const auto m = J.field().eval(x);
    const auto v = X.field().eval(x);
    for (std::size_t i = 0; i < n; ++i) {
      auto acc = m[i * n] * v[0];
      for (std::size_t j = 1; j < n; ++j) acc += m[i * n + j] * v[j];
      out[i] = acc;
    }
  }));
}

}  // namespace wpk
