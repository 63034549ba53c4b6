#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <type_traits>

namespace wpk {

// Upper bound on the number of differentiation directions carried by a
// dual scalar. One slot per chart coordinate, so this also caps chart dim.
inline constexpr std::size_t kMaxDirections = 10;

// Forward-mode dual number over scalar type T. Slots past size() are kept at
// zero, so mixed-size arithmetic can run over the larger of the two sizes.
//
// Dual<double> carries first derivatives; Dual<Dual<double>> carries the
// first derivatives of first derivatives, used when a field itself is defined
// as a partial derivative of another field.
template <class T>
class Dual {
 public:
  using value_type = T;

  constexpr Dual() = default;
  constexpr Dual(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  template <class U = T>
    requires(!std::is_same_v<U, double>)
  constexpr Dual(const T& v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  // A coordinate variable: value v with slot `slot` seeded to one.
  static Dual variable(const T& v, std::size_t slot, std::size_t slots) {
    Dual r(v);
    r.n_ = static_cast<std::uint8_t>(slots);
    r.d_[slot] = T(1.0);
    return r;
  }

  const T& value() const { return value_; }
  T& value() { return value_; }
  std::size_t size() const { return n_; }
  const T& d(std::size_t i) const { return d_[i]; }

  void resize(std::size_t n) { n_ = static_cast<std::uint8_t>(n); }
  void set_d(std::size_t i, const T& v) {
    d_[i] = v;
    if (i >= n_) n_ = static_cast<std::uint8_t>(i + 1);
  }

  Dual operator-() const {
    Dual r(-value_);
    r.n_ = n_;
    for (std::size_t i = 0; i < n_; ++i) r.d_[i] = -d_[i];
    return r;
  }

  Dual& operator+=(const Dual& b) {
    value_ += b.value_;
    n_ = std::max(n_, b.n_);
    for (std::size_t i = 0; i < n_; ++i) d_[i] += b.d_[i];
    return *this;
  }
  Dual& operator-=(const Dual& b) {
    value_ -= b.value_;
    n_ = std::max(n_, b.n_);
    for (std::size_t i = 0; i < n_; ++i) d_[i] -= b.d_[i];
    return *this;
  }
  Dual& operator*=(const Dual& b) {
    const std::size_t n = std::max(n_, b.n_);
    for (std::size_t i = 0; i < n; ++i) d_[i] = d_[i] * b.value_ + value_ * b.d_[i];
    value_ *= b.value_;
    n_ = static_cast<std::uint8_t>(n);
    return *this;
  }
  Dual& operator/=(const Dual& b) {
    const T q = value_ / b.value_;
    const std::size_t n = std::max(n_, b.n_);
    for (std::size_t i = 0; i < n; ++i) d_[i] = (d_[i] - q * b.d_[i]) / b.value_;
    value_ = q;
    n_ = static_cast<std::uint8_t>(n);
    return *this;
  }
  Dual& operator*=(double s) {
    value_ *= s;
    for (std::size_t i = 0; i < n_; ++i) d_[i] *= s;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }

  friend Dual operator+(Dual a, double b) { a.value_ += b; return a; }
  friend Dual operator+(double a, Dual b) { b.value_ += a; return b; }
  friend Dual operator-(Dual a, double b) { a.value_ -= b; return a; }
  friend Dual operator-(double a, const Dual& b) { Dual r = -b; r.value_ += a; return r; }
  friend Dual operator*(Dual a, double b) { return a *= b; }
  friend Dual operator*(double a, Dual b) { return b *= a; }
  friend Dual operator/(Dual a, double b) { return a *= (1.0 / b); }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

  // Chain rule for a unary primitive with value fv and derivative dfv at value().
  Dual chain(const T& fv, const T& dfv) const {
    Dual r(fv);
    r.n_ = n_;
    for (std::size_t i = 0; i < n_; ++i) r.d_[i] = dfv * d_[i];
    return r;
  }

 private:
  T value_{};
  std::array<T, kMaxDirections> d_{};
  std::uint8_t n_ = 0;
};

using DualScalar = Dual<double>;
using HyperDual = Dual<DualScalar>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

// The scalar one nesting level up: double -> DualScalar -> HyperDual.
template <class S>
struct lifted;
template <>
struct lifted<double> {
  using type = DualScalar;
};
template <>
struct lifted<DualScalar> {
  using type = HyperDual;
};
template <class S>
using lifted_t = typename lifted<S>::type;

inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.value());
}

// True when no derivative slot at any nesting level is nonzero.
inline bool is_constant(double) { return true; }
template <class T>
bool is_constant(const Dual<T>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x.d(i) == T(0.0))) return false;
  }
  return is_constant(x.value());
}

inline bool operator==(const DualScalar& a, const DualScalar& b) {
  if (a.value() != b.value()) return false;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.d(i) != b.d(i)) return false;
  }
  return true;
}
inline bool operator==(const HyperDual& a, const HyperDual& b) {
  if (!(a.value() == b.value())) return false;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a.d(i) == b.d(i))) return false;
  }
  return true;
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.value());
  return a.chain(e, e);
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return a.chain(log(a.value()), 1.0 / a.value());
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return a.chain(sin(a.value()), cos(a.value()));
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return a.chain(cos(a.value()), -sin(a.value()));
}
template <class T>
Dual<T> tan(const Dual<T>& a) {
  using std::tan;
  const T t = tan(a.value());
  return a.chain(t, 1.0 + t * t);
}
template <class T>
Dual<T> sinh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return a.chain(sinh(a.value()), cosh(a.value()));
}
template <class T>
Dual<T> cosh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return a.chain(cosh(a.value()), sinh(a.value()));
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  const T t = tanh(a.value());
  return a.chain(t, 1.0 - t * t);
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.value());
  if (primal(s) == 0.0) return a.chain(s, T(0.0));
  return a.chain(s, 0.5 / s);
}
template <class T>
Dual<T> abs(const Dual<T>& a) {
  using std::abs;
  const double v = primal(a.value());
  const double sign = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  return a.chain(abs(a.value()), T(sign));
}

// a^b. The value is computed by pow on the underlying scalar so that a
// derivative-free evaluation reproduces plain real evaluation bit for bit.
template <class T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& b) {
  using std::log;
  using std::pow;
  const T v = pow(a.value(), b.value());
  Dual<T> r(v);
  const std::size_t n = std::max(a.size(), b.size());
  r.resize(n);
  bool b_varies = false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b.d(i) == T(0.0))) b_varies = true;
  }
  bool a_varies = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.d(i) == T(0.0))) a_varies = true;
  }
  if (a_varies) {
    const T coef = b.value() * pow(a.value(), b.value() - 1.0);
    for (std::size_t i = 0; i < n; ++i) r.set_d(i, coef * a.d(i));
  }
  if (b_varies) {
    const T coef = v * log(a.value());
    for (std::size_t i = 0; i < n; ++i) r.set_d(i, r.d(i) + coef * b.d(i));
  }
  r.resize(n);
  return r;
}

}  // namespace wpk
