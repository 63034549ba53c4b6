#include "wpk/calculus.hpp"

#include <array>
#include <cmath>

namespace wpk {

namespace {

using Index = Eigen::Index;

template <class Span>
using scalar_of = std::remove_cv_t<typename Span::element_type>;

Index ix(std::size_t i) { return static_cast<Index>(i); }

struct WedgeTerm {
  std::size_t out;
  std::size_t a;
  std::size_t b;
  double sign;
};

std::vector<WedgeTerm> wedge_table(std::size_t n, std::size_t p, std::size_t q) {
  const MultiIndexSet out_set(n, p + q);
  const MultiIndexSet a_set(n, p);
  const MultiIndexSet b_set(n, q);
  const MultiIndexSet positions(p + q, p);
  std::vector<WedgeTerm> table;
  for (std::size_t c = 0; c < out_set.size(); ++c) {
    const auto& K = out_set[c];
    for (const auto& pos : positions.all()) {
      std::vector<std::size_t> I;
      std::vector<std::size_t> J;
      std::size_t inversions = 0;
      std::size_t next = 0;
      for (std::size_t m = 0; m < K.size(); ++m) {
        if (next < pos.size() && pos[next] == m) {
          I.push_back(K[m]);
          inversions += m - next;
          ++next;
        } else {
          J.push_back(K[m]);
        }
      }
      table.push_back({c, a_set.position(I), b_set.position(J), inversions % 2 == 0 ? 1.0 : -1.0});
    }
  }
  return table;
}

struct DerivativeTerm {
  std::size_t out;
  std::size_t direction;
  std::size_t coeff;
  double sign;
};

std::vector<DerivativeTerm> derivative_table(std::size_t n, std::size_t k) {
  const MultiIndexSet out_set(n, k + 1);
  const MultiIndexSet in_set(n, k);
  std::vector<DerivativeTerm> table;
  for (std::size_t c = 0; c < out_set.size(); ++c) {
    const auto& K = out_set[c];
    for (std::size_t m = 0; m < K.size(); ++m) {
      std::vector<std::size_t> I;
      for (std::size_t r = 0; r < K.size(); ++r) {
        if (r != m) I.push_back(K[r]);
      }
      table.push_back({c, K[m], in_set.position(I), m % 2 == 0 ? 1.0 : -1.0});
    }
  }
  return table;
}

constexpr std::array<double, 4> kGaussNodes{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                            0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                              0.3478548451374538};

template <class S>
S composite_gauss(const KForm& w, std::span<const double> base, std::span<const S> x, std::size_t panels) {
  const std::size_t n = base.size();
  std::vector<S> direction(n);
  for (std::size_t i = 0; i < n; ++i) direction[i] = x[i] - base[i];
  std::vector<S> gamma(n);
  S total(0.0);
  const double h = 1.0 / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < 4; ++q) {
      const double s = h * (static_cast<double>(p) + 0.5 * (1.0 + kGaussNodes[q]));
      for (std::size_t i = 0; i < n; ++i) gamma[i] = base[i] + s * direction[i];
      const auto coeffs = w.field().eval(std::span<const S>(gamma));
      S integrand = coeffs[0] * direction[0];
      for (std::size_t i = 1; i < n; ++i) integrand += coeffs[i] * direction[i];
      total += (0.5 * h * kGaussWeights[q]) * integrand;
    }
  }
  return total;
}

}  // namespace

ClosednessError::ClosednessError(double residual, std::vector<double> witness)
    : Error("closedness violated: |dw| = " + std::to_string(residual)), residual_(residual),
      witness_(std::move(witness)) {}

MetricJet metric_jet(const MetricField& g, const Point& pt) {
  const std::size_t n = g.dim();
  const Jet j = jet(g.field(), pt);
  MetricJet mj{Eigen::MatrixXd(n, n), Eigen::MatrixXd(), std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd(n, n))};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      mj.g(ix(a), ix(b)) = j.value(ix(a * n + b));
      for (std::size_t k = 0; k < n; ++k) mj.dg[k](ix(a), ix(b)) = j.grad(ix(a * n + b), ix(k));
    }
  }
  const double scale = std::max(1.0, mj.g.cwiseAbs().maxCoeff());
  if ((mj.g - mj.g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SingularMetricError("metric is not symmetric at the requested point");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(mj.g);
  if (llt.info() != Eigen::Success || !mj.g.allFinite()) {
    throw SingularMetricError("metric is not positive definite at the requested point");
  }
  mj.inverse = llt.solve(Eigen::MatrixXd::Identity(ix(n), ix(n)));
  return mj;
}

Christoffel christoffel(const MetricJet& mj) {
  const auto n = static_cast<std::size_t>(mj.g.rows());
  Christoffel gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          acc += mj.inverse(ix(k), ix(l)) *
                 (mj.dg[i](ix(j), ix(l)) + mj.dg[j](ix(i), ix(l)) - mj.dg[l](ix(i), ix(j)));
        }
        gamma(k, i, j) = 0.5 * acc;
        gamma(k, j, i) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

Christoffel christoffel(const MetricField& g, const Point& pt) { return christoffel(metric_jet(g, pt)); }

double metric_compatibility_residual(const MetricField& g, const Point& pt) {
  const MetricJet mj = metric_jet(g, pt);
  const Christoffel gamma = christoffel(mj);
  const std::size_t n = g.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double r = mj.dg[k](ix(i), ix(j));
        for (std::size_t l = 0; l < n; ++l) {
          r -= gamma(l, k, i) * mj.g(ix(l), ix(j)) + gamma(l, k, j) * mj.g(ix(i), ix(l));
        }
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

Eigen::VectorXd covariant_derivative_vector(const Christoffel& gamma, const Eigen::VectorXd& X, const Jet& Y) {
  const std::size_t n = gamma.dim();
  Eigen::VectorXd out = Y.grad * X;
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) acc += X(ix(i)) * Y.value(ix(j)) * gamma(k, i, j);
    }
    out(ix(k)) += acc;
  }
  return out;
}

Eigen::VectorXd covariant_derivative_vector(const MetricField& g, const VectorField& X, const VectorField& Y,
                                            const Point& pt) {
  return covariant_derivative_vector(christoffel(g, pt), X.at(pt), jet(Y.field(), pt));
}

Eigen::MatrixXd covariant_derivative_endo(const Christoffel& gamma, const Jet& J, const Eigen::VectorXd& X) {
  const std::size_t n = gamma.dim();
  auto Jv = [&](std::size_t k, std::size_t j) { return J.value(ix(k * n + j)); };
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ix(n), ix(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (X(ix(i)) == 0.0) continue;
        double term = J.grad(ix(k * n + j), ix(i));
        for (std::size_t l = 0; l < n; ++l) term += gamma(k, i, l) * Jv(l, j) - gamma(l, i, j) * Jv(k, l);
        acc += X(ix(i)) * term;
      }
      out(ix(k), ix(j)) = acc;
    }
  }
  return out;
}

Eigen::MatrixXd covariant_derivative_endo(const MetricField& g, const EndomorphismField& J, const VectorField& X,
                                          const Point& pt) {
  return covariant_derivative_endo(christoffel(g, pt), jet(J.field(), pt), X.at(pt));
}

Eigen::VectorXd covariant_derivative_oneform(const Christoffel& gamma, const Jet& w, const Eigen::VectorXd& X) {
  const std::size_t n = gamma.dim();
  Eigen::VectorXd out = w.grad * X;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) acc += X(ix(i)) * gamma(l, i, j) * w.value(ix(l));
    }
    out(ix(j)) -= acc;
  }
  return out;
}

Eigen::VectorXd covariant_derivative_oneform(const MetricField& g, const KForm& w, const VectorField& X,
                                             const Point& pt) {
  if (w.degree() != 1) throw Error("covariant derivative of a one-form needs degree 1");
  return covariant_derivative_oneform(christoffel(g, pt), jet(w.field(), pt), X.at(pt));
}

Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const Point& pt) {
  const Jet jx = jet(X.field(), pt);
  const Jet jy = jet(Y.field(), pt);
  return jy.grad * jx.value - jx.grad * jy.value;
}

KForm wedge(const KForm& a, const KForm& b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) throw Error("wedge of forms on different charts");
  const std::size_t p = a.degree();
  const std::size_t q = b.degree();
  if (p + q > n) throw Error("wedge degree " + std::to_string(p + q) + " exceeds dimension " + std::to_string(n));
  auto table = std::make_shared<const std::vector<WedgeTerm>>(wedge_table(n, p, q));
  return KForm(p + q, Field::make(n, binomial(n, p + q), [a, b, table](auto x, auto out) {
                 const auto av = a.field().eval(x);
                 const auto bv = b.field().eval(x);
                 for (auto& o : out) o = 0.0;
                 for (const WedgeTerm& t : *table) out[t.out] += t.sign * (av[t.a] * bv[t.b]);
               }));
}

KForm exterior_derivative(const KForm& w) {
  const std::size_t n = w.dim();
  const std::size_t k = w.degree();
  if (k >= n) throw Error("exterior derivative of a top-degree form");
  auto table = std::make_shared<const std::vector<DerivativeTerm>>(derivative_table(n, k));
  return KForm(k + 1, Field::make(n, binomial(n, k + 1), [w, table](auto x, auto out) {
                 using S = scalar_of<decltype(x)>;
                 if constexpr (std::is_same_v<S, HyperDual>) {
                   throw Error("differentiation order exceeded: exterior derivative evaluated at third order");
                 } else {
                   const auto lx = seed_lifted(x);
                   const auto v = w.field().eval(std::span<const lifted_t<S>>(lx));
                   for (auto& o : out) o = 0.0;
                   for (const DerivativeTerm& t : *table) out[t.out] += t.sign * v[t.coeff].d(t.direction);
                 }
               }));
}

KForm operator+(const KForm& a, const KForm& b) {
  if (a.degree() != b.degree() || a.dim() != b.dim()) throw Error("adding forms of different shape");
  return KForm(a.degree(), Field::make(a.dim(), a.field().size(), [a, b](auto x, auto out) {
                 const auto av = a.field().eval(x);
                 const auto bv = b.field().eval(x);
                 for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
               }));
}

KForm operator-(const KForm& a, const KForm& b) { return a + (-1.0) * b; }

KForm operator*(const ScalarField& f, const KForm& w) {
  return KForm(w.degree(), Field::make(w.dim(), w.field().size(), [f, w](auto x, auto out) {
                 const auto s = f.eval(x);
                 const auto v = w.field().eval(x);
                 for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * v[i];
               }));
}

KForm operator*(double s, const KForm& w) {
  return KForm(w.degree(), Field::make(w.dim(), w.field().size(), [s, w](auto x, auto out) {
                 const auto v = w.field().eval(x);
                 for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * v[i];
               }));
}

double max_abs_coefficient(const KForm& w, const Point& pt) {
  const Eigen::VectorXd c = w.coefficients(pt);
  if (c.size() == 0) return 0.0;
  if (!c.allFinite()) return std::numeric_limits<double>::infinity();
  return c.cwiseAbs().maxCoeff();
}

template <class S>
S line_integral(const KForm& w, std::span<const double> base, std::span<const S> x, const PotentialOptions& options) {
  S previous = composite_gauss<S>(w, base, x, options.initial_panels);
  for (std::size_t panels = 2 * options.initial_panels; panels <= options.max_panels; panels *= 2) {
    S current = composite_gauss<S>(w, base, x, panels);
    if (std::abs(primal(current) - primal(previous)) < options.convergence) return current;
    previous = std::move(current);
  }
  throw QuadratureError("line integral did not converge within " + std::to_string(options.max_panels) + " panels");
}

template double line_integral<double>(const KForm&, std::span<const double>, std::span<const double>,
                                      const PotentialOptions&);
template DualScalar line_integral<DualScalar>(const KForm&, std::span<const double>, std::span<const DualScalar>,
                                              const PotentialOptions&);
template HyperDual line_integral<HyperDual>(const KForm&, std::span<const double>, std::span<const HyperDual>,
                                            const PotentialOptions&);

ScalarField one_form_potential(const KForm& w, const Point& basepoint, const std::vector<Point>& check_points,
                               const PotentialOptions& options) {
  if (w.degree() != 1) throw Error("potential requires a one-form");
  if (basepoint.dim() != w.dim()) throw Error("basepoint dimension mismatch");
  if (w.dim() >= 2) {
    const KForm dw = exterior_derivative(w);
    double worst = 0.0;
    std::vector<double> witness;
    for (const Point& pt : check_points) {
      const double r = max_abs_coefficient(dw, pt);
      if (r > worst || witness.empty()) {
        worst = std::max(worst, r);
        witness = pt.coords;
      }
    }
    if (worst > options.closed_tol) throw ClosednessError(worst, witness);
  }
  std::vector<double> base = basepoint.coords;
  return ScalarField::make(w.dim(), [w, base, options](auto x) {
    using S = scalar_of<decltype(x)>;
    return line_integral<S>(w, base, x, options);
  });
}

}  // namespace wpk
