#include "wpk/contact.hpp"

#include <cmath>

namespace wpk {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

double max_abs(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  return m.cwiseAbs().maxCoeff();
}

MatrixXd square(const Eigen::VectorXd& flat, std::size_t n) {
  MatrixXd m(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(ix(i), ix(j)) = flat(ix(i * n + j));
  }
  return m;
}

// Structure tensors and their first derivatives at one point.
struct Frame {
  MetricJet metric;
  Christoffel gamma;
  Jet phi_jet;
  Jet xi_jet;
  Jet eta_jet;
  MatrixXd phi;
  VectorXd xi;
  VectorXd eta;

  Frame(const AlmostContactStructure& acs, const Point& pt)
      : metric(metric_jet(acs.g, pt)), gamma(christoffel(metric)), phi_jet(jet(acs.phi.field(), pt)),
        xi_jet(jet(acs.xi.field(), pt)), eta_jet(jet(acs.eta.field(), pt)),
        phi(square(phi_jet.value, acs.chart.dim())), xi(xi_jet.value), eta(eta_jet.value) {}
};

void require_odd(const AlmostContactStructure& acs) {
  if (acs.chart.dim() % 2 == 0) {
    throw StructureError("almost contact structure needs an odd-dimensional chart, got dimension " +
                         std::to_string(acs.chart.dim()));
  }
}

// Max over basis pairs of the trans-Sasakian misfit with the given alpha, beta.
double trans_sasakian_at(const Frame& f, double alpha, double beta) {
  const std::size_t n = static_cast<std::size_t>(f.phi.rows());
  const MatrixXd phiT_g = f.phi.transpose() * f.metric.g;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    VectorXd e = VectorXd::Zero(ix(n));
    e(ix(i)) = 1.0;
    const MatrixXd nabla = covariant_derivative_endo(f.gamma, f.phi_jet, e);
    for (std::size_t j = 0; j < n; ++j) {
      VectorXd rhs = alpha * (f.metric.g(ix(i), ix(j)) * f.xi - f.eta(ix(j)) * e) +
                     beta * (phiT_g(ix(i), ix(j)) * f.xi - f.eta(ix(j)) * f.phi.col(ix(i)));
      worst = std::max(worst, max_abs(nabla.col(ix(j)) - rhs));
    }
  }
  return worst;
}

}  // namespace

KForm fundamental_form(const MetricField& g, const EndomorphismField& J) {
  const std::size_t n = g.dim();
  auto idx = std::make_shared<const MultiIndexSet>(n, 2);
  return KForm(2, Field::make(n, idx->size(), [g, J, n, idx](auto x, auto out) {
                 const auto gv = g.field().eval(x);
                 const auto jv = J.field().eval(x);
                 for (std::size_t c = 0; c < idx->size(); ++c) {
                   const std::size_t a = (*idx)[c][0];
                   const std::size_t b = (*idx)[c][1];
                   auto acc = gv[a * n] * jv[b];
                   for (std::size_t k = 1; k < n; ++k) acc += gv[a * n + k] * jv[k * n + b];
                   out[c] = acc;
                 }
               }));
}

KForm kahler_form(const AlmostContactStructure& acs) { return fundamental_form(acs.g, acs.phi); }

double kahler_form_antisymmetry(const AlmostContactStructure& acs, const Point& pt) {
  const MatrixXd gphi = acs.g.at(pt) * acs.phi.at(pt);
  return max_abs(gphi + gphi.transpose());
}

VerificationReport check_axioms(const AlmostContactStructure& acs, const std::vector<Point>& pts, double tolerance) {
  require_odd(acs);
  const std::size_t n = acs.chart.dim();
  const MatrixXd id = MatrixXd::Identity(ix(n), ix(n));
  ResidualTracker phi_sq;
  ResidualTracker eta_xi;
  ResidualTracker eta_phi;
  ResidualTracker phi_xi;
  ResidualTracker compat;
  for (const Point& pt : pts) {
    const MatrixXd phi = acs.phi.at(pt);
    const VectorXd xi = acs.xi.at(pt);
    const VectorXd eta = acs.eta.coefficients(pt);
    const MatrixXd g = acs.g.at(pt);
    phi_sq.update(max_abs(phi * phi + id - xi * eta.transpose()), pt);
    eta_xi.update(std::abs(eta.dot(xi) - 1.0), pt);
    eta_phi.update(max_abs(eta.transpose() * phi), pt);
    phi_xi.update(max_abs(phi * xi), pt);
    compat.update(max_abs(phi.transpose() * g * phi - g + eta * eta.transpose()), pt);
  }
  VerificationReport r;
  r.add(phi_sq.record("axioms.phi_squared", "phi^2 X = -X + eta(X) xi", tolerance));
  r.add(eta_xi.record("axioms.eta_xi", "eta(xi) = 1", tolerance));
  r.add(eta_phi.record("axioms.eta_phi", "eta o phi = 0", tolerance));
  r.add(phi_xi.record("axioms.phi_xi", "phi xi = 0", tolerance));
  r.add(compat.record("axioms.compatibility", "g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)", tolerance));
  return r;
}

VerificationReport trans_sasakian_residual(const AlmostContactStructure& acs, const TransSasakianCoeffs& coeffs,
                                           const std::vector<Point>& pts, double tolerance) {
  require_odd(acs);
  ResidualTracker t;
  for (const Point& pt : pts) {
    const Frame f(acs, pt);
    t.update(trans_sasakian_at(f, coeffs.alpha.value(pt), coeffs.beta.value(pt)), pt);
  }
  VerificationReport r;
  r.add(t.record("trans_sasakian",
                 "(nabla_X phi)Y = alpha(g(X,Y) xi - eta(Y) X) + beta(g(phi X,Y) xi - eta(Y) phi X)", tolerance));
  return r;
}

VerificationReport kenmotsu_residuals(const AlmostContactStructure& acs, const ScalarField& beta,
                                      const std::vector<Point>& pts, double tolerance) {
  require_odd(acs);
  const std::size_t n = acs.chart.dim();
  const KForm d_eta = exterior_derivative(acs.eta);
  ResidualTracker nabla_phi;
  ResidualTracker nabla_xi;
  ResidualTracker nabla_eta;
  ResidualTracker closed;
  for (const Point& pt : pts) {
    const Frame f(acs, pt);
    const double b = beta.value(pt);
    nabla_phi.update(trans_sasakian_at(f, 0.0, b), pt);
    double worst_xi = 0.0;
    double worst_eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      VectorXd e = VectorXd::Zero(ix(n));
      e(ix(i)) = 1.0;
      const VectorXd dxi = covariant_derivative_vector(f.gamma, e, f.xi_jet);
      worst_xi = std::max(worst_xi, max_abs(dxi - b * (e - f.eta(ix(i)) * f.xi)));
      const VectorXd deta = covariant_derivative_oneform(f.gamma, f.eta_jet, e);
      const VectorXd expected = b * (f.metric.g.row(ix(i)).transpose() - f.eta(ix(i)) * f.eta);
      worst_eta = std::max(worst_eta, max_abs(deta - expected));
    }
    nabla_xi.update(worst_xi, pt);
    nabla_eta.update(worst_eta, pt);
    closed.update(max_abs_coefficient(d_eta, pt), pt);
  }
  VerificationReport r;
  r.add(nabla_phi.record("kenmotsu.nabla_phi", "(nabla_X phi)Y = beta(g(phi X,Y) xi - eta(Y) phi X)", tolerance));
  r.add(nabla_xi.record("kenmotsu.nabla_xi", "nabla_X xi = beta(X - eta(X) xi)", tolerance));
  r.add(nabla_eta.record("kenmotsu.nabla_eta", "(nabla_X eta)Y = beta(g(X,Y) - eta(X) eta(Y))", tolerance));
  r.add(closed.record("kenmotsu.d_eta", "d eta = 0", tolerance));
  return r;
}

KappaResiduals kappa_residuals(const AlmostContactStructure& acs, const ScalarField& beta,
                               const std::vector<Point>& pts) {
  require_odd(acs);
  const KForm omega = kahler_form(acs);
  const KForm d_omega = exterior_derivative(omega);
  const KForm beta_eta_omega = beta * wedge(acs.eta, omega);
  ResidualTracker one;
  ResidualTracker two;
  KappaResiduals r;
  for (const Point& pt : pts) {
    const VectorXd lhs = d_omega.coefficients(pt);
    const VectorXd rhs = beta_eta_omega.coefficients(pt);
    one.update(max_abs(lhs - rhs), pt);
    two.update(max_abs(lhs - 2.0 * rhs), pt);
    r.scale = std::max(r.scale, max_abs(rhs));
  }
  r.one = one.max();
  r.two = two.max();
  r.witness_one = one.witness();
  r.witness_two = two.witness();
  return r;
}

ConventionFactor calibrate_kappa(const AlmostContactStructure& acs, const ScalarField& beta,
                                 const std::vector<Point>& pts, double tolerance) {
  const KappaResiduals r = kappa_residuals(acs, beta, pts);
  if (r.scale == 0.0) throw CalibrationError("beta eta ^ Omega vanishes on the samples; kappa is undetermined");
  ConventionFactor cf = r.one <= r.two ? ConventionFactor{1.0, r.one, r.two} : ConventionFactor{2.0, r.two, r.one};
  if (!(cf.residual <= tolerance)) {
    throw CalibrationError("neither kappa = 1 nor kappa = 2 fits d(Omega) = kappa beta eta ^ Omega (residuals " +
                           format_real(r.one) + ", " + format_real(r.two) + ")");
  }
  return cf;
}

VerificationReport almost_kenmotsu_check(const AlmostContactStructure& acs, const ScalarField& beta, double kappa,
                                         const std::vector<Point>& pts, double tolerance) {
  require_odd(acs);
  const KForm omega = kahler_form(acs);
  const KForm d_eta = exterior_derivative(acs.eta);
  const KForm misfit = exterior_derivative(omega) - (kappa * (beta * wedge(acs.eta, omega)));
  ResidualTracker closed;
  ResidualTracker lee;
  for (const Point& pt : pts) {
    closed.update(max_abs_coefficient(d_eta, pt), pt);
    lee.update(max_abs_coefficient(misfit, pt), pt);
  }
  VerificationReport r;
  r.add(closed.record("almost_kenmotsu.d_eta", "d eta = 0", tolerance));
  r.add(lee.record("almost_kenmotsu.d_omega", "d Omega = kappa beta eta ^ Omega", tolerance));
  return r;
}

double fit_trans_sasakian_alpha(const AlmostContactStructure& acs, const ScalarField& beta,
                                const std::vector<Point>& pts) {
  require_odd(acs);
  const std::size_t n = acs.chart.dim();
  double num = 0.0;
  double den = 0.0;
  for (const Point& pt : pts) {
    const Frame f(acs, pt);
    const double b = beta.value(pt);
    const MatrixXd phiT_g = f.phi.transpose() * f.metric.g;
    for (std::size_t i = 0; i < n; ++i) {
      VectorXd e = VectorXd::Zero(ix(n));
      e(ix(i)) = 1.0;
      const MatrixXd nabla = covariant_derivative_endo(f.gamma, f.phi_jet, e);
      for (std::size_t j = 0; j < n; ++j) {
        const VectorXd target =
            nabla.col(ix(j)) - b * (phiT_g(ix(i), ix(j)) * f.xi - f.eta(ix(j)) * f.phi.col(ix(i)));
        const VectorXd basis = f.metric.g(ix(i), ix(j)) * f.xi - f.eta(ix(j)) * e;
        num += target.dot(basis);
        den += basis.dot(basis);
      }
    }
  }
  if (den == 0.0) throw CalibrationError("alpha term vanishes on the samples");
  return num / den;
}

ContactConstant calibrate_contact_constant(const AlmostContactStructure& acs, const std::vector<Point>& pts) {
  const KForm omega = kahler_form(acs);
  const KForm d_eta = exterior_derivative(acs.eta);
  double num = 0.0;
  double den = 0.0;
  std::vector<std::pair<VectorXd, VectorXd>> values;
  values.reserve(pts.size());
  for (const Point& pt : pts) {
    values.emplace_back(omega.coefficients(pt), d_eta.coefficients(pt));
    num += values.back().first.dot(values.back().second);
    den += values.back().second.squaredNorm();
  }
  if (den == 0.0) throw CalibrationError("d eta vanishes on the samples; no contact constant");
  ContactConstant out{num / den, 0.0};
  for (const auto& [o, d] : values) out.residual = std::max(out.residual, max_abs(o - out.c * d));
  return out;
}

}  // namespace wpk
