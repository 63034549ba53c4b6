#include "wpk/warp.hpp"

#include <cmath>

namespace wpk {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

template <class Span>
using scalar_of = std::remove_cv_t<typename Span::element_type>;

Index ix(std::size_t i) { return static_cast<Index>(i); }

double max_abs(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  return m.cwiseAbs().maxCoeff();
}

MatrixXd square(const VectorXd& flat, std::size_t n) {
  MatrixXd m(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(ix(i), ix(j)) = flat(ix(i * n + j));
  }
  return m;
}

VectorXd unit(std::size_t n, std::size_t i) {
  VectorXd e = VectorXd::Zero(ix(n));
  e(ix(i)) = 1.0;
  return e;
}

constexpr std::size_t kWarpGrid = 1025;

// Point values of the warped-product tensors, indexed on the total chart.
struct WarpFrame {
  double p = 0.0;
  double l = 0.0;  // t-derivative of ln p
  double beta = 0.0;
  VectorXd eta;
  VectorXd xi;
  VectorXd xi_bar;
  MatrixXd phi;
  MatrixXd G;
  MatrixXd J;

  WarpFrame(const WarpedProduct& wp, const Point& pt)
      : p(wp.p.value(pt)), l(wp.dlnp.value(pt)), beta(wp.beta.value(pt)), eta(wp.eta.coefficients(pt)),
        xi(wp.xi.at(pt)), xi_bar(unit(wp.dim(), 0)), phi(wp.phi_lift.at(pt)), G(wp.G.at(pt)), J(wp.J.at(pt)) {}
};

VectorXd fiber_part(const VectorXd& v) {
  VectorXd out = v;
  out(0) = 0.0;
  return out;
}

VectorXd nabla_j_terms(const WarpFrame& f, const VectorXd& x_bar, const VectorXd& y_bar) {
  const double xt = x_bar(0);
  const double yt = y_bar(0);
  const VectorXd x = fiber_part(x_bar);
  const VectorXd y = fiber_part(y_bar);
  const VectorXd jx = f.J * x;
  const double eta_x = f.eta.dot(x);
  const double eta_y = f.eta.dot(y);
  const VectorXd phi_x = f.phi * x;
  const VectorXd t1 = f.beta * phi_x.dot(f.G * y) * f.xi - f.beta * eta_y * jx - f.beta * x.dot(f.G * y) * f.xi_bar -
                      eta_y * f.l * x;
  const VectorXd t2 = yt * (f.beta * x - f.beta * eta_x * f.xi - f.l * jx);
  const VectorXd t3 = xt * eta_y * f.l * f.xi_bar;
  const VectorXd t4 = xt * yt * f.l * f.xi;
  return t1 + t2 + t3 + t4;
}

VectorXd nabla_j_correction_terms(const WarpFrame& f, const VectorXd& x_bar, const VectorXd& y_bar) {
  const double xt = x_bar(0);
  const double yt = y_bar(0);
  const VectorXd x = fiber_part(x_bar);
  const VectorXd y = fiber_part(y_bar);
  const double eta_x = f.eta.dot(x);
  const double eta_y = f.eta.dot(y);
  const VectorXd fiber = x.dot(f.G * y) * f.xi - x.dot(f.G * (f.phi * y)) * f.xi_bar;
  return f.l * (fiber - (yt * eta_x + xt * eta_y) * f.xi_bar - xt * yt * f.xi);
}

// Connection-free N_J(e_a, e_b) from the value and first derivatives of J.
VectorXd nijenhuis_basis(const MatrixXd& J, const std::vector<MatrixXd>& dJ, std::size_t a, std::size_t b) {
  const std::size_t n = static_cast<std::size_t>(J.rows());
  VectorXd bracket = VectorXd::Zero(ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    bracket += J(ix(i), ix(a)) * dJ[i].col(ix(b)) - J(ix(i), ix(b)) * dJ[i].col(ix(a));
  }
  return bracket + J * dJ[b].col(ix(a)) - J * dJ[a].col(ix(b));
}

std::vector<MatrixXd> jacobian_slices(const Jet& jj, std::size_t n) {
  std::vector<MatrixXd> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(square(jj.grad.col(ix(i)), n));
  return out;
}

VectorXd nijenhuis_connection(const Christoffel& gamma, const Jet& jj, const MatrixXd& J, const VectorXd& x,
                              const VectorXd& y) {
  const VectorXd jx = J * x;
  const VectorXd jy = J * y;
  return covariant_derivative_endo(gamma, jj, jx) * y + J * (covariant_derivative_endo(gamma, jj, y) * x) -
         J * (covariant_derivative_endo(gamma, jj, x) * y) - covariant_derivative_endo(gamma, jj, jy) * x;
}

double hermitian_residual(const MatrixXd& g, const MatrixXd& J) { return max_abs(J.transpose() * g * J - g); }

double j_squared_residual(const MatrixXd& J) {
  return max_abs(J * J + MatrixXd::Identity(J.rows(), J.cols()));
}

KForm lifted_one_form(std::size_t total_dim, std::size_t index) {
  std::vector<double> c(total_dim, 0.0);
  c[index] = 1.0;
  return KForm::constant(total_dim, 1, std::move(c));
}

}  // namespace

KForm lift_form(const KForm& w, std::size_t total_dim, std::size_t offset) {
  const std::size_t n = w.dim();
  const std::size_t k = w.degree();
  if (offset + n > total_dim) throw Error("lifted form does not fit in the target chart");
  const MultiIndexSet target(total_dim, k);
  std::vector<std::size_t> position;
  for (const auto& idx : w.indices().all()) {
    std::vector<std::size_t> shifted(idx);
    for (std::size_t& i : shifted) i += offset;
    position.push_back(target.position(shifted));
  }
  return KForm(k, Field::make(total_dim, target.size(), [w, n, offset, position](auto x, auto out) {
                 const auto v = w.field().eval(x.subspan(offset, n));
                 for (auto& o : out) o = 0.0;
                 for (std::size_t c = 0; c < v.size(); ++c) out[position[c]] = v[c];
               }));
}

WarpedProduct build(const AlmostContactStructure& fiber, const ScalarField& beta0, const expr::Expr& warp_expr,
                    Interval t_bounds, const std::string& t_name,
                    const std::map<std::string, double, std::less<>>& params) {
  for (const std::string& v : warp_expr.free_variables()) {
    if (v == "t" || params.count(v) != 0) continue;
    if (fiber.chart.index_of(v) < fiber.chart.dim()) {
      throw WarpError("warp function must depend on t only, but uses fiber coordinate '" + v + "'");
    }
    throw WarpError("warp function uses unknown variable '" + v + "'");
  }
  const Chart line({"t"}, {t_bounds});
  const ScalarField p1 = ScalarField::from_expr(line, warp_expr, params);
  for (std::size_t k = 0; k < kWarpGrid; ++k) {
    const double t = t_bounds.lo + (t_bounds.hi - t_bounds.lo) * static_cast<double>(k) / (kWarpGrid - 1);
    double v = 0.0;
    try {
      v = p1.value(Point{{t}});
    } catch (const Error& e) {
      throw WarpError("warp function cannot be evaluated at t = " + format_real(t) + ": " + e.what());
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw WarpError("warp function must be positive on the chart, but p(" + format_real(t) +
                      ") = " + format_real(v));
    }
  }

  WarpedProduct wp{fiber, beta0, warp_expr, fiber.chart.prepend(t_name, t_bounds)};
  const std::size_t N = wp.chart.dim();
  const std::size_t n = fiber.chart.dim();

  wp.p = ScalarField(lift(p1.field(), N, 0));
  wp.dlnp = ScalarField(lift((partial_field(p1, 0) / p1).field(), N, 0));
  wp.beta0_lift = ScalarField(lift(beta0.field(), N, 1));
  wp.eta0_lift = lift_form(fiber.eta, N, 1);
  wp.eta_bar = lifted_one_form(N, 0);
  wp.xi_bar = VectorField::basis(N, 0);
  wp.beta = wp.beta0_lift / wp.p;
  wp.eta = wp.p * wp.eta0_lift;

  const ScalarField p = wp.p;
  const Field xi0 = fiber.xi.field();
  const Field phi = fiber.phi.field();
  const Field g = fiber.g.field();
  const Field eta0 = fiber.eta.field();

  wp.xi0_lift = VectorField(Field::make(N, N, [xi0, n](auto x, auto out) {
    const auto v = xi0.eval(x.subspan(1, n));
    out[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) out[1 + i] = v[i];
  }));
  wp.xi = VectorField(Field::make(N, N, [xi0, p, n](auto x, auto out) {
    const auto v = xi0.eval(x.subspan(1, n));
    const auto pv = p.eval(x);
    out[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) out[1 + i] = v[i] / pv;
  }));
  wp.phi_lift = EndomorphismField(Field::make(N, N * N, [phi, n, N](auto x, auto out) {
    const auto v = phi.eval(x.subspan(1, n));
    for (auto& o : out) o = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[(1 + i) * N + 1 + j] = v[i * n + j];
    }
  }));
  wp.g_lift = MetricField(Field::make(N, N * N, [g, n, N](auto x, auto out) {
    const auto v = g.eval(x.subspan(1, n));
    for (auto& o : out) o = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[(1 + i) * N + 1 + j] = v[i * n + j];
    }
  }));
  wp.G = MetricField(Field::make(N, N * N, [g, p, n, N](auto x, auto out) {
    const auto v = g.eval(x.subspan(1, n));
    const auto pv = p.eval(x);
    const auto p2 = pv * pv;
    for (auto& o : out) o = 0.0;
    out[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[(1 + i) * N + 1 + j] = p2 * v[i * n + j];
    }
  }));
  // J d_t = xi, J on fiber vectors: phi X - eta(X) d_t.
  wp.J = EndomorphismField(Field::make(N, N * N, [phi, xi0, eta0, p, n, N](auto x, auto out) {
    const auto fx = x.subspan(1, n);
    const auto ph = phi.eval(fx);
    const auto xv = xi0.eval(fx);
    const auto ev = eta0.eval(fx);
    const auto pv = p.eval(x);
    out[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) out[1 + j] = -pv * ev[j];
    for (std::size_t i = 0; i < n; ++i) {
      out[(1 + i) * N] = xv[i] / pv;
      for (std::size_t j = 0; j < n; ++j) out[(1 + i) * N + 1 + j] = ph[i * n + j];
    }
  }));
  return wp;
}

RescaledFiber fiber_structure(const WarpedProduct& wp, double t) {
  const Interval range = wp.chart.bounds()[0];
  if (!(t >= range.lo && t <= range.hi)) {
    throw ChartError("t = " + format_real(t) + " is outside [" + format_real(range.lo) + ", " +
                     format_real(range.hi) + "]");
  }
  std::vector<double> coords{t};
  for (double c : wp.fiber.chart.center()) coords.push_back(c);
  const double pt = wp.p.value(Point{coords});
  const std::size_t n = wp.fiber.chart.dim();
  const Field xi0 = wp.fiber.xi.field();

  RescaledFiber out{wp.fiber, (1.0 / pt) * wp.beta0};
  out.structure.eta = pt * wp.fiber.eta;
  out.structure.xi = VectorField(Field::make(n, n, [xi0, pt](auto x, auto o) {
    const auto v = xi0.eval(x);
    for (std::size_t i = 0; i < v.size(); ++i) o[i] = v[i] / pt;
  }));
  out.structure.g = scale(ScalarField::constant(n, pt * pt), wp.fiber.g);
  return out;
}

FrameSplit split(const WarpedProduct& wp, const VectorXd& x_bar, const Point& pt) {
  const std::size_t N = wp.dim();
  FrameSplit s;
  s.t_part = x_bar(0) * unit(N, 0);
  const VectorXd x = fiber_part(x_bar);
  s.eta_part = wp.eta.coefficients(pt).dot(x) * wp.xi.at(pt);
  s.x_d = x - s.eta_part;
  return s;
}

VectorXd apply_split(const WarpedProduct& wp, const FrameSplit& s, const Point& pt) {
  const VectorXd eta = wp.eta.coefficients(pt);
  return wp.phi_lift.at(pt) * s.x_d + s.t_part(0) * wp.xi.at(pt) - eta.dot(s.eta_part) * unit(wp.dim(), 0);
}

VerificationReport almost_hermitian_check(const WarpedProduct& wp, const std::vector<Point>& pts,
                                          double hermitian_tol) {
  ResidualTracker jsq;
  ResidualTracker compat;
  ResidualTracker blocks;
  for (const Point& pt : pts) {
    const MatrixXd J = wp.J.at(pt);
    const MatrixXd G = wp.G.at(pt);
    const double p = wp.p.value(pt);
    MatrixXd expected = p * p * wp.g_lift.at(pt);
    expected(0, 0) = 1.0;
    jsq.update(j_squared_residual(J), pt);
    compat.update(hermitian_residual(G, J), pt);
    blocks.update(max_abs(G - expected), pt);
  }
  VerificationReport r;
  r.add(jsq.record("almost_hermitian.j_squared", "J^2 = -Id", tol::kAlgebraic));
  r.add(compat.record("almost_hermitian.compatibility", "G(JX, JY) = G(X, Y)", hermitian_tol));
  r.add(blocks.record("almost_hermitian.metric_blocks", "G = dt^2 + p^2 g", tol::kAlgebraic));
  return r;
}

VectorXd nabla_j_formula(const WarpedProduct& wp, const Point& pt, const VectorXd& x_bar, const VectorXd& y_bar) {
  return nabla_j_terms(WarpFrame(wp, pt), x_bar, y_bar);
}

VectorXd nabla_j_correction(const WarpedProduct& wp, const Point& pt, const VectorXd& x_bar,
                            const VectorXd& y_bar) {
  return nabla_j_correction_terms(WarpFrame(wp, pt), x_bar, y_bar);
}

VerificationReport nabla_j_check(const WarpedProduct& wp, const std::vector<Point>& pts, double tolerance) {
  const std::size_t N = wp.dim();
  ResidualTracker t;
  ResidualTracker corrected;
  for (const Point& pt : pts) {
    const WarpFrame f(wp, pt);
    const Christoffel gamma = christoffel(wp.G, pt);
    const Jet jj = jet(wp.J.field(), pt);
    double worst = 0.0;
    double worst_corrected = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
      const MatrixXd nabla = covariant_derivative_endo(gamma, jj, unit(N, a));
      for (std::size_t b = 0; b < N; ++b) {
        const VectorXd misfit = nabla.col(ix(b)) - nabla_j_terms(f, unit(N, a), unit(N, b));
        worst = std::max(worst, max_abs(misfit));
        worst_corrected =
            std::max(worst_corrected, max_abs(misfit - nabla_j_correction_terms(f, unit(N, a), unit(N, b))));
      }
    }
    t.update(worst, pt);
    corrected.update(worst_corrected, pt);
  }
  VerificationReport r;
  CheckRecord rec = t.record(
      "nabla_j", "(nabla_Xbar J)Ybar = sum of the (X,Y), (X,xi_bar), (xi_bar,Y), (xi_bar,xi_bar) component formulas",
      tolerance);
  if (!rec.pass) {
    rec.note = "residual with the d ln p correction terms added: " + format_real(corrected.max());
  }
  r.add(std::move(rec));
  return r;
}

NijenhuisValue nijenhuis(const HermitianStructure& hs, const VectorField& x, const VectorField& y, const Point& pt) {
  const Christoffel gamma = christoffel(hs.g, pt);
  const Jet jj = jet(hs.J.field(), pt);
  const MatrixXd J = square(jj.value, hs.chart.dim());
  NijenhuisValue out;
  out.connection = nijenhuis_connection(gamma, jj, J, x.at(pt), y.at(pt));
  const VectorField jx = apply(hs.J, x);
  const VectorField jy = apply(hs.J, y);
  out.bracket = J * J * lie_bracket(x, y, pt) + lie_bracket(jx, jy, pt) - J * lie_bracket(jx, y, pt) -
                J * lie_bracket(x, jy, pt);
  return out;
}

NijenhuisValue nijenhuis(const WarpedProduct& wp, const VectorField& x, const VectorField& y, const Point& pt) {
  return nijenhuis(wp.hermitian(), x, y, pt);
}

double nijenhuis_max(const EndomorphismField& J, const Point& pt) {
  const std::size_t n = J.dim();
  const Jet jj = jet(J.field(), pt);
  const MatrixXd Jm = square(jj.value, n);
  const auto dJ = jacobian_slices(jj, n);
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) worst = std::max(worst, max_abs(nijenhuis_basis(Jm, dJ, a, b)));
  }
  return worst;
}

VerificationReport nijenhuis_check(const HermitianStructure& hs, const std::vector<Point>& pts,
                                   const std::string& prefix, double agree_tol, double vanish_tol) {
  const std::size_t n = hs.chart.dim();
  ResidualTracker agree;
  ResidualTracker vanish;
  for (const Point& pt : pts) {
    const Christoffel gamma = christoffel(hs.g, pt);
    const Jet jj = jet(hs.J.field(), pt);
    const MatrixXd J = square(jj.value, n);
    const auto dJ = jacobian_slices(jj, n);
    double worst_agree = 0.0;
    double worst_value = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const VectorXd via_bracket = nijenhuis_basis(J, dJ, a, b);
        const VectorXd via_connection = nijenhuis_connection(gamma, jj, J, unit(n, a), unit(n, b));
        worst_agree = std::max(worst_agree, max_abs(via_bracket - via_connection));
        worst_value = std::max({worst_value, max_abs(via_bracket), max_abs(via_connection)});
      }
    }
    agree.update(worst_agree, pt);
    vanish.update(worst_value, pt);
  }
  VerificationReport r;
  r.add(agree.record(prefix + ".agreement", "connection and bracket forms of N_J agree", agree_tol));
  r.add(vanish.record(prefix + ".vanishing", "N_J = 0", vanish_tol));
  return r;
}

KForm kahler_form_G(const WarpedProduct& wp) { return fundamental_form(wp.G, wp.J); }

KForm kahler_form_decomposition(const WarpedProduct& wp) {
  const KForm omega_g = lift_form(fundamental_form(wp.fiber.g, wp.fiber.phi), wp.dim(), 1);
  return (wp.p * wp.p) * omega_g + wedge(wp.eta, wp.eta_bar);
}

VerificationReport kahler_form_check(const WarpedProduct& wp, const std::vector<Point>& pts, double tolerance) {
  const KForm misfit = kahler_form_G(wp) - kahler_form_decomposition(wp);
  ResidualTracker decomposition;
  ResidualTracker antisym;
  for (const Point& pt : pts) {
    decomposition.update(max_abs_coefficient(misfit, pt), pt);
    const MatrixXd gj = wp.G.at(pt) * wp.J.at(pt);
    antisym.update(max_abs(gj + gj.transpose()), pt);
  }
  VerificationReport r;
  r.add(decomposition.record("kahler_form_g.decomposition", "Omega_G = p^2 Omega_g + eta ^ eta_bar", tolerance));
  r.add(antisym.record("kahler_form_g.antisymmetry", "G(X, JY) = -G(Y, JX)", tolerance));
  return r;
}

KForm lee_form(const WarpedProduct& wp, double kappa) {
  return (2.0 * wp.dlnp) * wp.eta_bar + kappa * (wp.beta0_lift * wp.eta0_lift);
}

VerificationReport lee_form_check(const WarpedProduct& wp, double kappa, const std::vector<Point>& pts,
                                  double tolerance) {
  const KForm omega = kahler_form_G(wp);
  const KForm misfit = exterior_derivative(omega) - wedge(lee_form(wp, kappa), omega);
  ResidualTracker t;
  for (const Point& pt : pts) t.update(max_abs_coefficient(misfit, pt), pt);
  VerificationReport r;
  CheckRecord rec = t.record("lee_form", "d Omega_G = (2 d ln p + kappa beta0 eta0) ^ Omega_G", tolerance);
  rec.note = "omega = 2 d ln p + " + format_real(kappa) + " beta0 eta0";
  r.add(std::move(rec));
  return r;
}

VerificationReport kahler_check(const HermitianStructure& hs, const std::vector<Point>& pts, double closed_tol,
                                double hermitian_tol) {
  // On a surface the Kahler form is top degree and closed for free.
  const KForm omega = fundamental_form(hs.g, hs.J);
  std::optional<KForm> d_omega;
  if (omega.degree() < omega.dim()) d_omega = exterior_derivative(omega);
  ResidualTracker jsq;
  ResidualTracker compat;
  ResidualTracker closed;
  for (const Point& pt : pts) {
    const MatrixXd J = hs.J.at(pt);
    jsq.update(j_squared_residual(J), pt);
    compat.update(hermitian_residual(hs.g.at(pt), J), pt);
    closed.update(d_omega ? max_abs_coefficient(*d_omega, pt) : 0.0, pt);
  }
  VerificationReport r;
  r.add(jsq.record("kahler.j_squared", "J^2 = -Id", tol::kAlgebraic));
  r.add(compat.record("kahler.compatibility", "g(JX, JY) = g(X, Y)", hermitian_tol));
  r.add(closed.record("kahler.d_omega", "d Omega = 0", closed_tol));
  r.append(nijenhuis_check(hs, pts, "kahler.nijenhuis"));
  return r;
}

ConformalKahler conformal_kahler(const WarpedProduct& wp, double kappa, const Point& basepoint,
                                 const std::vector<Point>& pts, const PotentialOptions& options) {
  const KForm w = wp.beta0_lift * wp.eta0_lift;
  const KForm dw = exterior_derivative(w);
  ResidualTracker closed;
  for (const Point& pt : pts) closed.update(max_abs_coefficient(dw, pt), pt);

  ConformalKahler out{false, {}, {}, wp.hermitian(), {}};
  out.report.add(closed.record("conformal_kahler.exactness", "d(beta eta) = 0", options.closed_tol,
                               CheckRole::Hypothesis));
  ScalarField potential;
  try {
    potential = one_form_potential(w, basepoint, pts, options);
  } catch (const ClosednessError& e) {
    out.exact = false;
    out.report.checks.back().note = "beta eta is not closed: the structure is only locally conformal Kahler";
    return out;
  }
  out.exact = true;
  out.u = (-0.5 * kappa) * potential;
  out.metric = scale(exp(2.0 * (out.u - log(wp.p))), wp.G);
  out.structure = HermitianStructure{wp.chart, out.metric, wp.J};

  const KForm d_omega = exterior_derivative(fundamental_form(out.metric, wp.J));
  ResidualTracker closed_omega;
  ResidualTracker compat;
  ResidualTracker integrable;
  for (const Point& pt : pts) {
    closed_omega.update(max_abs_coefficient(d_omega, pt), pt);
    compat.update(hermitian_residual(out.metric.at(pt), wp.J.at(pt)), pt);
    integrable.update(nijenhuis_max(wp.J, pt), pt);
  }
  out.report.add(closed_omega.record("conformal_kahler.d_omega", "d Omega_Gbar = 0 for Gbar = e^{2(u - ln p)} G",
                                     tol::kConformal));
  out.report.add(compat.record("conformal_kahler.compatibility", "Gbar(JX, JY) = Gbar(X, Y)", tol::kIdentity));
  out.report.add(integrable.record("conformal_kahler.nijenhuis", "N_J = 0", tol::kQuadrature));
  return out;
}

VerificationReport converse_almost_kenmotsu(const WarpedProduct& wp, const ScalarField& f,
                                            const std::vector<Point>& pts) {
  const std::size_t N = wp.dim();
  const KForm omega_g = lift_form(fundamental_form(wp.fiber.g, wp.fiber.phi), N, 1);
  const KForm d_eta0 = exterior_derivative(wp.eta0_lift);
  const KForm d_omega_g = exterior_derivative(omega_g);
  const KForm eta_omega = wedge(wp.eta0_lift, omega_g);
  const KForm master = exterior_derivative(f * kahler_form_G(wp));
  ResidualTracker hyp_dp;
  ResidualTracker hyp_df;
  ResidualTracker closed_eta;
  ResidualTracker lee;
  ResidualTracker closed_master;
  for (const Point& pt : pts) {
    hyp_dp.update(std::abs(wp.dlnp.value(pt) * wp.p.value(pt)), pt);
    const DualScalar fv = f.dual(pt);
    VectorXd df(ix(N));
    for (std::size_t i = 0; i < N; ++i) df(ix(i)) = fv.d(i);
    const VectorXd eta0 = wp.eta0_lift.coefficients(pt);
    const double xi0_f = df.dot(wp.xi0_lift.at(pt));
    hyp_df.update(max_abs(df - xi0_f * eta0), pt);
    closed_eta.update(max_abs_coefficient(d_eta0, pt), pt);
    const double xi0_ln_f = xi0_f / fv.value();
    lee.update(max_abs(d_omega_g.coefficients(pt) + xi0_ln_f * eta_omega.coefficients(pt)), pt);
    closed_master.update(max_abs_coefficient(master, pt), pt);
  }
  VerificationReport r;
  r.add(hyp_dp.record("converse_almost_kenmotsu.hyp_dp", "dp = 0", tol::kIdentity, CheckRole::Hypothesis));
  r.add(hyp_df.record("converse_almost_kenmotsu.hyp_df", "df = xi0(f) eta0", tol::kIdentity, CheckRole::Hypothesis));
  r.add(closed_master.record("converse_almost_kenmotsu.d_f_omega", "d(f Omega_G) = 0", tol::kConformal));
  r.add(closed_eta.record("converse_almost_kenmotsu.d_eta0", "d eta0 = 0", tol::kQuadrature));
  r.add(lee.record("converse_almost_kenmotsu.d_omega", "d Omega_g = -xi0(ln f) eta0 ^ Omega_g", tol::kQuadrature));
  return r;
}

VerificationReport converse_contact(const WarpedProduct& wp, const ScalarField& f, double c,
                                    const std::vector<Point>& pts) {
  const std::size_t N = wp.dim();
  const KForm omega_g = lift_form(fundamental_form(wp.fiber.g, wp.fiber.phi), N, 1);
  const KForm d_omega_g = exterior_derivative(omega_g);
  const KForm contact = omega_g - c * exterior_derivative(wp.eta0_lift);
  ResidualTracker hyp_df;
  ResidualTracker closed;
  ResidualTracker calibrated;
  ResidualTracker scalar;
  for (const Point& pt : pts) {
    const DualScalar fv = f.dual(pt);
    double fiber_grad = 0.0;
    for (std::size_t i = 1; i < N; ++i) fiber_grad = std::max(fiber_grad, std::abs(fv.d(i)));
    hyp_df.update(fiber_grad, pt);
    closed.update(max_abs_coefficient(d_omega_g, pt), pt);
    calibrated.update(max_abs_coefficient(contact, pt), pt);
    const DualScalar pv = wp.p.dual(pt);
    const double p = pv.value();
    scalar.update(std::abs(p * fv.value() - p * p * fv.d(0) - 2.0 * fv.value() * p * pv.d(0)), pt);
  }
  VerificationReport r;
  r.add(hyp_df.record("converse_contact.hyp_df", "df = (df/dt) eta_bar", tol::kIdentity, CheckRole::Hypothesis));
  r.add(scalar.record("converse_contact.ode", "p f = p^2 df/dt + 2 f p dp/dt", tol::kIdentity));
  r.add(closed.record("converse_contact.d_omega", "d Omega_g = 0", tol::kIdentity));
  r.add(calibrated.record("converse_contact.contact", "Omega_g = c d eta0", tol::kIdentity));
  return r;
}

}  // namespace wpk
