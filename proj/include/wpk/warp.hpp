#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpk/contact.hpp"
#include "wpk/expr.hpp"

namespace wpk {

// (g, J) on an even-dimensional chart.
struct HermitianStructure {
  Chart chart;
  MetricField g;
  EndomorphismField J;
};

// M_bar = R x_p M with G = dt^2 + p(t)^2 g. Coordinate 0 of `chart` is the new
// t; fiber coordinates follow. Fields suffixed _lift are the fiber tensors
// pulled back with t-independent components.
struct WarpedProduct {
  AlmostContactStructure fiber;
  ScalarField beta0;  // on the fiber chart
  expr::Expr warp_expr;
  Chart chart;

  ScalarField p{};
  ScalarField dlnp{};  // t-derivative of ln p
  MetricField G{};
  KForm eta_bar{};
  VectorField xi_bar{};
  ScalarField beta{};  // beta0 / p
  KForm eta{};         // p eta0
  VectorField xi{};    // xi0 / p
  EndomorphismField J{};

  ScalarField beta0_lift{};
  KForm eta0_lift{};
  VectorField xi0_lift{};
  EndomorphismField phi_lift{};  // fiber block only, zero in the t row and column
  MetricField g_lift{};          // fiber block only

  std::size_t dim() const { return chart.dim(); }
  HermitianStructure hermitian() const { return {chart, G, J}; }
};

class WarpError : public Error {
 public:
  using Error::Error;
};

// The warp expression is written in the variable `t`, which is bound to the
// new coordinate named `t_name`. Other free variables must be in `params`.
WarpedProduct build(const AlmostContactStructure& fiber, const ScalarField& beta0, const expr::Expr& warp_expr,
                    Interval t_bounds, const std::string& t_name = "t",
                    const std::map<std::string, double, std::less<>>& params = {});

struct RescaledFiber {
  AlmostContactStructure structure;
  ScalarField beta;
};
// (phi, p(t) eta0, xi0 / p(t), p(t)^2 g) on the fiber chart, with beta0 / p(t).
RescaledFiber fiber_structure(const WarpedProduct& wp, double t);

struct FrameSplit {
  Eigen::VectorXd x_d;
  Eigen::VectorXd eta_part;
  Eigen::VectorXd t_part;
};
FrameSplit split(const WarpedProduct& wp, const Eigen::VectorXd& x_bar, const Point& pt);
// phi(X_D) + eta_bar(X_bar) xi - eta(X) xi_bar
Eigen::VectorXd apply_split(const WarpedProduct& wp, const FrameSplit& s, const Point& pt);

// J^2 = -Id, G(JX, JY) = G(X, Y) and the block structure of G.
VerificationReport almost_hermitian_check(const WarpedProduct& wp, const std::vector<Point>& pts,
                                          double hermitian_tol = tol::kHermitian);

// Sum of the four component formulas for (nabla_X J)Y from the split of X, Y.
Eigen::VectorXd nabla_j_formula(const WarpedProduct& wp, const Point& pt, const Eigen::VectorXd& x_bar,
                                const Eigen::VectorXd& y_bar);
// Terms proportional to d ln p that the component formulas leave out:
// l (G(X,Y) xi - G(X, phi Y) xi_bar - (eta_bar(Ybar) eta(X) + eta_bar(Xbar) eta(Y)) xi_bar
//    - eta_bar(Xbar) eta_bar(Ybar) xi), with l = d ln p / dt.
Eigen::VectorXd nabla_j_correction(const WarpedProduct& wp, const Point& pt, const Eigen::VectorXd& x_bar,
                                   const Eigen::VectorXd& y_bar);
VerificationReport nabla_j_check(const WarpedProduct& wp, const std::vector<Point>& pts,
                                 double tolerance = tol::kQuadrature);

struct NijenhuisValue {
  Eigen::VectorXd connection;  // from the Levi-Civita connection of g
  Eigen::VectorXd bracket;     // J^2[X,Y] + [JX,JY] - J[JX,Y] - J[X,JY]
};
NijenhuisValue nijenhuis(const HermitianStructure& hs, const VectorField& x, const VectorField& y, const Point& pt);
NijenhuisValue nijenhuis(const WarpedProduct& wp, const VectorField& x, const VectorField& y, const Point& pt);

// Both formulas over all coordinate-basis pairs: their agreement and max |N_J|.
VerificationReport nijenhuis_check(const HermitianStructure& hs, const std::vector<Point>& pts,
                                   const std::string& prefix = "nijenhuis", double agree_tol = tol::kIdentity,
                                   double vanish_tol = tol::kQuadrature);

// Max |N_J| over coordinate-basis pairs by the connection-free formula.
double nijenhuis_max(const EndomorphismField& J, const Point& pt);

KForm kahler_form_G(const WarpedProduct& wp);
// p^2 Omega_g + eta ^ eta_bar
KForm kahler_form_decomposition(const WarpedProduct& wp);
VerificationReport kahler_form_check(const WarpedProduct& wp, const std::vector<Point>& pts,
                                     double tolerance = tol::kHermitian);

// 2 d ln p + kappa beta0 eta0
KForm lee_form(const WarpedProduct& wp, double kappa);
VerificationReport lee_form_check(const WarpedProduct& wp, double kappa, const std::vector<Point>& pts,
                                  double tolerance = tol::kQuadrature);

// Closedness of Omega plus Hermitian and integrability checks of (g, J).
VerificationReport kahler_check(const HermitianStructure& hs, const std::vector<Point>& pts,
                                double closed_tol = tol::kConformal, double hermitian_tol = tol::kIdentity);

struct ConformalKahler {
  bool exact = false;  // false: only locally conformal Kahler at the tolerance used
  ScalarField u;
  MetricField metric;  // e^{2(u - ln p)} G
  HermitianStructure structure;
  VerificationReport report;
};
ConformalKahler conformal_kahler(const WarpedProduct& wp, double kappa, const Point& basepoint,
                                 const std::vector<Point>& pts, const PotentialOptions& options = {});

VerificationReport converse_almost_kenmotsu(const WarpedProduct& wp, const ScalarField& f,
                                            const std::vector<Point>& pts);

VerificationReport converse_contact(const WarpedProduct& wp, const ScalarField& f, double c,
                                    const std::vector<Point>& pts);

// Pull a k-form on the fiber chart back to the total chart.
KForm lift_form(const KForm& w, std::size_t total_dim, std::size_t offset);

}  // namespace wpk
