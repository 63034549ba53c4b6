#pragma once

#include <vector>

#include "wpk/calculus.hpp"
#include "wpk/report.hpp"

namespace wpk {

// Default residual tolerances, matched to the error source of each check.
namespace tol {
inline constexpr double kAlgebraic = 1e-12;   // pure linear algebra on exact components
inline constexpr double kHermitian = 1e-10;   // metric compatibility of J
inline constexpr double kIdentity = 1e-9;     // dual-number derivative paths
inline constexpr double kQuadrature = 1e-8;   // anything touching a line-integral potential
inline constexpr double kConformal = 1e-7;    // closedness of the rescaled fundamental form
inline constexpr double kCalibrationGap = 0.1;
}  // namespace tol

class StructureError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

// (phi, xi, eta, g) on an odd-dimensional chart.
struct AlmostContactStructure {
  Chart chart;
  EndomorphismField phi;
  VectorField xi;
  KForm eta;
  MetricField g;
};

struct TransSasakianCoeffs {
  ScalarField alpha;
  ScalarField beta;
};

// Factor relating d(Omega) to beta eta ^ Omega under the shuffle wedge.
struct ConventionFactor {
  double kappa = 0.0;
  double residual = 0.0;        // max residual of the winning candidate
  double losing_residual = 0.0;  // max residual of the other candidate
};

// Omega(X, Y) = g(X, J Y) as a two-form.
KForm fundamental_form(const MetricField& g, const EndomorphismField& J);

KForm kahler_form(const AlmostContactStructure& acs);

// max |g(e_a, phi e_b) + g(e_b, phi e_a)|
double kahler_form_antisymmetry(const AlmostContactStructure& acs, const Point& pt);

VerificationReport check_axioms(const AlmostContactStructure& acs, const std::vector<Point>& pts,
                                double tolerance = tol::kIdentity);

// |(nabla_X phi)Y - alpha(g(X,Y) xi - eta(Y) X) - beta(g(phi X, Y) xi - eta(Y) phi X)|
VerificationReport trans_sasakian_residual(const AlmostContactStructure& acs, const TransSasakianCoeffs& coeffs,
                                           const std::vector<Point>& pts, double tolerance = tol::kIdentity);

// nabla phi, nabla xi, nabla eta and closedness of eta for a beta-Kenmotsu structure.
VerificationReport kenmotsu_residuals(const AlmostContactStructure& acs, const ScalarField& beta,
                                      const std::vector<Point>& pts, double tolerance = tol::kQuadrature);

// max |d(Omega) - k beta eta ^ Omega| for k = 1 and k = 2, and max |beta eta ^ Omega|.
struct KappaResiduals {
  double one = 0.0;
  double two = 0.0;
  double scale = 0.0;
  std::vector<double> witness_one;
  std::vector<double> witness_two;
};
KappaResiduals kappa_residuals(const AlmostContactStructure& acs, const ScalarField& beta,
                               const std::vector<Point>& pts);

// Chooses kappa in {1, 2} minimising max |d(Omega) - kappa beta eta ^ Omega|.
ConventionFactor calibrate_kappa(const AlmostContactStructure& acs, const ScalarField& beta,
                                 const std::vector<Point>& pts, double tolerance = tol::kQuadrature);

VerificationReport almost_kenmotsu_check(const AlmostContactStructure& acs, const ScalarField& beta, double kappa,
                                         const std::vector<Point>& pts, double tolerance = tol::kQuadrature);

// Least-squares constant alpha in the trans-Sasakian identity with beta given.
double fit_trans_sasakian_alpha(const AlmostContactStructure& acs, const ScalarField& beta,
                                const std::vector<Point>& pts);

// Least-squares constant c with Omega = c d(eta); residual is the max misfit.
struct ContactConstant {
  double c = 0.0;
  double residual = 0.0;
};
ContactConstant calibrate_contact_constant(const AlmostContactStructure& acs, const std::vector<Point>& pts);

}  // namespace wpk
