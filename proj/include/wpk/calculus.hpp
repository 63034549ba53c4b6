#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "wpk/chart.hpp"

namespace wpk {

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class ClosednessError : public Error {
 public:
  ClosednessError(double residual, std::vector<double> witness);
  double residual() const { return residual_; }
  const std::vector<double>& witness() const { return witness_; }

 private:
  double residual_;
  std::vector<double> witness_;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Connection coefficients of the Levi-Civita connection at one point.
class Christoffel {
 public:
  explicit Christoffel(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  // Gamma^k_{ij}
  double operator()(std::size_t k, std::size_t i, std::size_t j) const { return data_[(k * dim_ + i) * dim_ + j]; }
  double& operator()(std::size_t k, std::size_t i, std::size_t j) { return data_[(k * dim_ + i) * dim_ + j]; }

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

// Metric values and first derivatives at a point, with its inverse.
struct MetricJet {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inverse;
  std::vector<Eigen::MatrixXd> dg;  // dg[k](i, j) = d_k g_ij
};

// Throws SingularMetricError unless g is symmetric positive definite at pt.
MetricJet metric_jet(const MetricField& g, const Point& pt);

Christoffel christoffel(const MetricField& g, const Point& pt);
Christoffel christoffel(const MetricJet& mj);

// max_{i,j,k} |d_k g_ij - Gamma^l_{ki} g_lj - Gamma^l_{kj} g_il|
double metric_compatibility_residual(const MetricField& g, const Point& pt);

// (nabla_X Y)^k = X^i d_i Y^k + X^i Y^j Gamma^k_{ij}
Eigen::VectorXd covariant_derivative_vector(const MetricField& g, const VectorField& X, const VectorField& Y,
                                            const Point& pt);
Eigen::VectorXd covariant_derivative_vector(const Christoffel& gamma, const Eigen::VectorXd& X, const Jet& Y);

// (nabla_X J)^k_j = X^i (d_i J^k_j + Gamma^k_{il} J^l_j - Gamma^l_{ij} J^k_l)
Eigen::MatrixXd covariant_derivative_endo(const MetricField& g, const EndomorphismField& J, const VectorField& X,
                                          const Point& pt);
Eigen::MatrixXd covariant_derivative_endo(const Christoffel& gamma, const Jet& J, const Eigen::VectorXd& X);

// (nabla_X w)_j = X^i (d_i w_j - Gamma^l_{ij} w_l)
Eigen::VectorXd covariant_derivative_oneform(const MetricField& g, const KForm& w, const VectorField& X,
                                             const Point& pt);
Eigen::VectorXd covariant_derivative_oneform(const Christoffel& gamma, const Jet& w, const Eigen::VectorXd& X);

// [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k
Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const Point& pt);

// Shuffle (determinant) convention without factorial normalisation.
KForm wedge(const KForm& a, const KForm& b);

KForm exterior_derivative(const KForm& w);

KForm operator+(const KForm& a, const KForm& b);
KForm operator-(const KForm& a, const KForm& b);
KForm operator*(const ScalarField& f, const KForm& w);
KForm operator*(double s, const KForm& w);

// Max |coefficient| of a form at a point.
double max_abs_coefficient(const KForm& w, const Point& pt);

// Straight-line potential u(x) = int_0^1 w(gamma(s)) . gamma'(s) ds from the
// basepoint, by composite 4-point Gauss-Legendre on 64 panels, doubling the
// panel count until successive estimates differ by less than 1e-12.
// `check_points` are used for the closedness pre-check |dw| <= closed_tol.
struct PotentialOptions {
  double closed_tol = 1e-9;
  std::size_t initial_panels = 64;
  std::size_t max_panels = 1 << 14;
  double convergence = 1e-12;
};
ScalarField one_form_potential(const KForm& w, const Point& basepoint, const std::vector<Point>& check_points,
                               const PotentialOptions& options = {});

// Quadrature behind one_form_potential, exposed for direct testing.
template <class S>
S line_integral(const KForm& w, std::span<const double> base, std::span<const S> x, const PotentialOptions& options);

}  // namespace wpk
