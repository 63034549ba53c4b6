#pragma once

// Independent reference computations used as test oracles. Everything here
// works on plain double evaluations with central differences or brute force.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wpk/calculus.hpp"

namespace oracle {

inline wpk::Point shifted(const wpk::Point& pt, std::size_t i, double h) {
  wpk::Point q = pt;
  q.coords[i] += h;
  return q;
}

// d_i g at pt by central differences.
inline Eigen::MatrixXd fd_metric_partial(const wpk::MetricField& g, const wpk::Point& pt, std::size_t i,
                                         double h = 1e-5) {
  return (g.at(shifted(pt, i, h)) - g.at(shifted(pt, i, -h))) / (2.0 * h);
}

// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)
inline wpk::Christoffel fd_christoffel(const wpk::MetricField& g, const wpk::Point& pt, double h = 1e-5) {
  const std::size_t n = pt.dim();
  std::vector<Eigen::MatrixXd> dg;
  for (std::size_t i = 0; i < n; ++i) dg.push_back(fd_metric_partial(g, pt, i, h));
  const Eigen::MatrixXd inv = g.at(pt).inverse();
  wpk::Christoffel out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          const auto L = static_cast<Eigen::Index>(l);
          const auto I = static_cast<Eigen::Index>(i);
          const auto J = static_cast<Eigen::Index>(j);
          s += inv(static_cast<Eigen::Index>(k), L) * (dg[i](L, J) + dg[j](L, I) - dg[l](I, J));
        }
        out(k, i, j) = 0.5 * s;
      }
  return out;
}

// Coefficients of dw on increasing multi-indices: sum_a (-1)^a d_{i_a} w_{I - i_a}.
inline Eigen::VectorXd fd_exterior_derivative(const wpk::KForm& w, const wpk::Point& pt, double h = 1e-5) {
  const std::size_t n = w.dim();
  const std::size_t k = w.degree();
  const wpk::MultiIndexSet out_idx(n, k + 1);
  std::vector<Eigen::VectorXd> dw;
  for (std::size_t i = 0; i < n; ++i) {
    dw.push_back((w.coefficients(shifted(pt, i, h)) - w.coefficients(shifted(pt, i, -h))) / (2.0 * h));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_idx.size()));
  for (std::size_t c = 0; c < out_idx.size(); ++c) {
    const auto& I = out_idx[c];
    for (std::size_t a = 0; a <= k; ++a) {
      std::vector<std::size_t> rest;
      for (std::size_t b = 0; b <= k; ++b)
        if (b != a) rest.push_back(I[b]);
      const double sign = a % 2 == 0 ? 1.0 : -1.0;
      out(static_cast<Eigen::Index>(c)) +=
          sign * dw[I[a]](static_cast<Eigen::Index>(w.indices().position(rest)));
    }
  }
  return out;
}

inline double permutation_sign(const std::vector<std::size_t>& p) {
  double s = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

inline double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

// (a ^ b)(v_1..v_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) a(v_sigma..) b(v_sigma..)
inline double brute_wedge(const wpk::KForm& a, const wpk::KForm& b, const wpk::Point& pt,
                          const std::vector<Eigen::VectorXd>& v) {
  const std::size_t p = a.degree();
  const std::size_t q = b.degree();
  std::vector<std::size_t> perm(p + q);
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0.0;
  do {
    std::vector<Eigen::VectorXd> va;
    std::vector<Eigen::VectorXd> vb;
    for (std::size_t i = 0; i < p; ++i) va.push_back(v[perm[i]]);
    for (std::size_t i = p; i < p + q; ++i) vb.push_back(v[perm[i]]);
    sum += permutation_sign(perm) * a.apply(pt, va) * b.apply(pt, vb);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / (factorial(p) * factorial(q));
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace oracle
