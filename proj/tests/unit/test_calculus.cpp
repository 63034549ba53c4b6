#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wpk/calculus.hpp"
#include "wpk/contact.hpp"
#include "wpk/models.hpp"

using namespace wpk;

namespace {

MetricField diagonal_metric(const Chart& c, const std::vector<std::string>& entries) {
  std::vector<ScalarField> d;
  for (const auto& e : entries) d.push_back(ScalarField::from_expr(c, expr::parse(e)));
  const std::size_t n = d.size();
  return MetricField(Field::make(n, n * n, [d, n](auto x, auto out) {
    for (auto& o : out) o = 0.0;
    for (std::size_t i = 0; i < n; ++i) out[i * n + i] = d[i].eval(x);
  }));
}

double christoffel_gap(const Christoffel& a, const Christoffel& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k)
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(k, i, j) - b(k, i, j)));
  return m;
}

// Random constant-coefficient k-form on R^n.
KForm random_form(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(binomial(n, k));
  for (auto& v : c) v = u(rng);
  return KForm::constant(n, k, c);
}

}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("flat metric has vanishing connection") {
    const MetricField g = MetricField::constant(Eigen::MatrixXd::Identity(3, 3));
    const Christoffel G = christoffel(g, Point{{0.1, 0.2, 0.3}});
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(G(k, i, j) == 0.0);
  }

  TEST_CASE("exponential warp: closed-form symbols and finite-difference oracle") {
    const Chart c({"t", "x"}, {{-1, 1}, {-1, 1}});
    const MetricField g = diagonal_metric(c, {"1", "exp(2*t)"});
    const Point p{{0.3, -0.2}};
    const Christoffel G = christoffel(g, p);
    CHECK(G(0, 1, 1) == doctest::Approx(-std::exp(0.6)).epsilon(1e-14));
    CHECK(G(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(G(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(G(0, 0, 0) == 0.0);
    CHECK(G(1, 1, 1) == 0.0);
    CHECK(christoffel_gap(G, oracle::fd_christoffel(g, p)) <= 1e-8);
  }

  TEST_CASE("polar metric symbols") {
    const Chart c({"r", "th"}, {{0.5, 3}, {-1, 1}});
    const MetricField g = diagonal_metric(c, {"1", "r^2"});
    const Point p{{2.0, 0.1}};
    const Christoffel G = christoffel(g, p);
    CHECK(G(0, 1, 1) == doctest::Approx(-2.0));
    CHECK(G(1, 0, 1) == doctest::Approx(0.5));
    CHECK(christoffel_gap(G, oracle::fd_christoffel(g, p)) <= 1e-8);
  }

  TEST_CASE("connection of a non-diagonal metric matches the oracle and is metric compatible") {
    const KenmotsuModel m = kenmotsu_cosh();
    const AlmostContactStructure s = sasakian_r3();
    for (const auto& pt : sample_points(s.chart, 10, 3)) {
      CHECK(christoffel_gap(christoffel(s.g, pt), oracle::fd_christoffel(s.g, pt)) <= 1e-8);
      CHECK(metric_compatibility_residual(s.g, pt) <= 1e-12);
    }
    for (const auto& pt : sample_points(m.acs.chart, 10, 3)) {
      CHECK(christoffel_gap(christoffel(m.acs.g, pt), oracle::fd_christoffel(m.acs.g, pt)) <= 1e-8);
    }
  }

  TEST_CASE("singular metrics are rejected") {
    const MetricField g = MetricField::constant(Eigen::Vector2d(1.0, 0.0).asDiagonal());
    CHECK_THROWS_AS((void)christoffel(g, Point{{0.0, 0.0}}), SingularMetricError);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, 0, 1;
    CHECK_THROWS_AS((void)christoffel(MetricField::constant(asym), Point{{0.0, 0.0}}), SingularMetricError);
  }

  TEST_CASE("flat covariant derivatives of constant fields vanish") {
    const MetricField g = MetricField::constant(Eigen::MatrixXd::Identity(3, 3));
    const Point p{{0.1, 0.2, 0.3}};
    const VectorField X = VectorField::constant({1, 2, 3});
    const VectorField Y = VectorField::constant({-1, 0, 4});
    CHECK(oracle::max_abs(covariant_derivative_vector(g, X, Y, p)) == 0.0);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
    J(1, 0) = 1;
    J(0, 1) = -1;
    CHECK(oracle::max_abs(covariant_derivative_endo(g, EndomorphismField::constant(J), X, p)) == 0.0);
    const KForm dx = KForm::constant(3, 1, {1, 0, 0});
    CHECK(oracle::max_abs(covariant_derivative_oneform(g, dx, X, p)) == 0.0);
  }

  TEST_CASE("Kenmotsu model: nabla xi and nabla phi along basis directions") {
    const KenmotsuModel m = kenmotsu_example(1.0);
    const auto& a = m.acs;
    for (const auto& pt : sample_points(a.chart, 20, 11)) {
      const double beta = m.beta0.value(pt);
      const Eigen::MatrixXd g = a.g.at(pt);
      const Eigen::MatrixXd phi = a.phi.at(pt);
      const Eigen::VectorXd xi = a.xi.at(pt);
      const Eigen::VectorXd eta = a.eta.coefficients(pt);
      for (std::size_t d = 0; d < 3; ++d) {
        const VectorField X = VectorField::basis(3, d);
        const Eigen::VectorXd x = X.at(pt);
        const Eigen::VectorXd lhs = covariant_derivative_vector(a.g, X, a.xi, pt);
        CHECK(oracle::max_abs(lhs - beta * (x - eta.dot(x) * xi)) <= 1e-12);
        const Eigen::MatrixXd nphi = covariant_derivative_endo(a.g, a.phi, X, pt);
        const Eigen::RowVectorXd gphix = (g * (phi * x)).transpose();
        const Eigen::MatrixXd expected = beta * (xi * gphix - (phi * x) * eta.transpose());
        CHECK(oracle::max_abs(nphi - expected) <= 1e-9);
      }
      CHECK(oracle::max_abs(covariant_derivative_endo(a.g, a.phi, a.xi, pt)) <= 1e-12);
    }
  }

  TEST_CASE("lie bracket of coordinate-dependent fields") {
    // X = x d_y, Y = d_x: [X, Y] = -d_y
    const VectorField X(Field::make(2, 2, [](auto x, auto out) {
      out[0] = 0.0;
      out[1] = x[0];
    }));
    const VectorField Y = VectorField::basis(2, 0);
    const Eigen::VectorXd b = lie_bracket(X, Y, Point{{0.4, 0.1}});
    CHECK(b(0) == 0.0);
    CHECK(b(1) == -1.0);
  }

  TEST_CASE("wedge convention anchors") {
    const KForm dt = KForm::constant(3, 1, {1, 0, 0});
    const KForm dx = KForm::constant(3, 1, {0, 1, 0});
    const KForm dy = KForm::constant(3, 1, {0, 0, 1});
    const Point p{{0, 0, 0}};
    const Eigen::VectorXd e0 = Eigen::Vector3d(1, 0, 0);
    const Eigen::VectorXd e1 = Eigen::Vector3d(0, 1, 0);
    const Eigen::VectorXd e2 = Eigen::Vector3d(0, 0, 1);
    const std::vector<Eigen::VectorXd> xy{e1, e2};
    CHECK(wedge(dx, dy).apply(p, xy) == 1.0);
    CHECK(max_abs_coefficient(wedge(dx, dx), p) == 0.0);
    const std::vector<Eigen::VectorXd> txy{e0, e1, e2};
    CHECK(wedge(dt, wedge(dx, dy)).apply(p, txy) == 1.0);
    CHECK(wedge(wedge(dt, dx), dy).apply(p, txy) == 1.0);
    CHECK_THROWS_AS((void)wedge(wedge(dt, dx), wedge(dx, dy)), Error);
  }

  TEST_CASE("wedge against brute force and graded commutativity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 5;
    const Point p{std::vector<double>(n, 0.0)};
    for (std::size_t pdeg = 0; pdeg <= 3; ++pdeg) {
      for (std::size_t qdeg = 0; pdeg + qdeg <= n && qdeg <= 3; ++qdeg) {
        const KForm a = random_form(n, pdeg, rng);
        const KForm b = random_form(n, qdeg, rng);
        std::vector<Eigen::VectorXd> v;
        for (std::size_t i = 0; i < pdeg + qdeg; ++i) {
          Eigen::VectorXd x(n);
          for (std::size_t j = 0; j < n; ++j) x(static_cast<Eigen::Index>(j)) = u(rng);
          v.push_back(x);
        }
        CAPTURE(pdeg);
        CAPTURE(qdeg);
        const double got = wedge(a, b).apply(p, v);
        CHECK(got == doctest::Approx(oracle::brute_wedge(a, b, p, v)).epsilon(1e-12));
        const double sign = (pdeg * qdeg) % 2 == 0 ? 1.0 : -1.0;
        const Eigen::VectorXd ab = wedge(a, b).coefficients(p);
        const Eigen::VectorXd ba = wedge(b, a).coefficients(p);
        CHECK(oracle::max_abs(ab - sign * ba) <= 1e-14);
      }
    }
  }

  TEST_CASE("exterior derivative: closed form and finite-difference oracle") {
    const Chart c({"t", "x", "y"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    const ScalarField e2t = ScalarField::from_expr(c, expr::parse("exp(2*t)"));
    const KForm w = e2t * KForm::constant(3, 2, {0, 0, 1});
    const KForm dw = exterior_derivative(w);
    REQUIRE(dw.degree() == 3);
    const Point p{{0.3, 0.1, -0.2}};
    CHECK(dw.coefficients(p)(0) == doctest::Approx(2.0 * std::exp(0.6)).epsilon(1e-14));

    // A generic 1-form and 2-form with mixed dependence.
    const auto f = [&](const char* s) { return ScalarField::from_expr(c, expr::parse(s)); };
    const KForm one = KForm::one_form({f("sin(x)*y"), f("t^2*cos(y)"), f("exp(t*x)")});
    const KForm two = f("x*y") * KForm::constant(3, 2, {1, 0, 0}) + f("sinh(t)") * KForm::constant(3, 2, {0, 1, 0}) +
                      f("t*x*y") * KForm::constant(3, 2, {0, 0, 1});
    for (const auto& pt : sample_points(c, 10, 2)) {
      CHECK(oracle::max_abs(exterior_derivative(one).coefficients(pt) - oracle::fd_exterior_derivative(one, pt)) <=
            1e-8);
      CHECK(oracle::max_abs(exterior_derivative(two).coefficients(pt) - oracle::fd_exterior_derivative(two, pt)) <=
            1e-8);
      CHECK(max_abs_coefficient(exterior_derivative(exterior_derivative(one)), pt) <= 1e-12);
    }
    CHECK_THROWS_AS((void)exterior_derivative(dw), Error);
  }

  TEST_CASE("Leibniz rule for d on a wedge") {
    const Chart c({"a", "b", "c", "d"}, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
    const auto f = [&](const char* s) { return ScalarField::from_expr(c, expr::parse(s)); };
    const KForm alpha = KForm::one_form({f("b*c"), f("sin(a)"), f("d^2"), f("exp(b)")});
    const KForm beta = KForm::one_form({f("c"), f("a*d"), f("cos(b)"), f("a+b")});
    const KForm lhs = exterior_derivative(wedge(alpha, beta));
    const KForm rhs = wedge(exterior_derivative(alpha), beta) - wedge(alpha, exterior_derivative(beta));
    for (const auto& pt : sample_points(c, 10, 4)) CHECK(max_abs_coefficient(lhs - rhs, pt) <= 1e-12);
  }

  TEST_CASE("potentials of closed one-forms") {
    const Chart ct({"t"}, {{-1, 1}});
    const KForm dt = KForm::constant(1, 1, {1.0});
    const ScalarField u = one_form_potential(dt, Point{{0.25}}, sample_points(ct, 8, 1));
    CHECK(u.value(Point{{0.75}}) == doctest::Approx(0.5).epsilon(1e-14));

    const Chart cx({"x"}, {{-1, 1}});
    const KForm w = KForm::one_form({2.0 * ScalarField::coordinate(1, 0)});
    const ScalarField v = one_form_potential(w, Point{{0.0}}, sample_points(cx, 8, 1));
    for (const auto& pt : sample_points(cx, 20, 6)) CHECK(std::abs(v.value(pt) - pt[0] * pt[0]) <= 1e-12);

    // tanh(s) ds has potential ln cosh(s); its derivative is exact through the quadrature.
    const KForm th = KForm::one_form({ScalarField::from_expr(ct, expr::parse("tanh(t)"))});
    const ScalarField lc = one_form_potential(th, Point{{0.0}}, sample_points(ct, 8, 1));
    for (const auto& pt : sample_points(ct, 20, 6)) {
      CHECK(std::abs(lc.value(pt) - std::log(std::cosh(pt[0]))) <= 1e-10);
      CHECK(std::abs(partial(lc, pt, 0) - std::tanh(pt[0])) <= 1e-10);
    }
  }

  TEST_CASE("non-closed forms are refused with the closedness residual") {
    const Chart c({"x", "y"}, {{-1, 1}, {-1, 1}});
    const KForm w = KForm::one_form({ScalarField{}, ScalarField::coordinate(2, 0)});
    try {
      (void)one_form_potential(w, Point{{0, 0}}, sample_points(c, 8, 1));
      FAIL("expected ClosednessError");
    } catch (const ClosednessError& e) {
      CHECK(e.residual() == doctest::Approx(1.0));
      CHECK(e.witness().size() == 2);
    }
  }
}
