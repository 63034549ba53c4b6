#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "wpk/models.hpp"

using namespace wpk;

TEST_SUITE("models") {
  TEST_CASE("euclidean Kahler structures") {
    const HermitianStructure h = euclidean_kahler(1);
    CHECK(h.chart.names() == std::vector<std::string>{"x", "y"});
    const Point p{{0.1, 0.2}};
    const Eigen::VectorXd jx = h.J.at(p) * Eigen::Vector2d(1, 0);
    CHECK(jx(0) == 0.0);
    CHECK(jx(1) == 1.0);
    const KForm omega = fundamental_form(h.g, h.J);
    CHECK(std::abs(omega.coefficients(p)(0)) == 1.0);
    CHECK(kahler_check(h, sample_points(h.chart, 20, 1)).pass());

    const HermitianStructure h2 = euclidean_kahler(2);
    CHECK(h2.chart.names() == std::vector<std::string>{"x1", "y1", "x2", "y2"});
    const Eigen::MatrixXd J = h2.J.at(Point{{0, 0, 0, 0}});
    CHECK(J(1, 0) == 1.0);
    CHECK(J(3, 2) == 1.0);
    CHECK(J(2, 0) == 0.0);
    CHECK(kahler_check(h2, sample_points(h2.chart, 20, 1)).pass());
    CHECK_THROWS((void)euclidean_kahler(0));
  }

  TEST_CASE("Kenmotsu examples") {
    for (double c : {1.0, 2.0}) {
      const KenmotsuModel m = kenmotsu_example(c);
      const auto pts = sample_points(m.acs.chart, 200, 42);
      CHECK(m.acs.chart.names() == std::vector<std::string>{"s", "x", "y"});
      CHECK(kenmotsu_residuals(m.acs, m.beta0, pts).pass());
      for (const auto& p : pts) {
        CHECK(m.beta0.value(p) == doctest::Approx(1.0));
        CHECK(m.acs.g.at(p)(1, 1) == doctest::Approx(c * c * std::exp(2 * p[0])));
      }
    }
    CHECK_THROWS((void)kenmotsu_example(0.0));
    CHECK_THROWS((void)kenmotsu_example(-1.0));
  }

  TEST_CASE("cosymplectic product and Sasakian model") {
    const KenmotsuModel m = cosymplectic_product();
    const auto pts = sample_points(m.acs.chart, 50, 42);
    for (const auto& p : pts) CHECK(m.beta0.value(p) == 0.0);
    CHECK(kenmotsu_residuals(m.acs, m.beta0, pts).pass());
    const AlmostContactStructure s = sasakian_r3();
    for (const auto& p : sample_points(s.chart, 20, 1)) {
      CHECK(s.eta.coefficients(p).dot(s.xi.at(p)) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("tower dimensions and kinds") {
    const std::vector<expr::Expr> warps(4, expr::parse("exp(t)"));
    const auto t1 = tower(1, warps);
    REQUIRE(t1.size() == 2);
    CHECK(t1[1].dim() == 3);
    CHECK(t1[1].kind == LevelKind::Kenmotsu);

    const auto t4 = tower(4, warps);
    REQUIRE(t4.size() == 5);
    for (const auto& lvl : t4) {
      CAPTURE(lvl.level);
      CHECK(lvl.dim() == lvl.level + 2);
      CHECK(lvl.kind == (lvl.level % 2 == 1 ? LevelKind::Kenmotsu : LevelKind::Kahler));
      if (lvl.level % 2 == 1) {
        REQUIRE(lvl.kappa.has_value());
        CHECK(*lvl.kappa == 2.0);
      } else {
        REQUIRE(lvl.kahler.has_value());
        const auto pts = sample_points(lvl.kahler->chart, 50, 42);
        const VerificationReport r = kahler_check(*lvl.kahler, pts);
        CHECK(r.pass());
        if (lvl.level == 2) CHECK(r.residual("kahler.d_omega") <= 1e-7);
      }
    }
    CHECK(t4[4].kahler->chart.names() == std::vector<std::string>{"t4", "t3", "t2", "t1", "x", "y"});
    CHECK_THROWS((void)tower(0, warps));
    CHECK_THROWS((void)tower(3, std::vector<expr::Expr>(2, expr::parse("exp(t)"))));
  }

  TEST_CASE("tower with injected warps") {
    const std::vector<expr::Expr> warps{expr::parse("cosh(t)"), expr::parse("1 + t^2/4"), expr::parse("1")};
    const auto t = tower(3, warps);
    CHECK(t[1].kappa.value_or(0.0) == 2.0);
    CHECK(kahler_check(*t[2].kahler, sample_points(t[2].kahler->chart, 30, 1)).pass());
    // A constant warp on a Kenmotsu level leaves beta = 0 and kappa undetermined.
    CHECK_FALSE(t[3].kappa.has_value());
    const auto& k3 = *t[3].kenmotsu;
    CHECK(kenmotsu_residuals(k3.acs, k3.beta0, sample_points(k3.acs.chart, 30, 1)).pass());
  }

  TEST_CASE("catalog is sorted and complete") {
    const auto& cat = catalog();
    std::vector<std::string> names;
    for (const auto& m : cat) names.push_back(m.name);
    CHECK(std::is_sorted(names.begin(), names.end()));
    for (const char* n : {"euclidean_kahler", "kenmotsu_example", "kenmotsu_cosh", "sasakian_r3", "tower"}) {
      CAPTURE(n);
      CHECK(find_model(n) != nullptr);
    }
    CHECK(find_model("nosuch") == nullptr);
    CHECK(find_model("tower")->dim == 4);
    CHECK(kind_name(find_model("sasakian_r3")->kind) == "sasakian");
  }
}
