#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <limits>

#include "wpk/report.hpp"

using namespace wpk;

TEST_SUITE("report") {
  TEST_CASE("real formatting round-trips") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(-1e-300) == "-1e-300");
    CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "null");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "null");
    for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308}) CHECK(std::stod(format_real(v)) == v);
  }

  TEST_CASE("residual tracker keeps the worst point and the earliest on ties") {
    ResidualTracker t;
    t.update(0.5, Point{{1.0}});
    t.update(0.7, Point{{2.0}});
    t.update(0.7, Point{{3.0}});
    t.update(0.1, Point{{4.0}});
    CHECK(t.max() == 0.7);
    CHECK(t.witness() == std::vector<double>{2.0});
    t.update(std::numeric_limits<double>::quiet_NaN(), Point{{5.0}});
    CHECK(std::isinf(t.max()));
    CHECK(t.witness() == std::vector<double>{5.0});
    const CheckRecord r = t.record("x", "a = b", 1.0);
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("records and tolerance overrides") {
    ResidualTracker t;
    t.update(1e-3, Point{{0.0}});
    CheckRecord r = t.record("c", "a = b", 1e-6, CheckRole::Hypothesis);
    CHECK_FALSE(r.pass);
    r.set_tolerance(1e-2);
    CHECK(r.pass);
    r.extra_ok = false;
    r.set_tolerance(1e-2);
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("verification report aggregation") {
    VerificationReport a;
    ResidualTracker ok;
    ok.update(0.0, Point{{0.0}});
    a.add(ok.record("one", "", 1.0));
    VerificationReport b;
    ResidualTracker bad;
    bad.update(2.0, Point{{0.0}});
    b.add(bad.record("two", "", 1.0));
    CHECK(a.pass());
    a.append(b, "level1.");
    CHECK_FALSE(a.pass());
    CHECK(a.find("level1.two") != nullptr);
    CHECK(a.residual("level1.two") == 2.0);
    CHECK_THROWS((void)a.residual("missing"));
    CHECK(VerificationReport{}.pass());
  }

  TEST_CASE("JSON report layout") {
    RunReport rr;
    rr.version = "0.1.0";
    rr.model = "m";
    rr.params = {{"a", "exp(t)"}, {"b", "2"}};
    rr.seed = 42;
    rr.samples = 3;
    ResidualTracker t;
    t.update(0.25, Point{{0.5, -0.5}});
    rr.report.add(t.record("chk", "x = \"y\"", 1.0));
    rr.kappa = 2.0;
    const std::string text = to_json(rr);
    CHECK(text == to_json(rr));
    const auto j = nlohmann::json::parse(text);
    CHECK(j["version"] == "0.1.0");
    CHECK(j["model"]["name"] == "m");
    CHECK(j["model"]["params"]["a"] == "exp(t)");
    CHECK(j["seed"] == 42);
    CHECK(j["samples"] == 3);
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["anchor"] == "x = \"y\"");
    CHECK(j["checks"][0]["max_residual"] == 0.25);
    CHECK(j["checks"][0]["witness_point"][1] == -0.5);
    CHECK(j["checks"][0]["pass"] == true);
    CHECK(j["pass"] == true);
    CHECK(j["calibrated"]["kappa"] == 2.0);
    CHECK(j["calibrated"]["c"].is_null());
    const std::string txt = to_text(rr);
    CHECK(txt.find("chk") != std::string::npos);
    CHECK(txt.find("PASS") != std::string::npos);
  }
}
