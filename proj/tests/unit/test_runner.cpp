#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>

#include "wpk/runner.hpp"

using namespace wpk;

namespace {

RunConfig config(const std::string& model, std::vector<std::string> checks = {"all"}, std::size_t samples = 40) {
  RunConfig c;
  c.model = model;
  c.checks = std::move(checks);
  c.samples = samples;
  return c;
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("config parsing") {
    const RunConfig c = parse_config(R"j({"model": "tower", "params": {"levels": 3, "w1": "cosh(t)"},
        "checks": "all", "samples": 12, "seed": 7, "tolerances": {"nabla_j": 1.0}, "format": "json",
        "output": "out.json"})j");
    CHECK(c.model == "tower");
    CHECK(c.params.at("levels") == "3");
    CHECK(c.params.at("w1") == "cosh(t)");
    CHECK(c.checks == std::vector<std::string>{"all"});
    CHECK(c.samples == 12);
    CHECK(c.seed == 7);
    CHECK(c.tolerances.at("nabla_j") == 1.0);
    CHECK(c.format == OutputFormat::Json);
    CHECK(c.output == "out.json");
    const RunConfig d = parse_config(R"({"model": "sasakian_r3", "checks": ["axioms", "kenmotsu"]})");
    CHECK(d.checks.size() == 2);
    CHECK(d.samples == 200);
    CHECK(d.seed == 42);
  }

  TEST_CASE("invalid configs are rejected") {
    for (const char* bad : {"", "[]", "{", R"({"model": 3})", R"({"model": "tower", "bogus": 1})",
                            R"({"model": "tower", "samples": 0})", R"({"model": "tower", "samples": -2})",
                            R"({"model": "tower", "seed": -1})", R"({"model": "tower", "checks": [1]})",
                            R"({"model": "tower", "format": "xml"})", R"({"model": "tower", "params": []})",
                            R"({"params": {}})"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS((void)parse_config(bad), ConfigError);
    }
  }

  TEST_CASE("run validation") {
    CHECK_THROWS_AS((void)run(config("nosuch")), ConfigError);
    CHECK_THROWS_AS((void)run(config("sasakian_r3", {"nosuch"})), ConfigError);
    CHECK_THROWS_AS((void)run(config("euclidean_kahler", {"kenmotsu"})), ConfigError);
    RunConfig p = config("kenmotsu_example");
    p.params["nosuch"] = "1";
    CHECK_THROWS_AS((void)run(p), ConfigError);
    p = config("kenmotsu_example");
    p.params["c"] = "exp(";
    CHECK_THROWS_AS((void)run(p), ConfigError);
    p = config("kenmotsu_example");
    p.params["warp"] = "t - 2";
    CHECK_THROWS_AS((void)run(p), ModelError);
    p = config("tower");
    p.params["levels"] = "0";
    CHECK_THROWS_AS((void)run(p), ConfigError);
    p = config("tower");
    p.tolerances["nosuch"] = 1.0;
    CHECK_THROWS_AS((void)run(p), ConfigError);
  }

  TEST_CASE("check order is fixed") {
    const auto& names = check_names();
    CHECK(names.front() == "dimension");
    CHECK(names.back() == "kahler");
    const RunReport r = run(config("kenmotsu_example"));
    std::size_t last = 0;
    for (const auto& rec : r.report.checks) {
      const std::string head = rec.name.substr(0, rec.name.find('.'));
      const auto pos = static_cast<std::size_t>(std::find(names.begin(), names.end(), head) - names.begin());
      CAPTURE(rec.name);
      REQUIRE(pos < names.size());
      CHECK(pos >= last);
      last = pos;
    }
  }

  TEST_CASE("Sasakian negative control names the failing identity") {
    const RunReport r = run(config("sasakian_r3", {"kenmotsu"}));
    CHECK_FALSE(r.pass());
    const CheckRecord* rec = r.report.find("kenmotsu.nabla_phi");
    REQUIRE(rec != nullptr);
    CHECK_FALSE(rec->pass);
    CHECK(rec->anchor.find("nabla_X phi") != std::string::npos);
    CHECK(rec->witness.size() == 3);
  }

  TEST_CASE("Sasakian model passes its own suite with calibrated constants") {
    const RunReport r = run(config("sasakian_r3"));
    CHECK(r.pass());
    REQUIRE(r.contact_constant.has_value());
    CHECK(*r.contact_constant == doctest::Approx(0.5));
    REQUIRE(r.alpha.has_value());
    CHECK(*r.alpha == doctest::Approx(1.0));
  }

  TEST_CASE("tower level 1 and the Kahler model pass") {
    RunConfig c = config("tower");
    c.params["levels"] = "1";
    const RunReport r = run(c);
    CHECK(r.pass());
    CHECK(r.kappa.value_or(0.0) == 2.0);
    CHECK(run(config("euclidean_kahler")).pass());
  }

  TEST_CASE("tolerance overrides reach the matching records only") {
    RunConfig c = config("sasakian_r3", {"kenmotsu"});
    c.tolerances["kenmotsu.nabla_phi"] = 10.0;
    const RunReport r = run(c);
    CHECK(r.report.find("kenmotsu.nabla_phi")->pass);
    CHECK(r.report.find("kenmotsu.nabla_phi")->tolerance == 10.0);
    CHECK_FALSE(r.report.find("kenmotsu.nabla_xi")->pass);
    c.tolerances = {{"kenmotsu", 10.0}};
    CHECK(run(c).pass());
  }

  TEST_CASE("identical configs give identical JSON") {
    RunConfig c = config("tower", {"all"}, 30);
    c.params["levels"] = "2";
    c.params["w2"] = "1 + t^2/4";
    CHECK(to_json(run(c)) == to_json(run(c)));
    RunConfig d = c;
    d.seed = 43;
    CHECK(to_json(run(c)) != to_json(run(d)));
  }

  TEST_CASE("parameters are echoed verbatim") {
    RunConfig c = config("kenmotsu_example", {"axioms"});
    c.params["c"] = "2*1";
    const auto j = nlohmann::json::parse(to_json(run(c)));
    CHECK(j["model"]["params"]["c"] == "2*1");
    CHECK(j["model"]["params"]["lo"] == "-1");
  }

  TEST_CASE("model listing") {
    const std::string text = list_models(OutputFormat::Text);
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    CHECK(std::is_sorted(lines.begin(), lines.end()));
    CHECK(text.find("tower") != std::string::npos);
    const auto j = nlohmann::json::parse(list_models(OutputFormat::Json));
    CHECK(j["version"] == kVersion);
    for (const auto& m : j["models"]) {
      CHECK(m["name"].is_string());
      CHECK(m["kind"].is_string());
      CHECK(m["dim"].is_number_unsigned());
      CHECK(m["params"].is_array());
      for (const auto& p : m["params"]) {
        CHECK(p["name"].is_string());
        CHECK(p["type"].is_string());
        CHECK(p["default"].is_string());
      }
    }
  }
}
