#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "wpk/wpk.h"

namespace {

std::string take(char* s) {
  std::string r(s);
  wpk_string_free(s);
  return r;
}

}  // namespace

TEST_CASE("version") { CHECK(std::string(wpk_version()) == "0.1.0"); }

TEST_CASE("verify a passing run and inspect its checks") {
  wpk_run* run = nullptr;
  REQUIRE(wpk_verify(R"({"model": "tower", "params": {"levels": 1}, "samples": 50})", &run) == WPK_OK);
  REQUIRE(run != nullptr);
  CHECK(wpk_run_passed(run) == 1);
  const size_t n = wpk_run_check_count(run);
  CHECK(n > 5);
  wpk_check_info info{};
  REQUIRE(wpk_run_check(run, 0, &info) == WPK_OK);
  CHECK(std::string(info.name) == "level0.dimension");
  CHECK(info.pass == 1);
  CHECK(wpk_run_check(run, n, &info) == WPK_INVALID_ARGUMENT);
  CHECK(std::string(wpk_last_error()).find("range") != std::string::npos);

  char* json = nullptr;
  REQUIRE(wpk_run_report(run, WPK_FORMAT_JSON, &json) == WPK_OK);
  const auto j = nlohmann::json::parse(take(json));
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() == n);
  char* text = nullptr;
  REQUIRE(wpk_run_report(run, WPK_FORMAT_TEXT, &text) == WPK_OK);
  CHECK(take(text).find("PASS") != std::string::npos);
  wpk_run_free(run);
}

TEST_CASE("failing checks still produce a run") {
  wpk_run* run = nullptr;
  REQUIRE(wpk_verify(R"({"model": "sasakian_r3", "checks": "kenmotsu", "samples": 20})", &run) == WPK_OK);
  CHECK(wpk_run_passed(run) == 0);
  wpk_check_info info{};
  REQUIRE(wpk_run_check(run, 0, &info) == WPK_OK);
  CHECK(info.pass == 0);
  CHECK(info.max_residual >= 0.1);
  CHECK(std::strlen(info.anchor) > 0);
  wpk_run_free(run);
}

TEST_CASE("error statuses") {
  wpk_run* run = reinterpret_cast<wpk_run*>(0x1);
  CHECK(wpk_verify(R"({"model": "nosuch"})", &run) == WPK_CONFIG_ERROR);
  CHECK(run == nullptr);
  CHECK(std::string(wpk_last_error()).find("nosuch") != std::string::npos);
  CHECK(wpk_verify("not json", &run) == WPK_CONFIG_ERROR);
  CHECK(wpk_verify(R"({"model": "kenmotsu_example", "params": {"warp": "t - 5"}})", &run) == WPK_MODEL_ERROR);
  CHECK(wpk_verify(nullptr, &run) == WPK_INVALID_ARGUMENT);
  CHECK(wpk_verify("{}", nullptr) == WPK_INVALID_ARGUMENT);
  CHECK(wpk_run_passed(nullptr) == 0);
  CHECK(wpk_run_check_count(nullptr) == 0);
  char* out = nullptr;
  CHECK(wpk_run_report(nullptr, WPK_FORMAT_JSON, &out) == WPK_INVALID_ARGUMENT);
  wpk_run_free(nullptr);
  wpk_string_free(nullptr);
}

TEST_CASE("last error is per thread and cleared on success") {
  wpk_run* run = nullptr;
  REQUIRE(wpk_verify(R"({"model": "nosuch"})", &run) == WPK_CONFIG_ERROR);
  std::string other;
  std::thread t([&] { other = wpk_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(wpk_last_error()).empty());
  wpk_expr* e = nullptr;
  REQUIRE(wpk_expr_parse("1", &e) == WPK_OK);
  CHECK(std::string(wpk_last_error()).empty());
  wpk_expr_free(e);
}

TEST_CASE("model listing") {
  char* text = nullptr;
  REQUIRE(wpk_list_models(WPK_FORMAT_TEXT, &text) == WPK_OK);
  CHECK(take(text).find("kenmotsu_example") != std::string::npos);
  char* json = nullptr;
  REQUIRE(wpk_list_models(WPK_FORMAT_JSON, &json) == WPK_OK);
  CHECK(nlohmann::json::parse(take(json))["models"].size() == 6);
  CHECK(wpk_list_models(WPK_FORMAT_JSON, nullptr) == WPK_INVALID_ARGUMENT);
}

TEST_CASE("expressions") {
  wpk_expr* e = nullptr;
  REQUIRE(wpk_expr_parse("c*exp(2*t)", &e) == WPK_OK);
  char* printed = nullptr;
  REQUIRE(wpk_expr_print(e, &printed) == WPK_OK);
  CHECK(take(printed) == "c*exp(2*t)");

  const char* names[] = {"t", "c"};
  const double values[] = {0.5, 3.0};
  double v = 0.0;
  REQUIRE(wpk_expr_eval(e, names, values, 2, &v) == WPK_OK);
  CHECK(v == doctest::Approx(3.0 * std::exp(1.0)));
  double grad[2] = {0.0, 0.0};
  REQUIRE(wpk_expr_eval_gradient(e, names, values, 2, &v, grad) == WPK_OK);
  CHECK(grad[0] == doctest::Approx(6.0 * std::exp(1.0)));
  CHECK(grad[1] == doctest::Approx(std::exp(1.0)));

  CHECK(wpk_expr_eval(e, names, values, 1, &v) == WPK_EVAL_ERROR);
  CHECK(std::string(wpk_last_error()).find("unbound") != std::string::npos);
  wpk_expr_free(e);

  wpk_expr* bad = reinterpret_cast<wpk_expr*>(0x1);
  CHECK(wpk_expr_parse("exp(", &bad) == WPK_PARSE_ERROR);
  CHECK(bad == nullptr);
  CHECK(std::string(wpk_last_error()).find("offset 4") != std::string::npos);

  wpk_expr* lg = nullptr;
  REQUIRE(wpk_expr_parse("log(x)", &lg) == WPK_OK);
  const char* xn[] = {"x"};
  const double neg[] = {-1.0};
  CHECK(wpk_expr_eval(lg, xn, neg, 1, &v) == WPK_EVAL_ERROR);
  wpk_expr_free(lg);
}
