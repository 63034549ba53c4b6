#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "wpk/expr.hpp"

using namespace wpk;
using namespace wpk::expr;

namespace {

double eval_at(const std::string& src, Env<double> env) { return evaluate<double>(parse(src), env); }

DualScalar eval_dual(const std::string& src, double t) {
  Env<DualScalar> env;
  env["t"] = DualScalar::variable(t, 0, 1);
  return evaluate<DualScalar>(parse(src), env);
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("function application parses to a call node") {
    const Expr e = parse("exp(t)");
    REQUIRE(e.kind() == Kind::Call);
    CHECK(e.function() == Function::Exp);
    REQUIRE(e.children().size() == 1);
    CHECK(e.children()[0].kind() == Kind::Variable);
    CHECK(e.children()[0].name() == "t");
  }

  TEST_CASE("precedence: unary minus binds looser than power") {
    const Expr e = parse("2*x + -y^2");
    REQUIRE(e.kind() == Kind::Add);
    const Expr& mul = e.children()[0];
    REQUIRE(mul.kind() == Kind::Mul);
    CHECK(mul.children()[0].kind() == Kind::Number);
    CHECK(mul.children()[0].number_value() == 2.0);
    CHECK(mul.children()[1].name() == "x");
    const Expr& neg = e.children()[1];
    REQUIRE(neg.kind() == Kind::Negate);
    const Expr& pw = neg.children()[0];
    REQUIRE(pw.kind() == Kind::Pow);
    CHECK(pw.children()[0].name() == "y");
    CHECK(pw.children()[1].number_value() == 2.0);
  }

  TEST_CASE("power is right associative and subtraction left associative") {
    CHECK(eval_at("2^3^2", {}) == doctest::Approx(512.0));
    CHECK(eval_at("10-4-3", {}) == doctest::Approx(3.0));
    CHECK(eval_at("-2^2", {}) == doctest::Approx(-4.0));
    CHECK(eval_at("8/4/2", {}) == doctest::Approx(1.0));
  }

  TEST_CASE("unbalanced parenthesis reports end of input with offset") {
    try {
      (void)parse("exp(");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 4);
      CHECK(std::string(e.what()).find("unexpected end of input at offset 4") != std::string::npos);
    }
  }

  TEST_CASE("malformed inputs are rejected") {
    for (const char* bad : {"", "1 +", "foo(1)", "exp", "pow(1)", "sin(1, 2)", "(1", "1)", "1 2", ".", "3 $ 4"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS((void)parse(bad), ParseError);
    }
  }

  TEST_CASE("print round-trips through parse") {
    for (const char* src : {"exp(t)", "2*x + -y^2", "c*exp(t)", "(a-b)-(c-d)", "a-(b-c)", "a/(b*c)", "(a^b)^c",
                            "a^(b^c)", "-(x+y)", "pow(x, 3) + sqrt(abs(y))", "1.5e-3*cosh(t)/tanh(t+1)",
                            "-x^2", "(-x)^2", "--x"}) {
      CAPTURE(src);
      const Expr e = parse(src);
      CHECK(parse(print(e)) == e);
    }
  }

  TEST_CASE("dual evaluation: chain and power rules") {
    const DualScalar a = eval_dual("exp(2*t)", 0.0);
    CHECK(a.value() == doctest::Approx(1.0));
    CHECK(a.d(0) == doctest::Approx(2.0));
    const DualScalar b = eval_dual("t^3", 2.0);
    CHECK(b.value() == doctest::Approx(8.0));
    CHECK(b.d(0) == doctest::Approx(12.0));
  }

  TEST_CASE("parameterised expression agrees with central difference") {
    Env<DualScalar> env;
    env["c"] = DualScalar(1.5);
    env["t"] = DualScalar::variable(1.0, 0, 1);
    const Expr e = parse("c*exp(t)");
    const DualScalar v = evaluate<DualScalar>(e, env);
    CHECK(v.value() == doctest::Approx(4.077422742688568).epsilon(1e-14));
    const double h = 1e-6;
    const double fd = (eval_at("c*exp(t)", {{"c", 1.5}, {"t", 1.0 + h}}) -
                       eval_at("c*exp(t)", {{"c", 1.5}, {"t", 1.0 - h}})) /
                      (2.0 * h);
    CHECK(std::abs(v.d(0) - fd) <= 1e-8 * std::abs(fd));
  }

  TEST_CASE("second derivatives through nested duals") {
    Env<HyperDual> env;
    env["t"] = HyperDual::variable(DualScalar::variable(2.0, 0, 1), 0, 1);
    const HyperDual r = evaluate<HyperDual>(parse("t^3"), env);
    CHECK(r.value().value() == doctest::Approx(8.0));
    CHECK(r.d(0).value() == doctest::Approx(12.0));
    CHECK(r.d(0).d(0) == doctest::Approx(12.0));
  }

  TEST_CASE("compiled program matches tree evaluation") {
    const Expr e = parse("sin(x)*cosh(y) - log(1 + x^2)/sqrt(2 + y) + pow(x, 2)*tan(y/3)");
    const Program prog(e, {{"x", 0}, {"y", 1}});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng);
      const double y = u(rng);
      const double in[2] = {x, y};
      CHECK(prog.run<double>(in) == doctest::Approx(eval_at(print(e), {{"x", x}, {"y", y}})).epsilon(1e-14));
    }
  }

  TEST_CASE("free variables") {
    CHECK(parse("c*exp(t) + sin(x)").free_variables() == std::set<std::string>{"c", "t", "x"});
    CHECK(parse("exp(1)").free_variables().empty());
  }

  TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(eval_at("x + 1", {}), EvalError);
    CHECK_THROWS_AS(eval_at("log(x)", {{"x", -1.0}}), EvalError);
    CHECK_THROWS_AS(eval_at("1/x", {{"x", 0.0}}), EvalError);
    CHECK_THROWS_AS(eval_at("sqrt(x)", {{"x", -1.0}}), EvalError);
    CHECK_THROWS_AS(eval_at("x^0.5", {{"x", -2.0}}), EvalError);
    CHECK_THROWS_AS((void)Program(parse("x + y"), {{"x", 0}}), EvalError);
    CHECK(eval_at("x^2", {{"x", -3.0}}) == doctest::Approx(9.0));
  }
}
