#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wpk/dual.hpp"

namespace wpk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wpk

namespace wpk::expr {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message, const std::string& expected = {})
      : Error(message + " at offset " + std::to_string(offset) +
              (expected.empty() ? std::string() : ": expected " + expected)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Unbound variables and domain violations during evaluation.
class EvalError : public Error {
 public:
  using Error::Error;
};

enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Abs, Pow };

std::string_view function_name(Function f);
std::size_t function_arity(Function f);

// Immutable expression tree. Copies share structure.
class Expr {
 public:
  static Expr number(double v);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(Kind op, Expr lhs, Expr rhs);
  static Expr call(Function f, std::vector<Expr> args);

  Kind kind() const;
  double number_value() const;
  const std::string& name() const;
  Function function() const;
  const std::vector<Expr>& children() const;

  std::set<std::string> free_variables() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view source);

// Precedence-aware rendering; parse(print(e)) == e.
std::string print(const Expr& e);

// Flattened postfix form with variables resolved to input slots.
class Program {
 public:
  // `slots` gives the input slot of each variable name; names not listed
  // are unbound and raise EvalError at compile time.
  Program(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots);

  template <class S>
  S run(std::span<const S> inputs) const;

 private:
  struct Instr {
    Kind kind;
    Function function = Function::Exp;
    double constant = 0.0;
    std::size_t slot = 0;
    Expr source;
  };
  void emit(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots);

  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
};

template <class S>
using Env = std::map<std::string, S, std::less<>>;

// Evaluate with every free variable looked up in env.
template <class S>
S evaluate(const Expr& e, const Env<S>& env);

extern template double Program::run<double>(std::span<const double>) const;
extern template DualScalar Program::run<DualScalar>(std::span<const DualScalar>) const;
extern template HyperDual Program::run<HyperDual>(std::span<const HyperDual>) const;
extern template double evaluate<double>(const Expr&, const Env<double>&);
extern template DualScalar evaluate<DualScalar>(const Expr&, const Env<DualScalar>&);
extern template HyperDual evaluate<HyperDual>(const Expr&, const Env<HyperDual>&);

}  // namespace wpk::expr
