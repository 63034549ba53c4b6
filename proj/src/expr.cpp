#include "wpk/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace wpk::expr {

struct Expr::Node {
  Kind kind;
  double number = 0.0;
  std::string name;
  Function function = Function::Exp;
  std::vector<Expr> children;
};

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 11> kFunctions{{
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"tanh", Function::Tanh},
    {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
    {"pow", Function::Pow},
}};

const Function* lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return &f;
  }
  return nullptr;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError(pos_, "empty expression", "expression");
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'", "end of input");
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void unexpected(const std::string& expected) const {
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input", expected);
    throw ParseError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'", expected);
  }

  void expect(char c) {
    if (!accept(c)) unexpected(std::string("'") + c + "'");
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Kind::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = Expr::binary(Kind::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Kind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  // Right-associative; the exponent may carry its own unary minus.
  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Kind::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) unexpected("expression");
    const char c = src_[pos_];
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    if (accept('(')) {
      Expr inner = parse_sum();
      expect(')');
      return inner;
    }
    unexpected("expression");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ - start == 1 && src_[start] == '.') throw ParseError(start, "malformed number", "digit");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ >= src_.size() || !is_digit(src_[pos_])) unexpected("exponent digits");
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) throw ParseError(start, "number out of range");
    if (ec != std::errc() || ptr != last) throw ParseError(start, "malformed number");
    return Expr::number(v);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    const Function* f = lookup_function(name);
    skip_ws();
    const bool is_call = pos_ < src_.size() && src_[pos_] == '(';
    if (!is_call) {
      if (f != nullptr) throw ParseError(start, "function '" + name + "' used without arguments", "'('");
      return Expr::variable(std::move(name));
    }
    if (f == nullptr) throw ParseError(start, "unknown function '" + name + "'");
    ++pos_;
    std::vector<Expr> args;
    if (!accept(')')) {
      args.push_back(parse_sum());
      while (accept(',')) args.push_back(parse_sum());
      expect(')');
    }
    if (args.size() != function_arity(*f)) {
      throw ParseError(start, "function '" + name + "' takes " + std::to_string(function_arity(*f)) +
                                  " argument(s), got " + std::to_string(args.size()));
    }
    return Expr::call(*f, std::move(args));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Negate:
      return 3;
    case Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_to(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  print_to(e, out);
  if (parens) out += ')';
}

void print_to(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Number: {
      std::array<char, 64> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), e.number_value());
      out.append(buf.data(), res.ptr);
      return;
    }
    case Kind::Variable:
      out += e.name();
      return;
    case Kind::Negate:
      out += '-';
      print_wrapped(e.children()[0], precedence(e.children()[0]) < 3, out);
      return;
    case Kind::Call: {
      out += function_name(e.function());
      out += '(';
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i != 0) out += ", ";
        print_to(e.children()[i], out);
      }
      out += ')';
      return;
    }
    case Kind::Pow: {
      const Expr& base = e.children()[0];
      const Expr& exponent = e.children()[1];
      print_wrapped(base, precedence(base) <= 4, out);
      out += '^';
      print_wrapped(exponent, precedence(exponent) < 3, out);
      return;
    }
    default: {
      const int p = precedence(e);
      const Expr& lhs = e.children()[0];
      const Expr& rhs = e.children()[1];
      print_wrapped(lhs, precedence(lhs) < p, out);
      switch (e.kind()) {
        case Kind::Add: out += " + "; break;
        case Kind::Sub: out += " - "; break;
        case Kind::Mul: out += "*"; break;
        default: out += "/"; break;
      }
      print_wrapped(rhs, precedence(rhs) <= p, out);
      return;
    }
  }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Variable) out.insert(e.name());
  for (const Expr& c : e.children()) collect_vars(c, out);
}

[[noreturn]] void domain_error(const std::string& what, const Expr& source) {
  throw EvalError("domain error: " + what + " in '" + print(source) + "'");
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& [n, g] : kFunctions) {
    if (g == f) return n;
  }
  return "?";
}

std::size_t function_arity(Function f) { return f == Function::Pow ? 2 : 1; }

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = v;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::call(Function f, std::vector<Expr> args) {
  if (args.size() != function_arity(f)) throw Error("wrong arity for " + std::string(function_name(f)));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->function = f;
  n->children = std::move(args);
  return Expr(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
double Expr::number_value() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
Function Expr::function() const { return node_->function; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

std::set<std::string> Expr::free_variables() const {
  std::set<std::string> out;
  collect_vars(*this, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Number:
      return a.number_value() == b.number_value();
    case Kind::Variable:
      return a.name() == b.name();
    case Kind::Call:
      if (a.function() != b.function()) return false;
      break;
    default:
      break;
  }
  return a.children() == b.children();
}

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

std::string print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

Program::Program(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots) {
  emit(e, slots);
  std::size_t depth = 0;
  for (const Instr& in : code_) {
    switch (in.kind) {
      case Kind::Number:
      case Kind::Variable:
        ++depth;
        break;
      case Kind::Negate:
        break;
      case Kind::Call:
        depth -= function_arity(in.function) - 1;
        break;
      default:
        --depth;
        break;
    }
    max_stack_ = std::max(max_stack_, depth);
  }
}

void Program::emit(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots) {
  for (const Expr& c : e.children()) emit(c, slots);
  Instr in{e.kind(), Function::Exp, 0.0, 0, e};
  switch (e.kind()) {
    case Kind::Number:
      in.constant = e.number_value();
      break;
    case Kind::Variable: {
      const auto it = slots.find(e.name());
      if (it == slots.end()) throw EvalError("unbound variable '" + e.name() + "'");
      in.slot = it->second;
      break;
    }
    case Kind::Call:
      in.function = e.function();
      break;
    default:
      break;
  }
  code_.push_back(std::move(in));
}

template <class S>
S Program::run(std::span<const S> inputs) const {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  using std::tanh;

  std::vector<S> stack;
  stack.reserve(max_stack_);
  for (const Instr& in : code_) {
    switch (in.kind) {
      case Kind::Number:
        stack.emplace_back(in.constant);
        break;
      case Kind::Variable:
        stack.push_back(inputs[in.slot]);
        break;
      case Kind::Negate:
        stack.back() = -stack.back();
        break;
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul:
      case Kind::Div:
      case Kind::Pow: {
        S rhs = std::move(stack.back());
        stack.pop_back();
        S& lhs = stack.back();
        if (in.kind == Kind::Add) {
          lhs = lhs + rhs;
        } else if (in.kind == Kind::Sub) {
          lhs = lhs - rhs;
        } else if (in.kind == Kind::Mul) {
          lhs = lhs * rhs;
        } else if (in.kind == Kind::Div) {
          if (primal(rhs) == 0.0) domain_error("division by zero", in.source);
          lhs = lhs / rhs;
        } else {
          const double base = primal(lhs);
          const double expo = primal(rhs);
          const bool integral = std::floor(expo) == expo && is_constant(rhs);
          if (base < 0.0 && !integral) domain_error("non-integer power of negative base", in.source);
          if (base == 0.0) {
            if (expo <= 0.0) domain_error("zero raised to non-positive power", in.source);
            if (!is_constant(rhs)) domain_error("variable exponent at zero base", in.source);
            if (expo < 1.0 && !is_constant(lhs)) domain_error("power not differentiable at zero", in.source);
          }
          lhs = pow(lhs, rhs);
        }
        break;
      }
      case Kind::Call: {
        if (in.function == Function::Pow) {
          S rhs = std::move(stack.back());
          stack.pop_back();
          S& lhs = stack.back();
          const double base = primal(lhs);
          const double expo = primal(rhs);
          const bool integral = std::floor(expo) == expo && is_constant(rhs);
          if (base < 0.0 && !integral) domain_error("non-integer power of negative base", in.source);
          if (base == 0.0) {
            if (expo <= 0.0) domain_error("zero raised to non-positive power", in.source);
            if (!is_constant(rhs)) domain_error("variable exponent at zero base", in.source);
            if (expo < 1.0 && !is_constant(lhs)) domain_error("power not differentiable at zero", in.source);
          }
          lhs = pow(lhs, rhs);
          break;
        }
        S& a = stack.back();
        const double v = primal(a);
        switch (in.function) {
          case Function::Exp: a = exp(a); break;
          case Function::Log:
            if (v <= 0.0) domain_error("log of non-positive value", in.source);
            a = log(a);
            break;
          case Function::Sin: a = sin(a); break;
          case Function::Cos: a = cos(a); break;
          case Function::Tan:
            if (std::cos(v) == 0.0) domain_error("tan at pole", in.source);
            a = tan(a);
            break;
          case Function::Sinh: a = sinh(a); break;
          case Function::Cosh: a = cosh(a); break;
          case Function::Tanh: a = tanh(a); break;
          case Function::Sqrt:
            if (v < 0.0) domain_error("sqrt of negative value", in.source);
            if (v == 0.0 && !is_constant(a)) domain_error("sqrt not differentiable at zero", in.source);
            a = sqrt(a);
            break;
          case Function::Abs: a = abs(a); break;
          case Function::Pow: break;
        }
        break;
      }
    }
  }
  return std::move(stack.back());
}

template <class S>
S evaluate(const Expr& e, const Env<S>& env) {
  std::map<std::string, std::size_t, std::less<>> slots;
  std::vector<S> inputs;
  for (const std::string& name : e.free_variables()) {
    const auto it = env.find(name);
    if (it == env.end()) throw EvalError("unbound variable '" + name + "'");
    slots.emplace(name, inputs.size());
    inputs.push_back(it->second);
  }
  return Program(e, slots).run<S>(inputs);
}

template double Program::run<double>(std::span<const double>) const;
template DualScalar Program::run<DualScalar>(std::span<const DualScalar>) const;
template HyperDual Program::run<HyperDual>(std::span<const HyperDual>) const;
template double evaluate<double>(const Expr&, const Env<double>&);
template DualScalar evaluate<DualScalar>(const Expr&, const Env<DualScalar>&);
template HyperDual evaluate<HyperDual>(const Expr&, const Env<HyperDual>&);

}  // namespace wpk::expr
