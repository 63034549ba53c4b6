#include "wpk/wpk.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "wpk/runner.hpp"

struct wpk_run {
  wpk::RunReport report;
};

struct wpk_expr {
  wpk::expr::Expr expr;
};

namespace {

thread_local std::string last_error;

wpk_status fail(wpk_status s, const std::string& message) {
  last_error = message;
  return s;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wpk_status give(const std::string& s, char** out) {
  *out = duplicate(s);
  if (*out == nullptr) return fail(WPK_INTERNAL_ERROR, "out of memory");
  return WPK_OK;
}

// Maps exceptions from the core onto status codes.
template <class F>
wpk_status guarded(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const wpk::ConfigError& e) {
    return fail(WPK_CONFIG_ERROR, e.what());
  } catch (const wpk::ModelError& e) {
    return fail(WPK_MODEL_ERROR, e.what());
  } catch (const wpk::expr::ParseError& e) {
    return fail(WPK_PARSE_ERROR, e.what());
  } catch (const wpk::expr::EvalError& e) {
    return fail(WPK_EVAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(WPK_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(WPK_INTERNAL_ERROR, e.what());
  }
}

template <class S>
wpk::expr::Env<S> bind(const char* const* names, const double* values, std::size_t count, bool seed) {
  wpk::expr::Env<S> env;
  for (std::size_t i = 0; i < count; ++i) {
    if (names[i] == nullptr) throw std::invalid_argument("variable name is null");
    if constexpr (std::is_same_v<S, double>) {
      env[names[i]] = values[i];
    } else {
      env[names[i]] = seed ? S::variable(values[i], i, count) : S(values[i]);
    }
  }
  return env;
}

}  // namespace

extern "C" {

const char* wpk_version(void) { return wpk::kVersion; }

const char* wpk_last_error(void) { return last_error.c_str(); }

void wpk_string_free(char* s) { std::free(s); }

wpk_status wpk_verify(const char* config_json, wpk_run** out) {
  if (config_json == nullptr || out == nullptr) return fail(WPK_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const wpk::RunConfig cfg = wpk::parse_config(config_json);
    *out = new wpk_run{wpk::run(cfg)};
    return WPK_OK;
  });
}

int wpk_run_passed(const wpk_run* run) { return run != nullptr && run->report.pass() ? 1 : 0; }

size_t wpk_run_check_count(const wpk_run* run) { return run == nullptr ? 0 : run->report.report.checks.size(); }

wpk_status wpk_run_check(const wpk_run* run, size_t index, wpk_check_info* out) {
  if (run == nullptr || out == nullptr) return fail(WPK_INVALID_ARGUMENT, "null argument");
  const auto& checks = run->report.report.checks;
  if (index >= checks.size()) return fail(WPK_INVALID_ARGUMENT, "check index out of range");
  const wpk::CheckRecord& c = checks[index];
  *out = wpk_check_info{c.name.c_str(),
                        c.anchor.c_str(),
                        c.max_residual,
                        c.tolerance,
                        c.pass ? 1 : 0,
                        c.role == wpk::CheckRole::Hypothesis ? 1 : 0};
  return WPK_OK;
}

wpk_status wpk_run_report(const wpk_run* run, wpk_format format, char** out) {
  if (run == nullptr || out == nullptr) return fail(WPK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    return give(format == WPK_FORMAT_JSON ? wpk::to_json(run->report) : wpk::to_text(run->report), out);
  });
}

void wpk_run_free(wpk_run* run) { delete run; }

wpk_status wpk_list_models(wpk_format format, char** out) {
  if (out == nullptr) return fail(WPK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    return give(wpk::list_models(format == WPK_FORMAT_JSON ? wpk::OutputFormat::Json : wpk::OutputFormat::Text),
                out);
  });
}

wpk_status wpk_expr_parse(const char* source, wpk_expr** out) {
  if (source == nullptr || out == nullptr) return fail(WPK_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new wpk_expr{wpk::expr::parse(source)};
    return WPK_OK;
  });
}

wpk_status wpk_expr_print(const wpk_expr* e, char** out) {
  if (e == nullptr || out == nullptr) return fail(WPK_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return give(wpk::expr::print(e->expr), out); });
}

wpk_status wpk_expr_eval(const wpk_expr* e, const char* const* names, const double* values, size_t count,
                         double* out) {
  if (e == nullptr || out == nullptr || (count > 0 && (names == nullptr || values == nullptr))) {
    return fail(WPK_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    try {
      *out = wpk::expr::evaluate<double>(e->expr, bind<double>(names, values, count, false));
    } catch (const std::invalid_argument& err) {
      return fail(WPK_INVALID_ARGUMENT, err.what());
    }
    return WPK_OK;
  });
}

wpk_status wpk_expr_eval_gradient(const wpk_expr* e, const char* const* names, const double* values, size_t count,
                                  double* value, double* gradient) {
  if (e == nullptr || value == nullptr || (count > 0 && (names == nullptr || values == nullptr || gradient == nullptr))) {
    return fail(WPK_INVALID_ARGUMENT, "null argument");
  }
  if (count > wpk::kMaxDirections) return fail(WPK_INVALID_ARGUMENT, "too many variables for gradient evaluation");
  return guarded([&] {
    try {
      const wpk::DualScalar r =
          wpk::expr::evaluate<wpk::DualScalar>(e->expr, bind<wpk::DualScalar>(names, values, count, true));
      *value = r.value();
      for (std::size_t i = 0; i < count; ++i) gradient[i] = i < r.size() ? r.d(i) : 0.0;
    } catch (const std::invalid_argument& err) {
      return fail(WPK_INVALID_ARGUMENT, err.what());
    }
    return WPK_OK;
  });
}

void wpk_expr_free(wpk_expr* e) { delete e; }

}  // extern "C"
