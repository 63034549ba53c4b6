#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wpk/wpk.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> model;
  std::vector<std::string> params;
  std::optional<std::string> levels;
  std::vector<std::string> checks;
  std::optional<long long> samples;
  std::optional<unsigned long long> seed;
  std::vector<std::string> tolerances;
  bool json = false;
  std::optional<std::string> out;
};

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError(std::string(flag) + " expects key=value, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_real(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw UsageError("invalid real for " + what + ": '" + s + "'");
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Config file first, then flags on top.
nlohmann::ordered_json merged_config(const VerifyOptions& o) {
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  if (o.config_path) {
    try {
      cfg = nlohmann::ordered_json::parse(read_file(*o.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file '" + *o.config_path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  }
  if (o.model) cfg["model"] = *o.model;
  if (!o.params.empty() || o.levels) {
    if (!cfg.contains("params")) cfg["params"] = nlohmann::ordered_json::object();
    if (!cfg["params"].is_object()) throw UsageError("config key 'params' must be an object");
    for (const auto& p : o.params) {
      auto [k, v] = split_assignment(p, "--param");
      cfg["params"][k] = v;
    }
    if (o.levels) cfg["params"]["levels"] = *o.levels;
  }
  if (!o.checks.empty()) cfg["checks"] = o.checks;
  if (o.samples) cfg["samples"] = *o.samples;
  if (o.seed) cfg["seed"] = *o.seed;
  if (!o.tolerances.empty()) {
    if (!cfg.contains("tolerances")) cfg["tolerances"] = nlohmann::ordered_json::object();
    if (!cfg["tolerances"].is_object()) throw UsageError("config key 'tolerances' must be an object");
    for (const auto& t : o.tolerances) {
      auto [k, v] = split_assignment(t, "--tol");
      cfg["tolerances"][k] = parse_real(v, "--tol " + k);
    }
  }
  if (o.json) cfg["format"] = "json";
  if (o.out) cfg["output"] = *o.out;
  return cfg;
}

std::string take(char* s) {
  std::string r = s == nullptr ? std::string() : std::string(s);
  wpk_string_free(s);
  return r;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? 0 : kExitUsage;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kExitUsage;
  }
  out << text;
  if (!out) {
    std::cerr << "error: failed writing '" << path << "'\n";
    return kExitUsage;
  }
  return 0;
}

int run_verify(const VerifyOptions& o) {
  nlohmann::ordered_json cfg;
  try {
    cfg = merged_config(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!cfg.contains("model")) {
    std::cerr << "error: no model given (use --model or a config file)\n";
    return kExitUsage;
  }

  wpk_run* run = nullptr;
  const wpk_status st = wpk_verify(cfg.dump().c_str(), &run);
  if (st != WPK_OK) {
    const char* kind = st == WPK_MODEL_ERROR ? "model error" : st == WPK_CONFIG_ERROR ? "config error" : "error";
    std::cerr << kind << ": " << wpk_last_error() << "\n";
    return kExitUsage;
  }

  // The config was accepted, so these keys have the documented types.
  const bool as_json = cfg.value("format", std::string("text")) == "json";
  const std::string path = cfg.value("output", std::string());

  char* text = nullptr;
  if (wpk_run_report(run, as_json ? WPK_FORMAT_JSON : WPK_FORMAT_TEXT, &text) != WPK_OK) {
    std::cerr << "error: " << wpk_last_error() << "\n";
    wpk_run_free(run);
    return kExitUsage;
  }
  const bool passed = wpk_run_passed(run) != 0;
  wpk_run_free(run);

  if (const int rc = emit(take(text), path); rc != 0) return rc;
  return passed ? kExitPass : kExitCheckFailed;
}

int run_list(bool json) {
  char* text = nullptr;
  if (wpk_list_models(json ? WPK_FORMAT_JSON : WPK_FORMAT_TEXT, &text) != WPK_OK) {
    std::cerr << "error: " << wpk_last_error() << "\n";
    return kExitUsage;
  }
  return emit(take(text), "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifier for warped-product almost Hermitian and Kenmotsu structures", "wpk"};
  app.set_version_flag("--version", std::string(wpk_version()));
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run checks on a model and print a report");
  verify->add_option("--config", vo.config_path, "JSON config file; flags override its keys");
  verify->add_option("--model", vo.model, "Model name (see list-models)");
  verify->add_option("--param", vo.params, "Model parameter k=v; values may be expressions")->take_all();
  verify->add_option("--levels", vo.levels, "Shorthand for --param levels=N");
  verify->add_option("--check", vo.checks, "Check name or 'all' (repeatable)")->take_all();
  verify->add_option("--samples", vo.samples, "Sample points per check (default 200)");
  verify->add_option("--seed", vo.seed, "Sampling seed (default 42)");
  verify->add_option("--tol", vo.tolerances, "Tolerance override check=real (repeatable)")->take_all();
  verify->add_flag("--json", vo.json, "Emit the JSON report");
  verify->add_option("--out", vo.out, "Write the report to a file instead of standard output");

  bool list_json = false;
  auto* list = app.add_subcommand("list-models", "List catalog models and their parameters");
  list->add_flag("--json", list_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (*verify) return run_verify(vo);
  return run_list(list_json);
}
