#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wpk/models.hpp"
#include "wpk/report.hpp"

namespace wpk {

inline constexpr const char* kVersion = "0.1.0";

// Invalid configuration: unknown model, check or parameter, bad values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The configuration is valid but the model could not be constructed.
class ModelError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string model;
  std::map<std::string, std::string> params;  // values are expressions, echoed verbatim
  std::vector<std::string> checks{"all"};
  std::size_t samples = 200;
  std::uint64_t seed = 42;
  std::map<std::string, double> tolerances;  // check name or record name -> tolerance
  OutputFormat format = OutputFormat::Text;
  std::string output;  // empty: standard output
};

// JSON object with keys model, params, checks, samples, seed, tolerances,
// format, output. Unknown keys are rejected.
RunConfig parse_config(std::string_view json);

// Check vocabulary in execution order.
const std::vector<std::string>& check_names();

RunReport run(const RunConfig& config);

std::string list_models(OutputFormat format);

}  // namespace wpk
