#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpk/chart.hpp"

namespace wpk {

// Conclusion checks versus hypothesis checks of a conditional statement;
// a failed hypothesis is reported as its own failure class.
enum class CheckRole { Identity, Hypothesis };

struct CheckRecord {
  std::string name;
  std::string anchor;  // the identity being tested, in formula form
  CheckRole role = CheckRole::Identity;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<double> witness;  // coordinates of the worst point
  std::string note;
  bool extra_ok = true;  // pass condition beyond max_residual <= tolerance

  void set_tolerance(double t) {
    tolerance = t;
    pass = extra_ok && max_residual <= t;
  }
};

// Max-residual accumulator. NaN counts as +inf; ties keep the earliest point.
class ResidualTracker {
 public:
  void update(double residual, const Point& pt);
  void update(double residual, const std::vector<double>& coords);
  double max() const { return max_; }
  const std::vector<double>& witness() const { return witness_; }
  CheckRecord record(std::string name, std::string anchor, double tolerance,
                     CheckRole role = CheckRole::Identity) const;

 private:
  double max_ = 0.0;
  std::vector<double> witness_;
};

struct VerificationReport {
  std::vector<CheckRecord> checks;

  bool pass() const;
  void append(const VerificationReport& other, const std::string& prefix = {});
  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  const CheckRecord* find(const std::string& name) const;
  // Residual of a named check; throws when absent.
  double residual(const std::string& name) const;
};

// Everything the CLI serialises for one run.
struct RunReport {
  std::string version;
  std::string model;
  std::vector<std::pair<std::string, std::string>> params;  // echoed verbatim, sorted by key
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  VerificationReport report;
  std::optional<double> kappa;
  std::optional<double> contact_constant;
  std::optional<double> alpha;

  bool pass() const { return report.pass(); }
};

// 17 significant digits, "null" for non-finite values.
std::string format_real(double v);

std::string to_json(const RunReport& r);
std::string to_text(const RunReport& r);

}  // namespace wpk
