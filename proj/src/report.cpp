#include "wpk/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace wpk {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string format_coords(const std::vector<double>& coords) {
  std::string out = "[";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i != 0) out += ", ";
    out += format_real(coords[i]);
  }
  return out + "]";
}

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : "null"; }

const char* role_name(CheckRole r) { return r == CheckRole::Hypothesis ? "hypothesis" : "identity"; }

}  // namespace

void ResidualTracker::update(double residual, const std::vector<double>& coords) {
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  if (witness_.empty() || residual > max_) {
    max_ = residual;
    witness_ = coords;
  }
}

void ResidualTracker::update(double residual, const Point& pt) { update(residual, pt.coords); }

CheckRecord ResidualTracker::record(std::string name, std::string anchor, double tolerance, CheckRole role) const {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.role = role;
  r.max_residual = max_;
  r.tolerance = tolerance;
  r.pass = max_ <= tolerance;
  r.witness = witness_;
  return r;
}

bool VerificationReport::pass() const {
  for (const CheckRecord& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

void VerificationReport::append(const VerificationReport& other, const std::string& prefix) {
  for (CheckRecord c : other.checks) {
    if (!prefix.empty()) c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
}

const CheckRecord* VerificationReport::find(const std::string& name) const {
  for (const CheckRecord& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double VerificationReport::residual(const std::string& name) const {
  const CheckRecord* c = find(name);
  if (c == nullptr) throw Error("no check named '" + name + "' in report");
  return c->max_residual;
}

std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const RunReport& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"version\": " << quote(r.version) << ",\n";
  os << "  \"model\": {\n    \"name\": " << quote(r.model) << ",\n    \"params\": {";
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    os << (i == 0 ? "" : ",") << "\n      " << quote(r.params[i].first) << ": " << quote(r.params[i].second);
  }
  os << (r.params.empty() ? "}" : "\n    }") << "\n  },\n";
  os << "  \"seed\": " << r.seed << ",\n";
  os << "  \"samples\": " << r.samples << ",\n";
  os << "  \"checks\": [";
  for (std::size_t i = 0; i < r.report.checks.size(); ++i) {
    const CheckRecord& c = r.report.checks[i];
    os << (i == 0 ? "" : ",") << "\n    {\n";
    os << "      \"name\": " << quote(c.name) << ",\n";
    os << "      \"anchor\": " << quote(c.anchor) << ",\n";
    os << "      \"role\": " << quote(role_name(c.role)) << ",\n";
    os << "      \"max_residual\": " << format_real(c.max_residual) << ",\n";
    os << "      \"tolerance\": " << format_real(c.tolerance) << ",\n";
    os << "      \"pass\": " << (c.pass ? "true" : "false") << ",\n";
    os << "      \"witness_point\": " << format_coords(c.witness);
    if (!c.note.empty()) os << ",\n      \"note\": " << quote(c.note);
    os << "\n    }";
  }
  os << (r.report.checks.empty() ? "],\n" : "\n  ],\n");
  os << "  \"pass\": " << (r.pass() ? "true" : "false") << ",\n";
  os << "  \"calibrated\": {\n";
  os << "    \"kappa\": " << format_optional(r.kappa) << ",\n";
  os << "    \"c\": " << format_optional(r.contact_constant) << ",\n";
  os << "    \"alpha\": " << format_optional(r.alpha) << "\n";
  os << "  }\n}\n";
  return os.str();
}

std::string to_text(const RunReport& r) {
  std::ostringstream os;
  os << "wpk " << r.version << "  model " << r.model;
  for (const auto& [k, v] : r.params) os << "  " << k << "=" << v;
  os << "\nseed " << r.seed << "  samples " << r.samples << "\n";
  for (const CheckRecord& c : r.report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-44s residual %-12.4g tol %-9.3g", c.pass ? "ok" : "FAIL",
                  c.name.c_str(), c.max_residual, c.tolerance);
    os << line;
    if (c.role == CheckRole::Hypothesis) os << " [hypothesis]";
    if (!c.pass) os << "  at " << format_coords(c.witness);
    os << "\n";
    if (!c.pass && !c.anchor.empty()) os << "     expected: " << c.anchor << "\n";
    if (!c.note.empty()) os << "     " << c.note << "\n";
  }
  if (r.kappa) os << "kappa = " << format_real(*r.kappa) << "\n";
  if (r.contact_constant) os << "c = " << format_real(*r.contact_constant) << "\n";
  if (r.alpha) os << "alpha = " << format_real(*r.alpha) << "\n";
  os << (r.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace wpk
