#include "iex/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace iex {

namespace {
using ordered_json = nlohmann::ordered_json;

// 17 significant digits, matching the CSV convention.
ordered_json number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return ordered_json::parse(buf);
}
}  // namespace

std::string gof_reports_to_json(const std::vector<GofReport>& reports,
                                const std::string& config_hash) {
  ordered_json doc;
  doc["config_hash"] = config_hash;
  doc["version"] = kVersion;
  doc["reports"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["test_name"] = r.test_name;
    j["n"] = r.n;
    j["statistic"] = number(r.statistic);
    j["threshold"] = number(r.threshold);
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    j["notes"] = r.notes;
    doc["reports"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string json_diagnostic(const std::string& kind, const std::string& message, int exit_code) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = exit_code;
  return j.dump() + "\n";
}

}  // namespace iex
