#include "qrlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "qrlab/errors.hpp"

namespace qrlab {

using nlohmann::ordered_json;

const char* version() { return "qrlab 0.1.0"; }

void RatioReport::add(std::string id, double lhs, double rhs) {
  if (!(lhs >= 0.0) || !std::isfinite(lhs))
    throw GuardError(name + ": left side of " + id + " is not a finite nonnegative number");
  if (!(rhs > 0.0) || !std::isfinite(rhs))
    throw GuardError(name + ": right side of " + id + " is not positive");
  per_entry.push_back({std::move(id), lhs, rhs, lhs / rhs});
}

void RatioReport::finalize() {
  if (per_entry.empty()) throw GuardError(name + ": no entries");
  max_ratio = per_entry.front().ratio;
  min_ratio = per_entry.front().ratio;
  argmax = per_entry.front().id;
  for (const auto& e : per_entry) {
    if (e.ratio > max_ratio) {
      max_ratio = e.ratio;
      argmax = e.id;
    }
    min_ratio = std::min(min_ratio, e.ratio);
  }
}

namespace {

ordered_json parse_echo(const std::string& echo) {
  try {
    return ordered_json::parse(echo);
  } catch (const ordered_json::exception&) {
    return echo;
  }
}

}  // namespace

std::string to_json(const RatioReport& r, const std::string& config_echo) {
  ordered_json j;
  j["name"] = r.name;
  j["version"] = version();
  j["max_ratio"] = r.max_ratio;
  j["min_ratio"] = r.min_ratio;
  j["argmax"] = r.argmax;
  j["symmetry_drift"] = r.symmetry_drift;
  j["metrics"] = r.metrics;
  j["params"] = r.params;
  auto& entries = j["per_entry"] = ordered_json::array();
  for (const auto& e : r.per_entry)
    entries.push_back({{"entry_id", e.id}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"ratio", e.ratio}});
  j["config"] = parse_echo(config_echo);
  return j.dump(2);
}

std::string to_json(const ConvergenceReport& r, const std::string& config_echo) {
  ordered_json j;
  j["name"] = r.name;
  j["version"] = version();
  j["t_values"] = r.t_values;
  j["sup_errors"] = r.sup_errors;
  j["probe"] = {{"r_min", r.probe_r_min}, {"r_max", r.probe_r_max}};
  j["monotone_tail"] = r.monotone_tail;
  j["metrics"] = r.metrics;
  j["params"] = r.params;
  j["config"] = parse_echo(config_echo);
  return j.dump(2);
}

void write_csv(std::ostream& out, const RatioReport& r) {
  out << "entry_id,lhs,rhs,ratio\n" << std::setprecision(17);
  for (const auto& e : r.per_entry) out << e.id << "," << e.lhs << "," << e.rhs << "," << e.ratio << "\n";
}

void write_csv(std::ostream& out, const ConvergenceReport& r) {
  out << "t,sup_error\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.t_values.size(); ++i)
    out << r.t_values[i] << "," << r.sup_errors[i] << "\n";
}

}  // namespace qrlab
