#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qrlab {

struct RatioEntry {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Outcome of one inequality check. Per-entry values are stored in input
/// order; aggregates are recomputed serially by finalize().
struct RatioReport {
  std::string name;
  std::vector<RatioEntry> per_entry;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::string argmax;
  double symmetry_drift = 0.0;
  /// Named measured quantities (refinement change, fitted slopes, constants).
  std::map<std::string, double> metrics;
  /// Echo of the experiment parameters.
  std::map<std::string, std::string> params;

  /// Appends an entry; throws GuardError unless lhs >= 0 and rhs > 0.
  void add(std::string id, double lhs, double rhs);
  void finalize();
};

struct ConvergenceReport {
  std::string name;
  std::vector<double> t_values;
  std::vector<double> sup_errors;
  double probe_r_min = 0.0;
  double probe_r_max = 0.0;
  bool monotone_tail = false;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> params;
};

std::string to_json(const RatioReport& r, const std::string& config_echo = "{}");
std::string to_json(const ConvergenceReport& r, const std::string& config_echo = "{}");
/// Columns entry_id, lhs, rhs, ratio; 17 significant digits.
void write_csv(std::ostream& out, const RatioReport& r);
/// Columns t, sup_error.
void write_csv(std::ostream& out, const ConvergenceReport& r);

/// Library version string embedded in reports.
const char* version();

}  // namespace qrlab
