#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qrlab/report.hpp"

namespace qrlab::detail {

// Ratios of one entry across a dilation family, keyed by m.
class DriftTracker {
 public:
  void record(const std::string& entry, int m, double ratio, double factor = 1.0) {
    series_[entry][m] = ratio / factor;
  }
  /// max over entries and m of |ratio_m / ratio_ref - 1|.
  double drift(int ref = 0) const {
    double worst = 0.0;
    for (const auto& [id, by_m] : series_) {
      const auto it = by_m.find(ref);
      if (it == by_m.end() || !(it->second > 0.0)) continue;
      for (const auto& [m, r] : by_m) worst = std::max(worst, std::abs(r / it->second - 1.0));
    }
    return worst;
  }

 private:
  std::map<std::string, std::map<int, double>> series_;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline double holder_dual(double q) {
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

}  // namespace qrlab::detail
