#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qrlab/grid.hpp"

namespace qrlab {

enum class BankFamily { gaussian, modulated_gaussian, smoothed_annulus, band_limited };

std::string to_string(BankFamily f);
BankFamily bank_family_from_string(const std::string& s);

struct BankOptions {
  /// Families cycled through in order; entry i uses families[i % size].
  std::vector<BankFamily> families{BankFamily::gaussian, BankFamily::modulated_gaussian,
                                   BankFamily::smoothed_annulus, BankFamily::band_limited};
  /// Typical spatial width of localized entries; 0 selects half_width / 16.
  double scale = 0.0;
  /// Radial frequency shell [lo, hi] of band-limited entries; 0 selects
  /// [nyquist / 8, nyquist / 4].
  double shell_lo = 0.0;
  double shell_hi = 0.0;
  /// Gaussian widths are scale * 2^u, u uniform in [-sigma_spread, sigma_spread].
  double sigma_spread = 0.5;
  /// Center offset up to offset_max * sigma.
  double offset_max = 1.0;
  /// Modulation wavenumber in units of 1 / sigma.
  double modulation_lo = 1.0;
  double modulation_hi = 3.0;
  /// Annulus edge width in units of scale.
  double annulus_width_lo = 0.25;
  double annulus_width_hi = 0.4;
};

using PointFn = std::function<cplx(const std::array<double, 3>&)>;

/// One bank member. Either `space` or `spectrum` is set; both describe the
/// continuum function before normalization.
struct BankEntry {
  BankFamily family = BankFamily::gaussian;
  std::string label;
  PointFn space;
  PointFn spectrum;
  /// Factor that makes the m = 0 sample on the bank grid have unit norm.
  double normalization = 1.0;
  double shell_lo = 0.0;
  double shell_hi = 0.0;
  /// Normalized sample on the bank grid.
  GridFunction values;

  /// 2^{md/2} f(2^m x) sampled on `spec` (unit continuum norm for every m).
  GridFunction sample(const GridSpec& spec, int m = 0) const;
};

struct TestBank {
  std::uint64_t seed = 0;
  GridSpec spec;
  std::vector<BankEntry> entries;
};

/// Deterministic bank: same (spec, seed, count, options) gives bit-identical
/// entries.
TestBank make_bank(const GridSpec& spec, std::uint64_t seed, int count,
                   const BankOptions& options = {});

/// Uniform doubles in [0, 1) from raw mt19937_64 output, independent of the
/// standard library's distribution implementation.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed);
  double next();
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  int sign() { return next() < 0.5 ? -1 : 1; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qrlab
