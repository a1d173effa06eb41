#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace qrlab {

using cplx = std::complex<double>;

/// Uniform grid on [-L, L)^d with n points per axis. Lattice point j on an
/// axis sits at x_j = -L + j * spacing, so the origin is at j = n/2. The dual
/// lattice is unshifted: index k maps to xi = k * freq_spacing for k < n/2
/// and to (k - n) * freq_spacing otherwise.
struct GridSpec {
  int dim = 2;
  int n = 256;
  double half_width = 64.0;

  double spacing() const { return 2.0 * half_width / n; }
  double freq_spacing() const;
  /// Largest representable |xi_i|, n * pi / (2L).
  double nyquist() const;
  std::size_t size() const;
  double cell_volume() const;
  double freq_cell_volume() const;

  double coordinate(int j) const { return -half_width + j * spacing(); }
  double frequency(int k) const;
  int signed_frequency_index(int k) const { return k < n / 2 ? k : k - n; }

  /// Point (coordinates padded with zeros up to 3) for a flat row-major index.
  std::array<double, 3> point(std::size_t flat) const;
  std::array<double, 3> frequency_point(std::size_t flat) const;
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(std::array<int, 3> idx) const;

  bool operator==(const GridSpec&) const = default;
};

/// Validated constructor. Throws ParameterError on non power-of-two n, n < 8,
/// dim outside {1,2,3}, non-positive half width, or d = 3 with n > 64.
GridSpec make_grid(int dim, int n, double half_width);

enum class Domain { space, frequency };
std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

/// Complex field sampled on a GridSpec, tagged with the domain it lives in.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridSpec spec, Domain domain);
  GridFunction(GridSpec spec, Domain domain, std::vector<cplx> values);

  const GridSpec& spec() const { return spec_; }
  Domain domain() const { return domain_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  std::vector<cplx>& data() { return values_; }
  const std::vector<cplx>& data() const { return values_; }
  std::size_t size() const { return values_.size(); }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  /// Squared L2 norm with the measure of the current domain (cell volume in
  /// space, (2 pi)^-d times the frequency cell volume in frequency).
  double l2_norm_squared() const;
  double l2_norm() const;
  double max_abs() const;

  GridFunction& operator*=(cplx c);
  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);

 private:
  GridSpec spec_{};
  Domain domain_ = Domain::space;
  std::vector<cplx> values_;
};

GridFunction operator*(cplx c, GridFunction f);
GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
/// Pointwise modulus as a real-valued space field.
GridFunction abs(const GridFunction& f);

/// Continuum-normalized transforms: f_hat(xi) = int f(x) e^{-i x.xi} dx and
/// f(x) = (2 pi)^-d int f_hat(xi) e^{i x.xi} d xi, realized on the lattices.
GridFunction dft_forward(const GridFunction& f);
GridFunction dft_inverse(const GridFunction& f_hat);

/// Samples a function of position.
template <class F>
GridFunction sample(const GridSpec& spec, F&& fn) {
  GridFunction g(spec, Domain::space);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = fn(spec.point(i));
  return g;
}

/// Samples a function of frequency into a frequency-domain field.
template <class F>
GridFunction sample_spectrum(const GridSpec& spec, F&& fn) {
  GridFunction g(spec, Domain::frequency);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = fn(spec.frequency_point(i));
  return g;
}

/// |x| of every lattice point, with the origin cell regularized to radius
/// spacing/2. Shared, cached per spec.
const std::vector<double>& regularized_radii(const GridSpec& spec);

/// Flat index of the lattice point at the origin.
std::size_t origin_index(const GridSpec& spec);

/// Cell average of |x|^a over the origin cell (a > -d): exact for the square
/// cell in d <= 2, equal-volume ball in d = 3.
double origin_cell_power(const GridSpec& spec, double a);

/// |x_i|^a at lattice point i, with origin_cell_power at the origin.
inline double power_weight(const std::vector<double>& radii, std::size_t i, std::size_t origin,
                           double origin_value, double a) {
  return i == origin ? origin_value : std::pow(radii[i], a);
}

/// Dilation f -> f(2^m .) evaluated exactly from a callable; the grid stays
/// fixed.
template <class F>
GridFunction sample_dilated(const GridSpec& spec, int m, F&& fn) {
  const double s = std::ldexp(1.0, m);
  return sample(spec, [&](const std::array<double, 3>& x) {
    return fn(std::array<double, 3>{s * x[0], s * x[1], s * x[2]});
  });
}

/// Annuli A_l = {2^l <= |x| < 2^{l+1}} on the lattice; cell centers decide
/// membership, the origin cell counts as radius spacing/2.
struct AnnulusDecomposition {
  int l_min = 0;
  int l_max = 0;
  /// label[i] = l for lattice point i, or kUncovered.
  std::vector<int> label;
  static constexpr int kUncovered = std::numeric_limits<int>::min();

  int count() const { return l_max - l_min + 1; }
  std::size_t points_in(int l) const;
  std::vector<double> mask(int l) const;
};

/// Throws ParameterError when 2^{l_max+1} > half_width or l_min > l_max.
/// With absorb_core the innermost annulus is the whole ball |x| < 2^{l_min+1},
/// which keeps dilated copies index-shift equivalent.
AnnulusDecomposition annuli(const GridSpec& spec, int l_min, int l_max, bool absorb_core = false);

/// Annuli covering everything from the origin cell out to the largest
/// annulus that fits in the box.
AnnulusDecomposition covering_annuli(const GridSpec& spec);

/// Fraction of space-side spectral energy that sits near the edge of the
/// frequency box (|xi_i| > 3/4 Nyquist for some axis).
double spectral_edge_fraction(const GridFunction& f);

/// Sup of |f| on the boundary layer of the box (outermost lattice shell).
double boundary_max(const GridFunction& f);

}  // namespace qrlab
