#include "qrlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"

namespace qrlab {

double GridSpec::freq_spacing() const { return std::numbers::pi / half_width; }

double GridSpec::nyquist() const { return n * std::numbers::pi / (2.0 * half_width); }

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
  return s;
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }

double GridSpec::freq_cell_volume() const { return std::pow(freq_spacing(), dim); }

double GridSpec::frequency(int k) const { return signed_frequency_index(k) * freq_spacing(); }

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t GridSpec::flatten(std::array<int, 3> idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim; ++d) flat = flat * n + static_cast<std::size_t>(idx[d]);
  return flat;
}

std::array<double, 3> GridSpec::point(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) x[d] = coordinate(idx[d]);
  return x;
}

std::array<double, 3> GridSpec::frequency_point(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) xi[d] = frequency(idx[d]);
  return xi;
}

GridSpec make_grid(int dim, int n, double half_width) {
  if (dim < 1 || dim > 3) throw ParameterError("grid: dim must be 1, 2 or 3");
  if (n < 8 || (n & (n - 1)) != 0)
    throw ParameterError("grid: n must be a power of two >= 8, got " + std::to_string(n));
  if (!(half_width > 0.0)) throw ParameterError("grid: half_width must be positive");
  if (dim == 3 && n > 64) throw ParameterError("grid: d = 3 supports at most n = 64");
  return GridSpec{dim, n, half_width};
}

std::string to_string(Domain d) { return d == Domain::space ? "space" : "frequency"; }

Domain domain_from_string(const std::string& s) {
  if (s == "space") return Domain::space;
  if (s == "frequency") return Domain::frequency;
  throw ParameterError("unknown domain tag: " + s);
}

GridFunction::GridFunction(GridSpec spec, Domain domain)
    : spec_(spec), domain_(domain), values_(spec.size()) {}

GridFunction::GridFunction(GridSpec spec, Domain domain, std::vector<cplx> values)
    : spec_(spec), domain_(domain), values_(std::move(values)) {
  if (values_.size() != spec_.size()) throw ParameterError("GridFunction: size mismatch");
}

double GridFunction::l2_norm_squared() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  if (domain_ == Domain::space) return s * spec_.cell_volume();
  return s * spec_.freq_cell_volume() / std::pow(2.0 * std::numbers::pi, spec_.dim);
}

double GridFunction::l2_norm() const { return std::sqrt(l2_norm_squared()); }

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction& GridFunction::operator*=(cplx c) {
  for (auto& v : values_) v *= c;
  return *this;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (other.spec_ != spec_ || other.domain_ != domain_)
    throw ParameterError("GridFunction: incompatible operands");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (other.spec_ != spec_ || other.domain_ != domain_)
    throw ParameterError("GridFunction: incompatible operands");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction operator*(cplx c, GridFunction f) { return f *= c; }
GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }

GridFunction abs(const GridFunction& f) {
  GridFunction g(f.spec(), f.domain());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::abs(f[i]);
  return g;
}

namespace {

// (-1)^{k_1 + ... + k_d}: the phase that moves the lattice origin from the
// corner to the center of the box.
void apply_center_phase(const GridSpec& spec, std::span<cplx> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = spec.unflatten(i);
    int parity = 0;
    for (int d = 0; d < spec.dim; ++d) parity += idx[d];
    if (parity & 1) v[i] = -v[i];
  }
}

}  // namespace

GridFunction dft_forward(const GridFunction& f) {
  if (f.domain() != Domain::space) throw ParameterError("dft_forward: expects a space-domain field");
  GridFunction out(f.spec(), Domain::frequency, f.data());
  fft::forward(f.spec(), out.values());
  apply_center_phase(f.spec(), out.values());
  out *= f.spec().cell_volume();
  return out;
}

GridFunction dft_inverse(const GridFunction& f_hat) {
  if (f_hat.domain() != Domain::frequency)
    throw ParameterError("dft_inverse: expects a frequency-domain field");
  const GridSpec& spec = f_hat.spec();
  GridFunction out(spec, Domain::space, f_hat.data());
  apply_center_phase(spec, out.values());
  fft::inverse(spec, out.values());
  out *= std::pow(2.0 * spec.half_width, -spec.dim);
  return out;
}

const std::vector<double>& regularized_radii(const GridSpec& spec) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const std::vector<double>>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(spec.dim, spec.n, spec.half_width);
  if (auto it = cache.find(key); it != cache.end()) return *it->second;
  auto radii = std::make_shared<std::vector<double>>(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto x = spec.point(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    (*radii)[i] = r > 0.0 ? r : 0.5 * spec.spacing();
  }
  cache.emplace(key, radii);
  return *radii;
}

std::size_t AnnulusDecomposition::points_in(int l) const {
  return static_cast<std::size_t>(std::count(label.begin(), label.end(), l));
}

std::vector<double> AnnulusDecomposition::mask(int l) const {
  std::vector<double> m(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) m[i] = label[i] == l ? 1.0 : 0.0;
  return m;
}

std::size_t origin_index(const GridSpec& spec) {
  return spec.flatten({spec.n / 2, spec.n / 2, spec.n / 2});
}

double origin_cell_power(const GridSpec& spec, double a) {
  if (!(a > -spec.dim)) throw ParameterError("origin_cell_power: need a > -d");
  const double h = spec.spacing();
  if (spec.dim == 1) return std::pow(0.5 * h, a) / (a + 1.0);
  if (spec.dim == 2) {
    // 8 triangles 0 <= theta <= pi/4, r <= h / (2 cos theta); Simpson in theta
    const int n = 4096;
    const double dth = 0.25 * std::numbers::pi / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += w * std::pow(0.5 * h / std::cos(k * dth), a + 2.0);
    }
    acc *= dth / 3.0;
    return 8.0 * acc / ((a + 2.0) * h * h);
  }
  const double R = std::cbrt(3.0 / (4.0 * std::numbers::pi)) * h;
  return 4.0 * std::numbers::pi * std::pow(R, a + 3.0) / ((a + 3.0) * h * h * h);
}

AnnulusDecomposition annuli(const GridSpec& spec, int l_min, int l_max, bool absorb_core) {
  if (l_min > l_max) throw ParameterError("annuli: l_min > l_max");
  if (std::ldexp(1.0, l_max + 1) > spec.half_width * (1.0 + 1e-12))
    throw ParameterError("annuli: annulus " + std::to_string(l_max) + " exceeds the box");
  AnnulusDecomposition dec;
  dec.l_min = l_min;
  dec.l_max = l_max;
  dec.label.resize(spec.size());
  const auto& radii = regularized_radii(spec);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    int l = static_cast<int>(std::floor(std::log2(radii[i])));
    // log2 rounding at exact powers of two
    if (std::ldexp(1.0, l + 1) <= radii[i]) ++l;
    if (std::ldexp(1.0, l) > radii[i]) --l;
    if (absorb_core && l < l_min) l = l_min;
    dec.label[i] = (l >= l_min && l <= l_max) ? l : AnnulusDecomposition::kUncovered;
  }
  return dec;
}

AnnulusDecomposition covering_annuli(const GridSpec& spec) {
  const int l_min = static_cast<int>(std::floor(std::log2(0.5 * spec.spacing())));
  const int l_max = static_cast<int>(std::floor(std::log2(spec.half_width))) - 1;
  return annuli(spec, l_min, l_max);
}

double spectral_edge_fraction(const GridFunction& f) {
  const GridFunction f_hat = f.domain() == Domain::space ? dft_forward(f) : f;
  const GridSpec& spec = f.spec();
  const double cut = 0.75 * spec.nyquist();
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < f_hat.size(); ++i) {
    const double e = std::norm(f_hat[i]);
    total += e;
    const auto xi = spec.frequency_point(i);
    bool outer = false;
    for (int d = 0; d < spec.dim; ++d) outer = outer || std::abs(xi[d]) > cut;
    if (outer) edge += e;
  }
  return total > 0.0 ? edge / total : 0.0;
}

double boundary_max(const GridFunction& f) {
  const GridSpec& spec = f.spec();
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = spec.unflatten(i);
    bool edge = false;
    for (int d = 0; d < spec.dim; ++d) edge = edge || idx[d] == 0 || idx[d] == spec.n - 1;
    if (edge) m = std::max(m, std::abs(f[i]));
  }
  return m;
}

}  // namespace qrlab
