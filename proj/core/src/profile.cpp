#include "qrlab/profile.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/smooth.hpp"
#include "qrlab/spaces.hpp"

namespace qrlab {

namespace {

double pow2_at_least(double x) { return std::exp2(std::ceil(std::log2(x))); }

double default_window(double lo, double hi) {
  return std::max(8.0, pow2_at_least(4.0 * std::max(std::abs(lo), std::abs(hi))));
}

void check_resolution(double resolution) {
  if (!(resolution >= 1.0) || std::exp2(std::round(std::log2(resolution))) != resolution)
    throw ParameterError("profile resolution must be a power of two >= 1");
}

}  // namespace

Profile1D::Profile1D(std::function<cplx(double)> formula, double support_lo, double support_hi,
                     double resolution, double window)
    : formula_(std::move(formula)), support_lo_(support_lo), support_hi_(support_hi) {
  check_resolution(resolution);
  if (!(support_hi >= support_lo)) throw ParameterError("profile: empty support");
  window_ = window > 0.0 ? window : default_window(support_lo, support_hi);
  if (std::max(std::abs(support_lo), std::abs(support_hi)) >= window_)
    throw ParameterError("profile: support does not fit in the window");
  const auto n = static_cast<std::size_t>(2.0 * window_ * resolution);
  samples_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = position(i);
    samples_[i] = (r >= support_lo_ && r <= support_hi_) ? formula_(r) : cplx(0.0, 0.0);
  }
}

Profile1D::Profile1D(std::vector<cplx> samples, double window, double support_lo,
                     double support_hi)
    : samples_(std::move(samples)), window_(window), support_lo_(support_lo),
      support_hi_(support_hi) {
  if (!std::has_single_bit(samples_.size()))
    throw ParameterError("profile: sample count must be a power of two");
  if (!(window_ > 0.0)) throw ParameterError("profile: window must be positive");
}

cplx Profile1D::operator()(double r) const {
  if (r < support_lo_ || r > support_hi_) return 0.0;
  if (formula_) return formula_(r);
  if (r < -window_ || r >= window_) return 0.0;
  const double x = (r + window_) / spacing();
  const double fl = std::floor(x);
  const double u = x - fl;
  if (u == 0.0) return samples_[static_cast<std::size_t>(fl) % samples_.size()];
  const long base = static_cast<long>(fl) - 2;
  const long n = static_cast<long>(samples_.size());
  cplx acc = 0.0;
  for (int k = 0; k < 6; ++k) {
    double w = 1.0;
    for (int m = 0; m < 6; ++m)
      if (m != k) w *= (u - (m - 2)) / static_cast<double>(k - m);
    acc += w * samples_[((base + k) % n + n) % n];
  }
  return acc;
}

double Profile1D::sup_norm() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Profile1D::l2_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::norm(v);
  return std::sqrt(s * spacing());
}

Profile1D operator*(cplx c, const Profile1D& h) {
  std::vector<cplx> v = h.samples();
  for (auto& x : v) x *= c;
  if (h.has_formula()) {
    Profile1D out([c, h](double r) { return c * h(r); }, h.support_lo(), h.support_hi(),
                  h.resolution(), h.window());
    out.kind = h.kind;
    out.params = h.params;
    out.sequence = h.sequence;
    return out;
  }
  Profile1D out(std::move(v), h.window(), h.support_lo(), h.support_hi());
  out.kind = h.kind;
  out.params = h.params;
  return out;
}

Profile1D operator+(const Profile1D& a, const Profile1D& b) {
  if (a.size() != b.size() || a.window() != b.window())
    throw ParameterError("profile sum: sampling mismatch");
  const double lo = std::min(a.support_lo(), b.support_lo());
  const double hi = std::max(a.support_hi(), b.support_hi());
  if (a.has_formula() && b.has_formula())
    return Profile1D([a, b](double r) { return a(r) + b(r); }, lo, hi, a.resolution(), a.window());
  std::vector<cplx> v = a.samples();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.samples()[i];
  return Profile1D(std::move(v), a.window(), lo, hi);
}

double riesz_value(double lambda, double gamma, double r) {
  if (r >= 1.0 || r < 0.0) return 0.0;
  const double x = 1.0 - r;
  return std::pow(x, lambda) * std::pow(1.0 - std::log(x), -gamma);
}

Profile1D riesz_profile(double lambda, double gamma, double resolution, bool cutoff) {
  if (!(lambda > -0.5)) throw ParameterError("riesz_profile: lambda must exceed -1/2");
  if (!(gamma >= 0.0)) throw ParameterError("riesz_profile: gamma must be >= 0");
  auto f = [lambda, gamma, cutoff](double r) {
    const double v = riesz_value(lambda, gamma, r);
    return cplx(cutoff ? smooth::chi(r) * v : v, 0.0);
  };
  Profile1D h(f, cutoff ? 0.5 : 0.0, 1.0, resolution);
  h.kind = cutoff ? "riesz_cutoff" : "riesz";
  h.params = {{"lambda", lambda}, {"gamma", gamma}};
  return h;
}

Profile1D bump_profile(double center, double width, double resolution) {
  if (!(width > 0.0)) throw ParameterError("bump_profile: width must be positive");
  if (!(center - width > 0.0)) throw ParameterError("bump_profile: support must avoid 0");
  Profile1D h([center, width](double r) { return cplx(smooth::bump((r - center) / width), 0.0); },
              center - width, center + width, resolution);
  h.kind = "bump";
  h.params = {{"center", center}, {"width", width}};
  return h;
}

Profile1D sequence_profile(const std::vector<double>& a, double lambda, double resolution) {
  if (!(lambda > -0.5)) throw ParameterError("sequence_profile: lambda must exceed -1/2");
  int last = 2;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0.0) last = static_cast<int>(i) + 2;
  const double lo = 1.0 - 0.5 * 0.25;
  const double hi = 1.0 - 0.25 * std::ldexp(1.0, -last);
  Profile1D h(
      [a, lambda](double tau) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i] == 0.0) continue;
          const int j = static_cast<int>(i) + 2;
          s += a[i] * std::exp2(-j * lambda) * smooth::sequence_bump(std::ldexp(1.0 - tau, j));
        }
        return cplx(s, 0.0);
      },
      lo, hi, resolution);
  h.kind = "sequence";
  h.params = {{"lambda", lambda}};
  h.sequence = a;
  return h;
}

Profile1D formula_profile(std::function<cplx(double)> formula, double lo, double hi,
                          double resolution) {
  Profile1D h(std::move(formula), lo, hi, resolution);
  h.kind = "formula";
  return h;
}

namespace {

struct Spectrum {
  std::vector<cplx> values;  // Delta * FFT(samples), phase dropped
  std::vector<double> omega;
  double d_omega = 0.0;
};

Spectrum spectrum_of(const Profile1D& h) {
  Spectrum s;
  s.values = h.samples();
  fft::forward_1d(s.values);
  const std::size_t n = s.values.size();
  s.omega.resize(n);
  s.d_omega = std::numbers::pi / h.window();
  for (std::size_t k = 0; k < n; ++k) {
    const long sk = k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    s.omega[k] = sk * s.d_omega;
    s.values[k] *= h.spacing();
  }
  return s;
}

// (2 pi)^{-1} sum |w(omega_k) h_hat_k|^2 d_omega
template <class W>
double spectral_mass(const Spectrum& s, W&& weight) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double w = weight(s.omega[k]);
    if (w != 0.0) acc += w * w * std::norm(s.values[k]);
  }
  return acc * s.d_omega / (2.0 * std::numbers::pi);
}

}  // namespace

int max_block_index(const Profile1D& h) {
  const double nyquist = std::numbers::pi * h.resolution();
  return static_cast<int>(std::floor(std::log2(nyquist)));
}

std::vector<double> besov_blocks(const Profile1D& h, int j_max) {
  if (j_max < 0) throw ParameterError("besov_blocks: j_max must be >= 0");
  if (j_max > max_block_index(h))
    throw GuardError("besov: block " + std::to_string(j_max) +
                     " exceeds the profile's Nyquist frequency");
  const Spectrum s = spectrum_of(h);
  std::vector<double> out(j_max + 1);
  for (int j = 0; j <= j_max; ++j)
    out[j] = std::sqrt(spectral_mass(s, [j](double w) { return smooth::zeta(j, w); }));
  return out;
}

double besov_norm(const Profile1D& h, double alpha, double s, std::optional<int> j_max) {
  if (!(alpha >= 0.0)) throw ParameterError("besov_norm: alpha must be >= 0");
  if (!(s >= 1.0)) throw ParameterError("besov_norm: s must be >= 1");
  const auto blocks = besov_blocks(h, j_max.value_or(max_block_index(h)));
  double acc = 0.0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const double term = std::exp2(j * alpha) * blocks[j];
    acc = std::isinf(s) ? std::max(acc, term) : acc + std::pow(term, s);
  }
  return std::isinf(s) ? acc : std::pow(acc, 1.0 / s);
}

VjDecomposition vj_decompose(const Profile1D& h, int j_max) {
  if (j_max < 0) throw ParameterError("vj_decompose: j_max must be >= 0");
  if (j_max > max_block_index(h))
    throw GuardError("vj_decompose: j_max " + std::to_string(j_max) + " exceeds Nyquist");
  const Spectrum s = spectrum_of(h);
  VjDecomposition dec;
  dec.j_max = j_max;
  const std::size_t n = s.values.size();
  for (int j = 0; j <= j_max; ++j) {
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = smooth::zeta(j, s.omega[k]) * s.values[k];
    fft::inverse_1d(v);
    const double scale = 1.0 / (n * h.spacing());
    for (auto& x : v) x *= scale;
    Profile1D c(std::move(v), h.window(), -h.window(), h.window());
    c.kind = "vj";
    c.params = {{"j", j}};
    dec.components.push_back(std::move(c));
  }
  dec.tail_l2 = std::sqrt(
      spectral_mass(s, [j_max](double w) { return 1.0 - smooth::zeta0(std::ldexp(w, -j_max)); }));
  return dec;
}

double spectral_leakage(const Profile1D& component, int j) {
  const Spectrum s = spectrum_of(component);
  const double lo = j == 0 ? 0.0 : std::ldexp(1.0, j - 2);
  const double hi = std::ldexp(1.0, j);
  const double total = spectral_mass(s, [](double) { return 1.0; });
  if (total == 0.0) return 0.0;
  const double outside = spectral_mass(s, [lo, hi](double w) {
    const double a = std::abs(w);
    return (a >= lo && a <= hi) ? 0.0 : 1.0;
  });
  return outside / total;
}

double lambda_jb(const Profile1D& component, double b) {
  if (!(b > 0.0)) throw ParameterError("lambda_jb: b must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < component.size(); ++i) {
    const double r = component.position(i);
    if (r <= 0.0) continue;
    acc += std::norm(component.samples()[i]) * std::pow(r, b - 1.0);
  }
  return std::sqrt(acc * component.spacing());
}

Profile1D rescale_homogeneity(const Profile1D& h, double beta) {
  if (!(beta > 0.0)) throw ParameterError("rescale_homogeneity: beta must be positive");
  if (!(h.support_lo() > 0.0)) throw ParameterError("rescale_homogeneity: support touches 0");
  if (beta == 1.0) return h;
  const double lo = std::pow(h.support_lo(), 1.0 / beta);
  const double hi = std::pow(h.support_hi(), 1.0 / beta);
  Profile1D out([h, beta](double s) { return s > 0.0 ? h(std::pow(s, beta)) : cplx(0.0, 0.0); },
                lo, hi, h.resolution());
  out.kind = h.kind + "_rescaled";
  out.params = h.params;
  out.params["beta"] = beta;
  return out;
}

void write_csv(std::ostream& out, const Profile1D& h) {
  nlohmann::ordered_json j;
  j["support"] = {h.support_lo(), h.support_hi()};
  j["params"] = h.params;
  if (!h.sequence.empty()) j["params"]["sequence"] = h.sequence;
  j["kind"] = h.kind;
  j["resolution"] = h.resolution();
  j["window"] = h.window();
  out << "# " << j.dump() << "\nr,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double r = h.position(i);
    if (r < h.support_lo() || r > h.support_hi()) continue;
    out << r << "," << h.samples()[i].real() << "," << h.samples()[i].imag() << "\n";
  }
}

Kernel1D kernel_1d(const Profile1D& h, double beta, double R, int n_r,
                   const KernelOptions& options) {
  if (!(beta > 0.0)) throw ParameterError("kernel_1d: beta must be positive");
  if (!(R > 0.0) || n_r < 2 || n_r % 2 != 0)
    throw ParameterError("kernel_1d: need R > 0 and an even n_r >= 2");
  const double dr = 2.0 * R / n_r;
  const double t_lo = std::pow(std::max(h.support_lo(), 0.0), 1.0 / beta);
  const double t_hi = std::pow(h.support_hi(), 1.0 / beta);
  const double period = 2.0 * std::numbers::pi / dr;
  if (!(t_hi - t_lo < period))
    throw GuardError("kernel_1d: r spacing too coarse for the profile support");
  const double max_step = options.max_t_step > 0.0 ? options.max_t_step : h.spacing();
  const double n_min =
      std::max(static_cast<double>(n_r) * std::max(1.0, options.period_factor), period / max_step);
  const auto n = static_cast<std::size_t>(pow2_at_least(n_min));
  const double dt = period / n;
  auto g = [&](double t) { return t > 0.0 ? h(beta == 1.0 ? t : std::pow(t, beta)) : cplx(0.0); };
  std::vector<cplx> buf(n);
  for (std::size_t m = 0; m < n; ++m) buf[m] = g(t_lo + m * dt);
  fft::inverse_1d(buf);

  Kernel1D K;
  K.weight_dim = options.weight_dim;
  K.r.resize(n_r);
  K.values.resize(n_r);
  for (int i = 0; i < n_r; ++i) {
    const long k = i - n_r / 2;
    const double r = k * dr;
    const std::size_t idx = static_cast<std::size_t>((k % static_cast<long>(n) + n) % n);
    K.r[i] = r;
    K.values[i] = dt / (2.0 * std::numbers::pi) * std::polar(1.0, r * t_lo) * buf[idx];
  }

  // direct sums on a twice finer t grid at pseudo-random r
  double kmax = 0.0;
  for (const auto& v : K.values) kmax = std::max(kmax, std::abs(v));
  if (kmax == 0.0) return K;
  std::mt19937_64 gen(0x5eed);
  const std::size_t fine = 2 * n;
  const double ft = dt / 2.0;
  std::vector<cplx> gf(fine);
  for (std::size_t m = 0; m < fine; ++m) gf[m] = g(t_lo + m * ft);
  double worst = 0.0;
  for (int probe = 0; probe < 16; ++probe) {
    const int i = static_cast<int>(gen() % static_cast<unsigned>(n_r));
    const double r = K.r[i];
    const cplx step = std::polar(1.0, r * ft);
    cplx phase = std::polar(1.0, r * t_lo);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < fine; ++m) {
      acc += gf[m] * phase;
      phase *= step;
      if ((m & 1023) == 1023) phase = std::polar(1.0, r * (t_lo + (m + 1) * ft));
    }
    acc *= ft / (2.0 * std::numbers::pi);
    worst = std::max(worst, std::abs(acc - K.values[i]));
  }
  if (worst > options.guard_tolerance * kmax)
    throw GuardError("kernel_1d: aliasing guard failed (relative mismatch " +
                     std::to_string(worst / kmax) + ")");
  return K;
}

Kernel1D kappa_lg(double lambda, double gamma, double R, int n_r, const KernelOptions& options,
                  double resolution) {
  return kernel_1d(riesz_profile(lambda, gamma, resolution, true), 1.0, R, n_r, options);
}

double mu_lorentz_norm(const std::vector<double>& r, const std::vector<double>& g, int d, double u,
                       double s) {
  if (r.empty() || r.size() != g.size()) throw ParameterError("mu_lorentz_norm: empty kernel");
  if (!(u > 1.0)) throw ParameterError("mu_lorentz_norm: u must exceed 1");
  const double dr = r.size() > 1 ? r[1] - r[0] : 1.0;
  std::vector<double> masses(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) masses[i] = std::pow(1.0 + std::abs(r[i]), d - 1) * dr;
  return step_lorentz_norm(g, masses, u, s);
}

double mu_lorentz_norm(const Kernel1D& K, double u, double s) {
  const int d = K.weight_dim;
  std::vector<double> g(K.values.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::pow(1.0 + std::abs(K.r[i]), -0.5 * (d - 1)) * std::abs(K.values[i]);
  return mu_lorentz_norm(K.r, g, d, u, s);
}

}  // namespace qrlab
