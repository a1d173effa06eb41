#include "qrlab/bank.hpp"

#include <cmath>
#include <numbers>

#include "qrlab/errors.hpp"
#include "qrlab/smooth.hpp"

namespace qrlab {

std::string to_string(BankFamily f) {
  switch (f) {
    case BankFamily::gaussian: return "gaussian";
    case BankFamily::modulated_gaussian: return "modulated_gaussian";
    case BankFamily::smoothed_annulus: return "smoothed_annulus";
    case BankFamily::band_limited: return "band_limited";
  }
  return "?";
}

BankFamily bank_family_from_string(const std::string& s) {
  for (auto f : {BankFamily::gaussian, BankFamily::modulated_gaussian,
                 BankFamily::smoothed_annulus, BankFamily::band_limited})
    if (to_string(f) == s) return f;
  throw ParameterError("unknown bank family: " + s);
}

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

double norm3(const std::array<double, 3>& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

std::array<double, 3> random_direction(UniformSource& rng, int dim) {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  if (dim == 1) {
    u[0] = rng.sign();
  } else if (dim == 2) {
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    u = {std::cos(th), std::sin(th), 0.0};
  } else {
    const double z = rng.uniform(-1.0, 1.0);
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(1.0 - z * z);
    u = {s * std::cos(th), s * std::sin(th), z};
  }
  return u;
}

BankEntry make_gaussian(UniformSource& rng, int dim, double scale, bool modulated,
                        const BankOptions& o) {
  const double sigma = scale * std::exp2(rng.uniform(-o.sigma_spread, o.sigma_spread));
  std::array<double, 3> c = random_direction(rng, dim);
  const double offset = rng.uniform(0.0, o.offset_max) * sigma;
  for (auto& v : c) v *= offset;
  std::array<double, 3> w{0.0, 0.0, 0.0};
  if (modulated) {
    w = random_direction(rng, dim);
    const double k = rng.uniform(o.modulation_lo, o.modulation_hi) / sigma;
    for (auto& v : w) v *= k;
  }
  BankEntry e;
  e.family = modulated ? BankFamily::modulated_gaussian : BankFamily::gaussian;
  e.label = to_string(e.family);
  e.space = [=](const std::array<double, 3>& x) {
    double r2 = 0.0, phase = 0.0;
    for (int d = 0; d < 3; ++d) {
      r2 += (x[d] - c[d]) * (x[d] - c[d]);
      phase += w[d] * x[d];
    }
    return std::exp(-r2 / (2.0 * sigma * sigma)) * std::polar(1.0, phase);
  };
  return e;
}

BankEntry make_annulus(UniformSource& rng, double scale, const BankOptions& o) {
  const double width = scale * rng.uniform(o.annulus_width_lo, o.annulus_width_hi);
  const double r_in = scale * rng.uniform(1.0, 1.5);
  const double r_out = r_in + scale * rng.uniform(0.5, 1.5);
  BankEntry e;
  e.family = BankFamily::smoothed_annulus;
  e.label = to_string(e.family);
  e.space = [=](const std::array<double, 3>& x) {
    const double r = norm3(x);
    return cplx(0.5 * (std::erf((r - r_in) / width) - std::erf((r - r_out) / width)), 0.0);
  };
  return e;
}

BankEntry make_band_limited(UniformSource& rng, int dim, double lo, double hi) {
  // radial bump on (lo, hi) times a random low-degree angular polynomial
  std::array<double, 7> a{};
  for (auto& v : a) v = rng.uniform(-1.0, 1.0);
  a[0] = 1.5 + 0.5 * rng.next();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  BankEntry e;
  e.family = BankFamily::band_limited;
  e.label = to_string(e.family);
  e.shell_lo = lo;
  e.shell_hi = hi;
  e.spectrum = [=](const std::array<double, 3>& xi) {
    const double r = norm3(xi);
    const double radial = smooth::bump((r - mid) / half);
    if (radial == 0.0) return cplx(0.0, 0.0);
    const double u = xi[0] / r, v = xi[1] / r, w = xi[2] / r;
    double ang = a[0];
    if (dim == 1) {
      ang += a[1] * u;
    } else {
      ang += a[1] * u + a[2] * v + a[3] * (u * u - v * v) + a[4] * u * v;
      if (dim == 3) ang += a[5] * w + a[6] * u * w;
    }
    return cplx(radial * ang, 0.0);
  };
  return e;
}

GridFunction sample_raw(const BankEntry& e, const GridSpec& spec, int m) {
  if (e.space) return sample_dilated(spec, m, e.space);
  const double s = std::ldexp(1.0, m);
  const double jac = std::pow(s, -spec.dim);
  GridFunction f_hat = sample_spectrum(spec, [&](const std::array<double, 3>& xi) {
    return jac * e.spectrum({xi[0] / s, xi[1] / s, xi[2] / s});
  });
  return dft_inverse(f_hat);
}

}  // namespace

GridFunction BankEntry::sample(const GridSpec& spec, int m) const {
  GridFunction f = sample_raw(*this, spec, m);
  f *= normalization * std::pow(2.0, 0.5 * m * spec.dim);
  return f;
}

TestBank make_bank(const GridSpec& spec, std::uint64_t seed, int count,
                   const BankOptions& options) {
  if (count < 1) throw ParameterError("make_bank: count must be >= 1");
  if (options.families.empty()) throw ParameterError("make_bank: no families selected");
  const double scale = options.scale > 0.0 ? options.scale : spec.half_width / 16.0;
  const double lo = options.shell_lo > 0.0 ? options.shell_lo : spec.nyquist() / 8.0;
  const double hi = options.shell_hi > 0.0 ? options.shell_hi : spec.nyquist() / 4.0;
  if (!(hi > lo)) throw ParameterError("make_bank: empty frequency shell");
  UniformSource rng(seed);
  TestBank bank{seed, spec, {}};
  bank.entries.reserve(count);
  for (int i = 0; i < count; ++i) {
    const BankFamily fam = options.families[i % options.families.size()];
    BankEntry e;
    switch (fam) {
      case BankFamily::gaussian: e = make_gaussian(rng, spec.dim, scale, false, options); break;
      case BankFamily::modulated_gaussian: e = make_gaussian(rng, spec.dim, scale, true, options); break;
      case BankFamily::smoothed_annulus: e = make_annulus(rng, scale, options); break;
      case BankFamily::band_limited: e = make_band_limited(rng, spec.dim, lo, hi); break;
    }
    e.label += "_" + std::to_string(i);
    GridFunction raw = sample_raw(e, spec, 0);
    const double nrm = raw.l2_norm();
    if (!(nrm > 0.0)) throw GuardError("make_bank: entry " + e.label + " vanishes on the grid");
    e.normalization = 1.0 / nrm;
    raw *= e.normalization;
    e.values = std::move(raw);
    bank.entries.push_back(std::move(e));
  }
  return bank;
}

}  // namespace qrlab
