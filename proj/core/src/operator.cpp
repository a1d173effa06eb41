#include "qrlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/parallel.hpp"
#include "qrlab/smooth.hpp"

namespace qrlab {

std::vector<double> TGrid::values() const {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(k_max - k_min + 1) * M);
  for (int k = k_min; k <= k_max; ++k)
    for (int i = 0; i < M; ++i) t.push_back(std::exp2(k + static_cast<double>(i) / M));
  return t;
}

TGrid make_tgrid(int k_min, int k_max, int M) {
  if (k_min > k_max) throw ParameterError("tgrid: k_min > k_max");
  if (M < 1) throw ParameterError("tgrid: M must be >= 1");
  return {k_min, k_max, M};
}

const std::vector<double>& cached_rho(const GridSpec& spec, const DistanceFunction& rho) {
  using Key = std::tuple<int, int, double, std::string, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
  const Key key{spec.dim, spec.n, spec.half_width, rho.label(), rho.beta()};
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return *it->second;
  if (cache.size() > 16) cache.clear();
  auto v = std::make_shared<const std::vector<double>>(rho_on_frequencies(rho, spec));
  cache.emplace(key, v);
  return *v;
}

namespace {

// Smallest rho on the outermost frequency shell of the lattice.
double edge_rho(const GridSpec& spec, const std::vector<double>& rv) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rv.size(); ++i) {
    const auto idx = spec.unflatten(i);
    for (int d = 0; d < spec.dim; ++d)
      if (idx[d] == spec.n / 2) {
        m = std::min(m, rv[i]);
        break;
      }
  }
  return m;
}

std::vector<cplx> raw_spectrum(const GridFunction& f) {
  if (f.domain() != Domain::space) throw ParameterError("operator input must be a space field");
  std::vector<cplx> v = f.data();
  fft::forward(f.spec(), v);
  return v;
}

GridFunction inverse_raw(const GridSpec& spec, std::vector<cplx> v) {
  fft::inverse(spec, v);
  const double s = 1.0 / static_cast<double>(spec.size());
  for (auto& x : v) x *= s;
  return GridFunction(spec, Domain::space, std::move(v));
}

// F^{-1}[sym(rho) F f] reusing a precomputed raw spectrum.
template <class Sym>
GridFunction apply_raw(const GridSpec& spec, const std::vector<cplx>& hat,
                       const std::vector<double>& rv, Sym&& sym) {
  std::vector<cplx> v(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    if (hat[i] == cplx(0.0)) continue;
    const cplx s = sym(rv[i]);
    if (s != cplx(0.0)) v[i] = s * hat[i];
  }
  return inverse_raw(spec, std::move(v));
}

}  // namespace

void nyquist_guard(const GridFunction& f, const DistanceFunction& rho, double rho_support) {
  const auto& rv = cached_rho(f.spec(), rho);
  if (rho_support < edge_rho(f.spec(), rv)) return;
  const double frac = spectral_edge_fraction(f);
  if (frac < 1e-20) return;
  throw GuardError("Nyquist guard: symbol support rho <= " + std::to_string(rho_support) +
                   " leaves the frequency box and f has edge energy fraction " +
                   std::to_string(frac));
}

GridFunction apply_symbol(const GridFunction& f, const DistanceFunction& rho, const RadialSymbol& g) {
  nyquist_guard(f, rho, g.support_hi);
  const auto& rv = cached_rho(f.spec(), rho);
  return apply_raw(f.spec(), raw_spectrum(f), rv, g.fn);
}

GridFunction apply_multiplier(const GridFunction& f, const DistanceFunction& rho, const Profile1D& h,
                              double t) {
  if (!(t > 0.0)) throw ParameterError("apply_multiplier: t must be positive");
  return apply_symbol(f, rho, {[&h, t](double r) { return h(r / t); }, t * h.support_hi()});
}

GridFunction riesz_mean(const GridFunction& f, const DistanceFunction& rho, double lambda,
                        double gamma, double t, RieszMode mode) {
  if (!(lambda > -0.5)) throw ParameterError("riesz_mean: lambda must exceed -1/2");
  if (!(t > 0.0)) throw ParameterError("riesz_mean: t must be positive");
  auto fn = [=](double r) {
    const double u = r / t;
    const double v = riesz_value(lambda, gamma, u);
    if (v == 0.0) return cplx(0.0);
    switch (mode) {
      case RieszMode::full: return cplx(v);
      case RieszMode::cutoff: return cplx(smooth::chi(u) * v);
      case RieszMode::remainder: return cplx((1.0 - smooth::chi(u)) * v);
    }
    return cplx(0.0);
  };
  return apply_symbol(f, rho, {fn, t});
}

GridFunction maximal_function(const GridFunction& f, const DistanceFunction& rho, const Profile1D& h,
                              const std::vector<double>& ts) {
  if (ts.empty()) throw ParameterError("maximal_function: empty t grid");
  const double t_max = *std::max_element(ts.begin(), ts.end());
  nyquist_guard(f, rho, t_max * h.support_hi());
  const GridSpec& spec = f.spec();
  const auto& rv = cached_rho(spec, rho);
  const auto hat = raw_spectrum(f);
  double hat_l1 = 0.0;
  for (const auto& v : hat) hat_l1 += std::abs(v);
  const std::size_t workers = std::min<std::size_t>(thread_count(), ts.size());
  std::vector<std::vector<double>> partial(workers, std::vector<double>(spec.size(), 0.0));
  parallel_for(workers, [&](std::size_t w) {
    auto& acc = partial[w];
    std::vector<cplx> v(hat.size());
    for (std::size_t i = w; i < ts.size(); i += workers) {
      const double t = ts[i];
      const double lo = t * h.support_lo(), hi = t * h.support_hi();
      double l1 = 0.0;
      for (std::size_t p = 0; p < hat.size(); ++p) {
        v[p] = 0.0;
        if (rv[p] < lo || rv[p] > hi || hat[p] == cplx(0.0)) continue;
        v[p] = h(rv[p] / t) * hat[p];
        l1 += std::abs(v[p]);
      }
      // |F^{-1} v| <= l1 / N everywhere: below roundoff of f itself
      if (l1 < 1e-15 * hat_l1) continue;
      fft::inverse(spec, v);
      const double s = 1.0 / static_cast<double>(spec.size());
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] = std::max(acc[p], s * std::abs(v[p]));
    }
  });
  GridFunction m(spec, Domain::space);
  for (std::size_t p = 0; p < m.size(); ++p) {
    double v = 0.0;
    for (const auto& acc : partial) v = std::max(v, acc[p]);
    m[p] = v;
  }
  return m;
}

GridFunction maximal_function(const GridFunction& f, const DistanceFunction& rho, const Profile1D& h,
                              const TGrid& tgrid) {
  return maximal_function(f, rho, h, tgrid.values());
}

std::vector<GridFunction> lp_blocks(const GridFunction& f, const DistanceFunction& rho, int k_min,
                                    int k_max) {
  if (k_min > k_max) throw ParameterError("lp_blocks: empty k range");
  const double miss = lp_uncovered_fraction(f, rho, k_min, k_max);
  if (miss > 1e-10)
    throw GuardError("lp_blocks: uncovered spectral energy fraction " + std::to_string(miss));
  nyquist_guard(f, rho, std::ldexp(2.0, k_max));
  const auto& rv = cached_rho(f.spec(), rho);
  const auto hat = raw_spectrum(f);
  std::vector<GridFunction> out(static_cast<std::size_t>(k_max - k_min + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    const int k = k_min + static_cast<int>(i);
    out[i] = apply_raw(f.spec(), hat, rv,
                       [k](double r) { return cplx(smooth::lp_block(std::ldexp(r, -k))); });
  });
  return out;
}

double lp_uncovered_fraction(const GridFunction& f, const DistanceFunction& rho, int k_min,
                             int k_max) {
  const auto& rv = cached_rho(f.spec(), rho);
  const auto hat = raw_spectrum(f);
  double total = 0.0, miss = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double e = std::norm(hat[i]);
    total += e;
    const double cover =
        smooth::zeta0(std::ldexp(rv[i], -k_max - 1)) - smooth::zeta0(std::ldexp(rv[i], -k_min));
    miss += e * (1.0 - cover) * (1.0 - cover);
  }
  return total > 0.0 ? miss / total : 0.0;
}

GridFunction l_block(const GridFunction& f, const DistanceFunction& rho, int k) {
  return apply_symbol(
      f, rho, {[k](double r) { return cplx(smooth::eta(std::ldexp(r, -k))); }, std::ldexp(8.0, k)});
}

GridFunction a_tau(const GridFunction& f, const DistanceFunction& rho, double tau) {
  return apply_symbol(f, rho, {[tau](double r) {
                                 const double e = smooth::eta(r);
                                 return e == 0.0 ? cplx(0.0) : e * std::polar(1.0, -r * tau);
                               },
                               8.0});
}

GridFunction t_jk(const GridFunction& f, const DistanceFunction& rho, const Profile1D& component,
                  int k, double t) {
  if (!(t > 0.0)) throw ParameterError("t_jk: t must be positive");
  return apply_symbol(f, rho, {[&component, k, t](double r) {
                                 const double s = std::ldexp(r, -k);
                                 const double e = smooth::eta(s);
                                 return e == 0.0 ? cplx(0.0) : e * component(s / t);
                               },
                               std::ldexp(8.0, k)});
}

MPieces m_pieces(const GridFunction& f, const DistanceFunction& rho, const VjDecomposition& vj,
                 int k, int c0, const std::vector<double>& ts) {
  if (ts.empty()) throw ParameterError("m_pieces: empty t grid");
  const GridSpec& spec = f.spec();
  nyquist_guard(f, rho, std::ldexp(8.0, k));
  const auto& rv = cached_rho(spec, rho);
  const auto& radii = regularized_radii(spec);
  const auto hat = raw_spectrum(f);
  const std::size_t J = vj.components.size();
  std::vector<std::vector<cplx>> inner(J), outer(J);
  for (std::size_t j = 0; j < J; ++j) {
    const double cut = std::ldexp(1.0, -k + static_cast<int>(j) + c0 + 1);
    GridFunction part(spec, Domain::space);
    for (std::size_t p = 0; p < part.size(); ++p)
      if (radii[p] < cut) part[p] = f[p];
    inner[j] = raw_spectrum(part);
    outer[j].resize(hat.size());
    for (std::size_t p = 0; p < hat.size(); ++p) outer[j][p] = hat[p] - inner[j][p];
  }
  MPieces res{GridFunction(spec, Domain::space), GridFunction(spec, Domain::space),
              GridFunction(spec, Domain::space)};
  std::vector<cplx> a1(hat.size()), a2(hat.size()), u(hat.size());
  for (double t : ts) {
    std::fill(a1.begin(), a1.end(), cplx(0.0));
    std::fill(a2.begin(), a2.end(), cplx(0.0));
    for (std::size_t p = 0; p < hat.size(); ++p) {
      const double s = std::ldexp(rv[p], -k);
      const double e = smooth::eta(s);
      if (e == 0.0) continue;
      for (std::size_t j = 0; j < J; ++j) {
        const cplx sym = e * vj.components[j](s / t);
        a1[p] += sym * inner[j][p];
        a2[p] += sym * outer[j][p];
      }
    }
    for (std::size_t p = 0; p < hat.size(); ++p) u[p] = a1[p] + a2[p];
    const GridFunction g1 = inverse_raw(spec, a1), g2 = inverse_raw(spec, a2),
                       gu = inverse_raw(spec, u);
    for (std::size_t p = 0; p < hat.size(); ++p) {
      res.m1[p] = std::max(res.m1[p].real(), std::abs(g1[p]));
      res.m2[p] = std::max(res.m2[p].real(), std::abs(g2[p]));
      res.undecomposed[p] = std::max(res.undecomposed[p].real(), std::abs(gu[p]));
    }
  }
  return res;
}

KernelDecay kernel_decay_probe(const GridSpec& spec, const DistanceFunction& rho,
                               const Profile1D& component, int j, double s, int c0) {
  if (!(s >= 0.5 && s <= 2.0)) throw ParameterError("kernel_decay_probe: s must lie in [1/2, 2]");
  const auto& rv = cached_rho(spec, rho);
  GridFunction symbol(spec, Domain::frequency);
  for (std::size_t p = 0; p < symbol.size(); ++p) {
    const double e = smooth::eta(rv[p]);
    if (e != 0.0) symbol[p] = e * component(rv[p] / s);
  }
  if (8.0 >= edge_rho(spec, rv)) throw GuardError("kernel_decay_probe: eta(rho) exceeds Nyquist");
  const GridFunction K = dft_inverse(symbol);
  KernelDecay out;
  out.outer_radius = std::ldexp(1.0, j + c0);
  out.inner_radius = std::ldexp(1.0, -j - c0);
  const double r_end = 0.95 * spec.half_width;
  if (out.outer_radius * 1.5 > r_end)
    throw GuardError("kernel_decay_probe: outer region |x| >= 2^{j+c0} is not interior");
  constexpr int kBinsPerOctave = 8;
  const int bins = static_cast<int>(std::floor(kBinsPerOctave * std::log2(r_end / out.outer_radius)));
  std::vector<double> env(bins, 0.0);
  for (std::size_t p = 0; p < K.size(); ++p) {
    const auto x = spec.point(p);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double a = std::abs(K[p]);
    out.global_sup = std::max(out.global_sup, a);
    if (r <= out.inner_radius) out.inner_sup = std::max(out.inner_sup, a);
    if (r >= out.outer_radius && r < r_end) {
      out.outer_sup = std::max(out.outer_sup, a);
      const int b = static_cast<int>(kBinsPerOctave * std::log2(r / out.outer_radius));
      if (b < bins) env[b] = std::max(env[b], a);
    }
  }
  const double floor = 1e-12 * out.global_sup;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int b = 0; b < bins; ++b) {
    if (!(env[b] > floor)) continue;
    const double x = std::log(out.outer_radius) + (b + 0.5) * std::log(2.0) / kBinsPerOctave;
    const double y = std::log(env[b]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  out.fit_points = n;
  if (n >= 3) {
    out.outer_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    // envelope under the noise floor almost everywhere: report the slope that
    // would take the sup of the region down to the floor by r_end
    const double top = std::max(out.outer_sup, floor);
    out.outer_slope = std::log(floor / top) / std::log(r_end / out.outer_radius);
  }
  return out;
}

}  // namespace qrlab
