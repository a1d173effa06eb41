#include <algorithm>
#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_gamma.h>

#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/operator.hpp"
#include "qrlab/smooth.hpp"

namespace qrlab {

double mellin_symbol_sq(double alpha, double omega) {
  gsl_sf_result lr1, arg1, lr2, arg2;
  gsl_sf_lngamma_complex_e(1.0, -omega, &lr1, &arg1);
  gsl_sf_lngamma_complex_e(1.0 + alpha, -omega, &lr2, &arg2);
  return std::exp(2.0 * (lr1.val + std::lgamma(alpha) - lr2.val));
}

double SquareFunctionResult::l2_norm() const {
  return std::sqrt(g.l2_norm_squared() + tail);
}

double SquareFunctionResult::weighted_l2_norm(double a) const {
  const auto& radii = regularized_radii(g.spec());
  const std::size_t origin = origin_index(g.spec());
  const double w0 = origin_cell_power(g.spec(), a);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += std::norm(g[i]) * power_weight(radii, i, origin, w0, a);
  return std::sqrt(s * g.spec().cell_volume() + (a == 0.0 ? tail : weighted_tail));
}

namespace {

// sum over |k| > k0 of dw/(2 pi) |B(1 - i k dw, alpha)|^2 |k dw|^a, with the
// far range replaced by the leading asymptotics Gamma(alpha)^2 w^{-2 alpha}.
double far_symbol_sum(double alpha, double dw, long k0, double a) {
  const long k_far = 64 * std::max(k0, 16L);
  double s = 0.0;
  for (long k = k0 + 1; k <= k_far; ++k) {
    const double w = k * dw;
    s += mellin_symbol_sq(alpha, w) * std::pow(w, a);
  }
  s *= 2.0 * dw / (2.0 * std::numbers::pi);
  const double w_far = (k_far + 0.5) * dw;
  const double g = std::tgamma(alpha);
  s += g * g * std::pow(w_far, 1.0 - 2.0 * alpha + a) / (std::numbers::pi * (2.0 * alpha - 1.0 - a));
  return s;
}

}  // namespace

SquareFunctionResult stein_square_function(const GridFunction& f, const DistanceFunction& rho,
                                           double alpha, const SquareFunctionOptions& options) {
  if (!(alpha > 0.5)) throw ParameterError("stein_square_function: alpha must exceed 1/2");
  if (f.domain() != Domain::space) throw ParameterError("stein_square_function: expects a space field");
  if (!(options.weight_power < 2.0 * alpha - 1.0))
    throw ParameterError("stein_square_function: tail weight must satisfy a < 2 alpha - 1");
  const GridSpec& spec = f.spec();
  const std::size_t N = spec.size();
  const auto& rv = cached_rho(spec, rho);
  std::vector<cplx> hat = f.data();
  fft::forward(spec, hat);

  double emax = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    if (rv[i] > 0.0) emax = std::max(emax, std::norm(hat[i]));
  SquareFunctionResult res;
  res.g = GridFunction(spec, Domain::space);
  if (emax == 0.0) return res;
  nyquist_guard(f, rho, 0.0);

  double rho_lo = std::numeric_limits<double>::infinity(), rho_hi = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (rv[i] <= 0.0 || std::norm(hat[i]) <= 1e-32 * emax) continue;
    rho_lo = std::min(rho_lo, rv[i]);
    rho_hi = std::max(rho_hi, rv[i]);
  }
  const double period = std::log(rho_hi / rho_lo) + options.period_margin;
  const double dw = 2.0 * std::numbers::pi / period;

  // per-frequency data: log rho, displacement per unit omega |grad rho|/rho
  std::vector<double> logr(N, 0.0), disp(N, 0.0), energy(N, 0.0);
  const double e_scale = spec.cell_volume() / static_cast<double>(N);
  double min_disp = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i) {
    if (rv[i] <= 0.0) {
      hat[i] = 0.0;
      continue;
    }
    logr[i] = std::log(rv[i]);
    disp[i] = rho.gradient_norm(spec.frequency_point(i)) / rv[i];
    energy[i] = std::norm(hat[i]) * e_scale;
    if (std::norm(hat[i]) > 1e-32 * emax) min_disp = std::min(min_disp, disp[i]);
  }
  const double reach = options.window_fraction * spec.half_width;
  const long K = static_cast<long>(std::ceil(reach / (min_disp * dw)));
  res.omega_step = dw;
  res.omega_count = static_cast<int>(2 * K + 1);

  // real f and even rho: the -w term has the modulus of the +w term
  bool real_input = true;
  for (std::size_t i = 0; i < N && real_input; ++i) real_input = f[i].imag() == 0.0;

  // components by increasing displacement: those still inside the window at
  // |w| form a prefix that only shrinks as |w| grows; suffix sums give the
  // energy already removed
  const double a = options.weight_power;
  std::vector<std::size_t> order;
  double total = 0.0, wtotal = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (hat[i] == cplx(0.0)) continue;
    order.push_back(i);
    total += energy[i];
    wtotal += energy[i] * std::pow(disp[i], a);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&disp](std::size_t x, std::size_t y) { return disp[x] < disp[y]; });
  // suffix sums of energy and energy disp^a along the order
  std::vector<double> suffix(order.size() + 1, 0.0), wsuffix(order.size() + 1, 0.0);
  std::vector<double> disp_a(N, 0.0);
  std::vector<cplx> step(N);
  for (std::size_t o = order.size(); o-- > 0;) {
    const std::size_t i = order[o];
    disp_a[i] = std::pow(disp[i], a);
    step[i] = std::polar(1.0, dw * logr[i]);
    suffix[o] = suffix[o + 1] + energy[i];
    wsuffix[o] = wsuffix[o + 1] + energy[i] * disp_a[i];
  }

  std::vector<double> g2(N, 0.0);
  std::vector<cplx> buf(N), phase(N);
  const double inv_n = 1.0 / static_cast<double>(N);
  double tail = 0.0, wtail = 0.0;
  for (const int sweep : {1, -1}) {
    if (sweep < 0 && real_input) break;
    std::size_t live = order.size();
    for (long k = sweep > 0 ? 0 : 1; k <= K; ++k) {
      const double w = sweep * k * dw;
      const double mult = real_input && k != 0 ? 2.0 : 1.0;
      const double c = mult * dw / (2.0 * std::numbers::pi) * mellin_symbol_sq(alpha, w);
      const double limit = k == 0 ? std::numeric_limits<double>::infinity() : reach / (k * dw);
      while (live > 0 && !(disp[order[live - 1]] < limit)) --live;
      // resynchronise the phase recurrence every 64 steps
      const bool exact = k % 64 == 0 || k == 1;
      double kept = 0.0, wkept = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        if (hat[i] == cplx(0.0) || !(disp[i] < limit)) {
          buf[i] = 0.0;
          continue;
        }
        const cplx st = sweep > 0 ? step[i] : std::conj(step[i]);
        phase[i] = exact ? std::polar(1.0, w * logr[i]) : phase[i] * st;
        const double z = k * dw * disp[i] / reach;
        if (z <= 0.5) {
          buf[i] = phase[i] * hat[i];
          continue;
        }
        const double win = smooth::step((1.0 - z) / 0.5);
        kept += (1.0 - win * win) * energy[i];
        wkept += (1.0 - win * win) * energy[i] * disp_a[i];
        buf[i] = win * phase[i] * hat[i];
      }
      // energy beyond the live prefix is removed entirely
      tail += c * (kept + suffix[live]);
      if (k > 0) wtail += c * std::pow(k * dw, a) * (wkept + wsuffix[live]);
      fft::inverse(spec, buf);
      const double cn = c * inv_n * inv_n;
      for (std::size_t i = 0; i < N; ++i) g2[i] += cn * std::norm(buf[i]);
    }
  }
  // omega beyond K: every component is displaced past the window
  tail += total * far_symbol_sum(alpha, dw, K, 0.0);
  wtail += wtotal * far_symbol_sum(alpha, dw, K, a);

  for (std::size_t i = 0; i < N; ++i) res.g[i] = std::sqrt(g2[i]);
  res.tail = tail;
  res.weighted_tail = wtail;
  return res;
}

}  // namespace qrlab
