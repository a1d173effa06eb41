#include <algorithm>
#include <cmath>
#include <numbers>

#include "check_util.hpp"
#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/parallel.hpp"
#include "qrlab/smooth.hpp"
#include "qrlab/verify.hpp"

namespace qrlab {

using detail::DriftTracker;
using detail::fmt;

namespace {

// sum_x g(x) e^{-i x.xi} cellvol, separable over axes
cplx direct_transform(const GridFunction& g, const std::array<double, 3>& xi) {
  const GridSpec& spec = g.spec();
  const int n = spec.n;
  std::array<std::vector<cplx>, 3> e;
  for (int d = 0; d < spec.dim; ++d) {
    e[d].resize(n);
    for (int j = 0; j < n; ++j) e[d][j] = std::polar(1.0, -spec.coordinate(j) * xi[d]);
  }
  cplx acc = 0.0;
  if (spec.dim == 1) {
    for (int j = 0; j < n; ++j) acc += g[j] * e[0][j];
  } else if (spec.dim == 2) {
    for (int a = 0; a < n; ++a) {
      cplx row = 0.0;
      const std::size_t base = static_cast<std::size_t>(a) * n;
      for (int b = 0; b < n; ++b) row += g[base + b] * e[1][b];
      acc += row * e[0][a];
    }
  } else {
    for (int a = 0; a < n; ++a) {
      cplx plane = 0.0;
      for (int b = 0; b < n; ++b) {
        cplx row = 0.0;
        const std::size_t base = (static_cast<std::size_t>(a) * n + b) * n;
        for (int c = 0; c < n; ++c) row += g[base + c] * e[2][c];
        plane += row * e[1][b];
      }
      acc += plane * e[0][a];
    }
  }
  return acc * spec.cell_volume();
}

GridFunction pointwise_sup(const std::vector<GridFunction>& fs) {
  GridFunction m(fs.front().spec(), Domain::space);
  for (const auto& f : fs)
    for (std::size_t p = 0; p < m.size(); ++p) m[p] = std::max(m[p].real(), std::abs(f[p]));
  return m;
}

std::string grid_label(const GridSpec& spec) {
  return std::to_string(spec.dim) + "d n=" + std::to_string(spec.n) + " L=" + fmt(spec.half_width);
}

}  // namespace

RatioReport check_trace(const TraceSetup& setup) {
  const GridSpec& spec = setup.bank.spec;
  if (!(setup.b > 1.0 && setup.b < spec.dim)) throw ParameterError("trace: need 1 < b < d");
  const SphereQuadrature sq = sphere_quadrature(setup.rho, setup.sphere_nodes);
  RatioReport rep;
  rep.name = "check_trace";
  DriftTracker drift;
  const int d = spec.dim;
  for (const auto& e : setup.bank.entries) {
    for (int m : setup.dilations) {
      const GridFunction g = e.sample(spec, m);
      const double s = std::ldexp(1.0, m);
      std::vector<double> vals(sq.nodes.size());
      parallel_for(sq.nodes.size(), [&](std::size_t i) {
        const auto& nd = sq.nodes[i];
        vals[i] = std::norm(direct_transform(g, {s * nd[0], s * nd[1], s * nd[2]}));
      });
      double lhs = 0.0;
      for (std::size_t i = 0; i < vals.size(); ++i) lhs += sq.weights[i] * vals[i];
      lhs *= std::pow(s, d - 1);
      const double w = weighted_l2_norm(g, setup.b);
      const double rhs = w * w;
      drift.record(e.label, m, lhs / rhs, std::pow(s, setup.b - 1.0));
      if (m == 0) rep.add(e.label, lhs, rhs);
    }
  }
  rep.finalize();
  rep.symmetry_drift = drift.drift();
  rep.params = {{"b", fmt(setup.b)},
                {"rho", setup.rho.label()},
                {"sphere_nodes", std::to_string(setup.sphere_nodes)},
                {"grid", grid_label(spec)},
                {"dilations", detail::join(setup.dilations)}};
  return rep;
}

double basic_maximal_constant(const Profile1D& h, double b, double beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double s = h.position(i);
    if (s <= 0.0) continue;
    acc += std::norm(h.samples()[i]) * std::pow(s, b / beta - 1.0);
  }
  return std::sqrt(acc * h.spacing());
}

RatioReport check_basic_maximal(const BasicMaximalSetup& setup) {
  const GridSpec& spec = setup.bank.spec;
  if (!(setup.b > 1.0 && setup.b < spec.dim)) throw ParameterError("basic maximal: need 1 < b < d");
  const double beta = setup.rho.beta();
  const double A = basic_maximal_constant(setup.h, setup.b, beta);
  auto ts_for = [&](int m, int steps) {
    std::vector<double> ts;
    for (int i = 0; i <= steps; ++i)
      ts.push_back(std::exp2(m * beta + static_cast<double>(i) / steps));
    return ts;
  };
  RatioReport rep;
  rep.name = "check_basic_maximal";
  DriftTracker drift;
  double refined_max = 0.0;
  for (const auto& e : setup.bank.entries) {
    for (int m : setup.dilations) {
      const GridFunction f = e.sample(spec, m);
      const double rhs = A * f.l2_norm();
      if (!(rhs > 0.0)) {
        rep.add(e.label, 0.0, 1.0);
        continue;
      }
      const double lhs =
          weighted_l2_norm(maximal_function(f, setup.rho, setup.h, ts_for(m, setup.t_steps)),
                           -setup.b);
      drift.record(e.label, m, lhs / rhs, std::exp2(0.5 * m * setup.b));
      if (m != 0) continue;
      rep.add(e.label, lhs, rhs);
      if (setup.refine) {
        const double lhs2 = weighted_l2_norm(
            maximal_function(f, setup.rho, setup.h, ts_for(0, 2 * setup.t_steps)), -setup.b);
        refined_max = std::max(refined_max, lhs2 / rhs);
      }
    }
  }
  rep.finalize();
  rep.symmetry_drift = drift.drift();
  rep.metrics["A"] = A;
  if (setup.refine && rep.max_ratio > 0.0)
    rep.metrics["refinement_change"] = std::abs(refined_max / rep.max_ratio - 1.0);
  rep.params = {{"b", fmt(setup.b)},
                {"rho", setup.rho.label()},
                {"profile", setup.h.kind},
                {"t_steps", std::to_string(setup.t_steps)},
                {"grid", grid_label(spec)}};
  return rep;
}

RatioReport check_atau(const AtauSetup& setup) {
  const GridSpec& spec = setup.bank.spec;
  if (!(setup.b > 1.0 && setup.b < spec.dim)) throw ParameterError("atau: need 1 < b < d");
  if (!(setup.tau_step > 0.0 && setup.tau_max > setup.tau_step))
    throw ParameterError("atau: bad tau grid");
  const long steps = std::lround(setup.tau_max / setup.tau_step);
  const auto& rv = cached_rho(spec, setup.rho);
  RatioReport rep;
  rep.name = "check_atau";
  DriftTracker drift;
  double worst_tail = 0.0;
  for (const auto& e : setup.bank.entries) {
    for (int m : setup.dilations) {
      const GridFunction f = e.sample(spec, m);
      const double s = std::ldexp(1.0, m);
      nyquist_guard(f, setup.rho, 8.0 * s);
      const GridFunction fhat = dft_forward(f);
      std::vector<double> vals(2 * steps + 1);
      parallel_for(vals.size(), [&](std::size_t i) {
        const double tau = (static_cast<double>(i) - steps) * setup.tau_step / s;
        GridFunction g(spec, Domain::frequency);
        for (std::size_t p = 0; p < g.size(); ++p) {
          const double eta = smooth::eta(rv[p] / s);
          if (eta != 0.0) g[p] = eta * std::polar(1.0, -tau * rv[p]) * fhat[p];
        }
        const double w = weighted_l2_norm(dft_inverse(g), -setup.b);
        vals[i] = w * w;
      });
      double total = 0.0;
      for (std::size_t i = 0; i < vals.size(); ++i)
        total += ((i == 0 || i + 1 == vals.size()) ? 0.5 : 1.0) * vals[i];
      total *= setup.tau_step / s;
      // |tau| beyond the window: component xi sits near |x| = |tau| |grad rho|
      const double T = setup.tau_max / s;
      double far = 0.0, reach = 0.0;
      for (std::size_t p = 0; p < fhat.size(); ++p) {
        const double eta = smooth::eta(rv[p] / s);
        if (eta == 0.0) continue;
        const double gn = setup.rho.gradient_norm(spec.frequency_point(p));
        reach = std::max(reach, T * gn);
        far += std::norm(eta * fhat[p]) * std::pow(gn, -setup.b);
      }
      if (reach > 0.5 * spec.half_width)
        throw GuardError("atau: tau window displaces components by " + fmt(reach) +
                         ", beyond half the box");
      far *= spec.freq_cell_volume() / std::pow(2.0 * std::numbers::pi, spec.dim) * 2.0 *
             std::pow(T, 1.0 - setup.b) / (setup.b - 1.0);
      const double lhs = total + far;
      const double n2 = f.l2_norm_squared();
      if (lhs > 0.0) worst_tail = std::max(worst_tail, far / lhs);
      drift.record(e.label, m, lhs / n2, std::pow(s, setup.b - 1.0));
      if (m == 0) rep.add(e.label, lhs, n2);
    }
  }
  rep.finalize();
  rep.symmetry_drift = drift.drift();
  rep.metrics["tail_fraction"] = worst_tail;
  rep.params = {{"b", fmt(setup.b)},
                {"rho", setup.rho.label()},
                {"tau_max", fmt(setup.tau_max)},
                {"tau_step", fmt(setup.tau_step)},
                {"grid", grid_label(spec)}};
  return rep;
}

RatioReport check_littlewood_paley(const LpSetup& setup) {
  const GridSpec& spec = setup.bank.spec;
  if (!(std::abs(setup.gamma) < 0.5 * spec.dim))
    throw ParameterError("littlewood-paley: gamma must lie in (-d/2, d/2)");
  RatioReport rep;
  rep.name = "check_littlewood_paley";
  DriftTracker drift;
  const HerzOptions opts{2.0, 1e-6};
  for (const auto& e : setup.bank.entries) {
    for (int m : setup.dilations) {
      const GridFunction f = e.sample(spec, m);
      const auto blocks = lp_blocks(f, setup.rho, setup.k_min + m, setup.k_max + m);
      GridFunction sq(spec, Domain::space);
      for (const auto& b : blocks)
        for (std::size_t p = 0; p < sq.size(); ++p) sq[p] += std::norm(b[p]);
      for (auto& v : sq.data()) v = std::sqrt(v.real());
      const auto dec = annuli(spec, setup.l_min - m, setup.l_max - m, true);
      const double lhs = herz_norm(sq, setup.gamma, setup.q, dec, opts);
      const double rhs = herz_norm(f, setup.gamma, setup.q, dec, opts);
      drift.record(e.label, m, lhs / rhs);
      if (m == 0) rep.add(e.label, lhs, rhs);
    }
  }
  rep.finalize();
  rep.symmetry_drift = drift.drift();
  rep.params = {{"gamma", fmt(setup.gamma)},
                {"q", std::isinf(setup.q) ? "inf" : fmt(setup.q)},
                {"k", std::to_string(setup.k_min) + ".." + std::to_string(setup.k_max)},
                {"annuli", std::to_string(setup.l_min) + ".." + std::to_string(setup.l_max)},
                {"rho", setup.rho.label()},
                {"grid", grid_label(spec)}};
  return rep;
}

namespace {

struct WeightConvRun {
  std::vector<double> lhs, rhs;
};

WeightConvRun weight_convolution_run(const WeightConvolutionSetup& s, int samples) {
  const double dr = 2.0 * s.half_width / samples;
  std::vector<double> r(samples);
  for (int i = 0; i < samples; ++i) r[i] = (i - samples / 2) * dr;
  // kernel on offsets, wrapped for a 2n circular convolution
  const std::size_t n2 = 2 * static_cast<std::size_t>(samples);
  std::vector<cplx> ker(n2);
  const double c = 1.0 / (s.sigma * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < n2; ++i) {
    const double off = (i < n2 / 2 ? static_cast<double>(i) : static_cast<double>(i) - n2) * dr;
    ker[i] = c * std::exp(-0.5 * off * off / (s.sigma * s.sigma)) * dr;
  }
  fft::forward_1d(ker);
  UniformSource rng(s.seed);
  WeightConvRun out;
  for (int k = 0; k < s.count; ++k) {
    std::array<double, 9> p{};
    for (auto& v : p) v = rng.next();
    std::vector<double> g(samples);
    for (int i = 0; i < samples; ++i) {
      double v = 0.0;
      for (int b = 0; b < 3; ++b) {
        const double centre = s.half_width * (0.5 * p[3 * b] - 0.25);
        const double width = 2.0 + 14.0 * p[3 * b + 1];
        v += (0.5 + p[3 * b + 2]) * smooth::bump((r[i] - centre) / width);
      }
      g[i] = v;
    }
    std::vector<cplx> buf(n2);
    for (int i = 0; i < samples; ++i) buf[i] = g[i] * std::pow(1.0 + std::abs(r[i]), s.a);
    fft::forward_1d(buf);
    for (std::size_t i = 0; i < n2; ++i) buf[i] *= ker[i];
    fft::inverse_1d(buf);
    std::vector<double> conv(samples);
    for (int i = 0; i < samples; ++i)
      conv[i] = std::abs(buf[i]) / static_cast<double>(n2) * std::pow(1.0 + std::abs(r[i]), -s.a);
    out.lhs.push_back(mu_lorentz_norm(r, conv, s.d, s.u, s.s));
    out.rhs.push_back(mu_lorentz_norm(r, g, s.d, s.u, s.s));
  }
  return out;
}

}  // namespace

RatioReport check_weight_convolution(const WeightConvolutionSetup& setup) {
  if (!(setup.sigma > 0.0)) throw ParameterError("weight convolution: sigma must be positive");
  const WeightConvRun base = weight_convolution_run(setup, setup.samples);
  const WeightConvRun fine = weight_convolution_run(setup, 2 * setup.samples);
  RatioReport rep;
  rep.name = "check_weight_convolution";
  double drift = 0.0;
  for (std::size_t k = 0; k < base.lhs.size(); ++k) {
    rep.add("g" + std::to_string(k), base.lhs[k], base.rhs[k]);
    drift = std::max(drift, std::abs((fine.lhs[k] / fine.rhs[k]) / (base.lhs[k] / base.rhs[k]) - 1.0));
  }
  rep.finalize();
  rep.symmetry_drift = drift;
  rep.metrics["kernel_l1"] = 1.0;
  rep.params = {{"a", fmt(setup.a)},      {"u", fmt(setup.u)},
                {"s", fmt(setup.s)},      {"d", std::to_string(setup.d)},
                {"sigma", fmt(setup.sigma)}, {"samples", std::to_string(setup.samples)}};
  return rep;
}

std::vector<Profile1D> single_block_profiles(const std::vector<int>& j0s, double resolution) {
  std::vector<Profile1D> out;
  for (int j0 : j0s) {
    const double w = std::ldexp(1.0, j0 - 1);
    Profile1D h = formula_profile(
        [w](double r) { return cplx(smooth::bump((r - 1.25) / 0.7) * std::cos(w * (r - 1.25))); },
        0.55, 1.95, resolution);
    h.kind = "single_block";
    h.params = {{"j0", j0}};
    out.push_back(std::move(h));
  }
  return out;
}

RatioReport check_lambda_besov(const LambdaBesovSetup& setup) {
  if (!(setup.alpha > 0.0) || !(setup.b > 0.0))
    throw ParameterError("lambda-besov: alpha and b must be positive");
  RatioReport rep;
  rep.name = "check_lambda_besov";
  int skipped = 0;
  for (std::size_t p = 0; p < setup.profiles.size(); ++p) {
    const Profile1D& h = setup.profiles[p];
    if (h.sup_norm() == 0.0) {
      ++skipped;
      continue;
    }
    const VjDecomposition vj = vj_decompose(h, setup.j_max);
    double acc = 0.0;
    for (int j = 0; j <= setup.j_max; ++j) {
      const double v = std::exp2(j * setup.alpha) * lambda_jb(vj.components[j], setup.b);
      acc = std::isinf(setup.s) ? std::max(acc, v) : acc + std::pow(v, setup.s);
    }
    const double lhs = std::isinf(setup.s) ? acc : std::pow(acc, 1.0 / setup.s);
    const double rhs = besov_norm(h, setup.alpha, setup.s, setup.j_max);
    std::string id = h.kind + std::to_string(p);
    for (const auto& [k, v] : h.params) id += "_" + k + "=" + fmt(v);
    rep.add(id, lhs, rhs);
  }
  rep.finalize();
  rep.metrics["skipped"] = skipped;
  rep.symmetry_drift = rep.max_ratio / rep.min_ratio - 1.0;
  rep.params = {{"alpha", fmt(setup.alpha)},
                {"s", std::isinf(setup.s) ? "inf" : fmt(setup.s)},
                {"b", fmt(setup.b)},
                {"j_max", std::to_string(setup.j_max)}};
  return rep;
}

RatioReport check_sobolev_embedding(const SobembSetup& setup) {
  if (!(setup.gamma > 0.5)) throw ParameterError("sobolev embedding: gamma must exceed 1/2");
  const GridSpec& spec = setup.bank.spec;
  const int j_max = *std::max_element(setup.js.begin(), setup.js.end());
  const VjDecomposition vj = vj_decompose(setup.h, j_max);
  const double bnorm = besov_norm(setup.h, setup.gamma, 1.0);
  RatioReport rep;
  rep.name = "check_sobolev_embedding";
  DriftTracker drift;
  for (int j : setup.js) {
    const Profile1D& comp = vj.components[j];
    for (const auto& e : setup.bank.entries) {
      for (int m : setup.dilations) {
        const GridFunction f = e.sample(spec, m);
        std::vector<GridFunction> outs(setup.t_steps + 1);
        parallel_for(outs.size(), [&](std::size_t i) {
          const double t = std::exp2(static_cast<double>(i) / setup.t_steps);
          outs[i] = t_jk(f, setup.rho, comp, m, t);
        });
        const double lhs = pointwise_sup(outs).l2_norm();
        const double rhs = std::exp2(j * (0.5 - setup.gamma)) * bnorm * f.l2_norm();
        const std::string id = e.label + "/j" + std::to_string(j);
        drift.record(id, m, lhs / rhs);
        if (m == 0) rep.add(id, lhs, rhs);
      }
    }
  }
  rep.finalize();
  rep.symmetry_drift = drift.drift();
  rep.params = {{"gamma", fmt(setup.gamma)},
                {"js", detail::join(setup.js)},
                {"profile", setup.h.kind},
                {"rho", setup.rho.label()},
                {"grid", grid_label(spec)}};
  return rep;
}

RatioReport check_kernel_decay(const KernelDecaySetup& setup) {
  if (setup.js.empty()) throw ParameterError("kernel decay: no j");
  const int j_max = *std::max_element(setup.js.begin(), setup.js.end());
  const VjDecomposition vj = vj_decompose(setup.h, j_max);
  const double hsup = setup.h.sup_norm();
  RatioReport rep;
  rep.name = "check_kernel_decay";
  double max_slope = -std::numeric_limits<double>::infinity();
  int min_fit = std::numeric_limits<int>::max();
  for (int j : setup.js) {
    const KernelDecay kd =
        kernel_decay_probe(setup.spec, setup.rho, vj.components[j], j, setup.s, setup.c0);
    rep.add("j" + std::to_string(j), kd.inner_sup * std::exp2(4.0 * j), hsup);
    rep.metrics["outer_slope_j" + std::to_string(j)] = kd.outer_slope;
    rep.metrics["fit_points_j" + std::to_string(j)] = kd.fit_points;
    rep.metrics["outer_sup_j" + std::to_string(j)] = kd.outer_sup / kd.global_sup;
    max_slope = std::max(max_slope, kd.outer_slope);
    min_fit = std::min(min_fit, kd.fit_points);
  }
  rep.finalize();
  rep.metrics["max_outer_slope"] = max_slope;
  rep.metrics["min_fit_points"] = min_fit;
  rep.metrics["inner_scaling"] = rep.max_ratio / rep.per_entry.front().ratio;
  rep.params = {{"js", detail::join(setup.js)},
                {"s", fmt(setup.s)},
                {"c0", std::to_string(setup.c0)},
                {"profile", setup.h.kind},
                {"rho", setup.rho.label()},
                {"grid", grid_label(setup.spec)}};
  return rep;
}

RatioReport check_kappa_asymptotics(const KappaSetup& setup) {
  if (!(setup.lambda > 0.0) || !(setup.gamma >= 0.0))
    throw ParameterError("kappa: need lambda > 0 and gamma >= 0");
  if (!(setup.r_lo > 1.0 && setup.r_hi > setup.r_lo)) throw ParameterError("kappa: bad r range");
  const double R = 2.0 * setup.r_hi;
  int n_r = 2;
  while (n_r < 2.0 * R) n_r *= 2;
  const Kernel1D K =
      kappa_lg(setup.lambda, setup.gamma, R, n_r, setup.kernel_options, setup.resolution);
  const double dr = K.spacing();
  RatioReport rep;
  rep.name = "check_kappa_asymptotics";
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  constexpr int kPerOctave = 16;
  const int total = static_cast<int>(std::floor(kPerOctave * std::log2(setup.r_hi / setup.r_lo)));
  for (int k = 0; k <= total; ++k) {
    const double target = setup.r_lo * std::exp2(static_cast<double>(k) / kPerOctave);
    const long idx = std::lround(target / dr) + n_r / 2;
    const double r = K.r[idx];
    const double mag = std::abs(K.values[idx]);
    const double comp = mag * std::pow(r, setup.lambda + 1.0) * std::pow(std::log(r), setup.gamma);
    rep.add("r=" + fmt(r), comp, 1.0);
    const double x = std::log(r), y = std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  rep.finalize();
  rep.metrics["envelope_slope"] = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.metrics["band"] = rep.max_ratio / rep.min_ratio;
  const long i512 = std::lround(512.0 / dr) + n_r / 2;
  rep.metrics["magnitude_at_512"] = std::abs(K.values[i512]);
  rep.params = {{"lambda", fmt(setup.lambda)},
                {"gamma", fmt(setup.gamma)},
                {"r_range", fmt(setup.r_lo) + ".." + fmt(setup.r_hi)},
                {"resolution", fmt(setup.resolution)}};
  return rep;
}

}  // namespace qrlab
