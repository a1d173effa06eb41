#include "qrlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "check_util.hpp"
#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/smooth.hpp"

namespace qrlab {

using detail::DriftTracker;
using detail::fmt;

void require_alpha_range(double alpha, int dim, bool enforce) {
  if (!enforce) return;
  if (!(alpha > 0.5 && alpha < 0.5 * dim))
    throw ParameterError("alpha = " + fmt(alpha) + " outside (1/2, d/2); set enforce_range = false "
                         "to explore outside the range");
}

namespace {

void require_unit_support(const Profile1D& h) {
  if (h.support_lo() < 0.5 - 1e-12 || h.support_hi() > 2.0 + 1e-12)
    throw ParameterError("profile " + h.kind + " must be supported in [1/2, 2]");
}

std::string q_label(double q) { return std::isinf(q) ? "inf" : fmt(q); }

}  // namespace

std::vector<RatioReport> check_herz_maximal(const HerzMaximalSetup& setup) {
  const GridSpec& spec = setup.bank.spec;
  require_alpha_range(setup.alpha, spec.dim, setup.enforce_range);
  if (setup.profiles.empty()) throw ParameterError("check_herz_maximal: no profiles");
  if (setup.bank.entries.empty()) throw ParameterError("check_herz_maximal: empty bank");
  if (std::find(setup.dilations.begin(), setup.dilations.end(), 0) == setup.dilations.end())
    throw ParameterError("check_herz_maximal: dilations must include 0");
  for (const auto& h : setup.profiles) require_unit_support(h);

  const std::size_t nq = setup.qs.size();
  std::vector<RatioReport> reports(nq);
  std::vector<DriftTracker> drift(nq);
  std::vector<double> refined_max(nq, 0.0);
  std::vector<std::vector<double>> besov(setup.profiles.size(), std::vector<double>(nq));
  for (std::size_t p = 0; p < setup.profiles.size(); ++p)
    for (std::size_t iq = 0; iq < nq; ++iq)
      besov[p][iq] = besov_norm(setup.profiles[p], setup.alpha, detail::holder_dual(setup.qs[iq]));

  const HerzOptions out_opts{2.0, setup.output_uncovered_tolerance};
  double worst_uncovered = 0.0;
  for (const auto& entry : setup.bank.entries) {
    for (std::size_t p = 0; p < setup.profiles.size(); ++p) {
      const Profile1D& h = setup.profiles[p];
      const std::string id = entry.label + "/" + h.kind + std::to_string(p);
      for (int m : setup.dilations) {
        const GridFunction f = entry.sample(spec, m);
        const auto dec = annuli(spec, setup.l_min - m, setup.l_max - m, true);
        const GridFunction mf = maximal_function(f, setup.rho, h, setup.tgrid.shifted(m));
        worst_uncovered = std::max(worst_uncovered, uncovered_fraction(mf, dec));
        GridFunction mf2;
        if (m == 0 && setup.refine)
          mf2 = maximal_function(f, setup.rho, h, setup.tgrid.refined());
        for (std::size_t iq = 0; iq < nq; ++iq) {
          const double q = setup.qs[iq];
          const double lhs_q = std::max(q, 2.0);
          const double lhs = herz_norm(mf, -setup.alpha, lhs_q, dec, out_opts);
          const double rhs = besov[p][iq] * herz_norm(f, -setup.alpha, q, dec);
          drift[iq].record(id, m, lhs / rhs);
          if (m != 0) continue;
          reports[iq].add(id, lhs, rhs);
          if (setup.refine) {
            const double lhs2 = herz_norm(mf2, -setup.alpha, lhs_q, dec, out_opts);
            refined_max[iq] = std::max(refined_max[iq], lhs2 / rhs);
          }
        }
      }
    }
  }
  for (std::size_t iq = 0; iq < nq; ++iq) {
    RatioReport& r = reports[iq];
    r.name = "check_herz_maximal";
    r.finalize();
    r.symmetry_drift = drift[iq].drift();
    if (setup.refine) r.metrics["refinement_change"] = std::abs(refined_max[iq] / r.max_ratio - 1.0);
    r.metrics["output_uncovered_max"] = worst_uncovered;
    r.params = {{"alpha", fmt(setup.alpha)},
                {"q", q_label(setup.qs[iq])},
                {"s", q_label(detail::holder_dual(setup.qs[iq]))},
                {"rho", setup.rho.label()},
                {"grid", std::to_string(spec.dim) + "d n=" + std::to_string(spec.n) +
                             " L=" + fmt(spec.half_width)},
                {"bank_seed", std::to_string(setup.bank.seed)},
                {"bank_count", std::to_string(setup.bank.entries.size())},
                {"tgrid", std::to_string(setup.tgrid.k_min) + ".." +
                              std::to_string(setup.tgrid.k_max) + " M=" +
                              std::to_string(setup.tgrid.M)},
                {"annuli", std::to_string(setup.l_min) + ".." + std::to_string(setup.l_max)},
                {"dilations", detail::join(setup.dilations)}};
  }
  return reports;
}

double multiplier_phi(double s) { return smooth::bump((s - 1.25) / 0.75); }

double sobolev_norm(const Profile1D& g, double alpha) {
  std::vector<cplx> v = g.samples();
  fft::forward_1d(v);
  const std::size_t n = v.size();
  const double dx = g.spacing();
  const double dw = 2.0 * std::numbers::pi / (n * dx);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n) * dw;
    acc += std::pow(1.0 + w * w, alpha) * std::norm(v[k] * dx);
  }
  return std::sqrt(acc * dw / (2.0 * std::numbers::pi));
}

namespace {

struct BlockMultiplier {
  std::vector<double> c;
  int k_min = 0;
  double operator()(double s) const {
    if (!(s > 0.0)) return 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0.0) v += c[i] * smooth::lp_block(std::ldexp(s, -(k_min + static_cast<int>(i))));
    return v;
  }
  double support_hi() const { return std::ldexp(2.0, k_min + static_cast<int>(c.size()) - 1); }
};

double sup_sobolev(const BlockMultiplier& m, double alpha, int steps) {
  const int k_hi = m.k_min + static_cast<int>(m.c.size()) - 1;
  double best = 0.0;
  for (int i = (m.k_min - 2) * steps; i <= (k_hi + 2) * steps; ++i) {
    const double t = std::exp2(static_cast<double>(i) / steps);
    const Profile1D g = formula_profile(
        [&m, t](double s) { return cplx(multiplier_phi(s) * m(t * s)); }, 0.5, 2.0);
    best = std::max(best, sobolev_norm(g, alpha));
  }
  return best;
}

double weighted_ratio(const GridFunction& f, const DistanceFunction& rho, const BlockMultiplier& m,
                      double a) {
  const GridFunction tf =
      apply_symbol(f, rho, {[&m](double r) { return cplx(m(r)); }, m.support_hi()});
  return weighted_l2_norm(tf, a) / weighted_l2_norm(f, a);
}

double bank_norm(const TestBank& bank, const DistanceFunction& rho, const BlockMultiplier& m,
                 double a, int dilation) {
  double best = 0.0;
  for (const auto& e : bank.entries)
    best = std::max(best, weighted_ratio(e.sample(bank.spec, dilation), rho, m, a));
  return best;
}

}  // namespace

RatioReport check_multiplier_equivalence(const MultiplierSetup& setup) {
  const GridSpec& spec = setup.spec;
  require_alpha_range(setup.alpha, spec.dim, setup.enforce_range);
  if (setup.k_min > setup.k_max) throw ParameterError("multiplier: empty block range");
  if (setup.bank.entries.empty()) throw ParameterError("multiplier: empty bank");
  const double a = -2.0 * setup.alpha;
  UniformSource rng(setup.seed);
  const int blocks = setup.k_max - setup.k_min + 1;

  // probes phi(rho/t) e^{-i tau rho / t}, t at every block centre
  std::vector<GridFunction> probes;
  for (int k = setup.k_min; k <= setup.k_max; ++k) {
    const double t = std::ldexp(1.0, k);
    for (double tau : setup.taus) {
      GridFunction ghat = sample_spectrum(spec, [&](const std::array<double, 3>& xi) {
        const double r = setup.rho(xi) / t;
        const double p = multiplier_phi(r);
        return p == 0.0 ? cplx(0.0) : p * std::polar(1.0, -tau * r);
      });
      probes.push_back(dft_inverse(ghat));
    }
  }

  RatioReport rep;
  rep.name = "check_multiplier_equivalence";
  std::vector<double> reverse;
  double duality = 1.0;
  for (int d = 0; d < setup.draws; ++d) {
    BlockMultiplier m{std::vector<double>(blocks), setup.k_min};
    for (auto& c : m.c) c = rng.sign();
    const double S = sup_sobolev(m, setup.alpha, setup.t_steps);
    if (!(S > 0.0)) throw ParameterError("multiplier: degenerate m");
    const double n_minus = bank_norm(setup.bank, setup.rho, m, a, 0);
    const double n_plus = bank_norm(setup.bank, setup.rho, m, -a, 0);
    duality = std::max(duality, std::max(n_plus / n_minus, n_minus / n_plus));
    double probe_best = 0.0;
    for (const auto& g : probes) probe_best = std::max(probe_best, weighted_ratio(g, setup.rho, m, a));
    rep.add("draw_" + std::to_string(d), n_minus, S);
    reverse.push_back(S / probe_best);
  }
  rep.finalize();
  const auto [rmin, rmax] = std::minmax_element(reverse.begin(), reverse.end());
  rep.metrics["forward_max"] = rep.max_ratio;
  rep.metrics["forward_band"] = rep.max_ratio / rep.min_ratio;
  rep.metrics["reverse_max"] = *rmax;
  rep.metrics["reverse_min"] = *rmin;
  rep.metrics["reverse_band"] = *rmax / *rmin;
  rep.metrics["duality_discrepancy"] = duality;

  // single block psi(2^-k0 s) against the bank dilated by k0
  DriftTracker single;
  const int k_mid = (setup.k_min + setup.k_max) / 2;
  for (int k0 = std::max(setup.k_min, k_mid - 1); k0 <= std::min(setup.k_max, k_mid + 1); ++k0) {
    BlockMultiplier m{{1.0}, k0};
    const double S = sup_sobolev(m, setup.alpha, setup.t_steps);
    const double N = bank_norm(setup.bank, setup.rho, m, a, k0 - k_mid);
    single.record("block", k0 - k_mid, N / S);
  }
  rep.symmetry_drift = single.drift();
  rep.metrics["single_block_drift"] = rep.symmetry_drift;
  rep.params = {{"alpha", fmt(setup.alpha)},
                {"blocks", std::to_string(setup.k_min) + ".." + std::to_string(setup.k_max)},
                {"draws", std::to_string(setup.draws)},
                {"seed", std::to_string(setup.seed)},
                {"rho", setup.rho.label()},
                {"taus", detail::join(setup.taus)}};
  return rep;
}

RatioReport check_square_function(const SquareFunctionSetup& setup) {
  const GridSpec& spec = setup.bank.spec;
  require_alpha_range(setup.alpha, spec.dim, setup.enforce_range);
  const double a = -2.0 * setup.alpha;
  SquareFunctionOptions opts = setup.options;
  opts.weight_power = a;
  RatioReport rep;
  rep.name = "check_square_function";
  DriftTracker drift;
  double worst_tail = 0.0;
  for (const auto& e : setup.bank.entries) {
    for (int m : setup.dilations) {
      const GridFunction f = e.sample(spec, m);
      const SquareFunctionResult g = stein_square_function(f, setup.rho, setup.alpha, opts);
      const double lhs = g.weighted_l2_norm(a);
      const double rhs = weighted_l2_norm(f, a);
      worst_tail = std::max(worst_tail, g.weighted_tail / (lhs * lhs));
      drift.record(e.label, m, lhs / rhs);
      if (m == 0) rep.add(e.label, lhs, rhs);
    }
  }
  rep.finalize();
  rep.symmetry_drift = drift.drift();
  rep.metrics["tail_share_max"] = worst_tail;
  rep.params = {{"alpha", fmt(setup.alpha)},
                {"rho", setup.rho.label()},
                {"bank_seed", std::to_string(setup.bank.seed)},
                {"bank_count", std::to_string(setup.bank.entries.size())},
                {"dilations", detail::join(setup.dilations)},
                {"period_margin", fmt(setup.options.period_margin)},
                {"window_fraction", fmt(setup.options.window_fraction)}};
  return rep;
}

RatioReport check_square_function_shells(const GridSpec& spec, const DistanceFunction& rho,
                                         double alpha, const std::vector<double>& radii,
                                         double width_fraction,
                                         const SquareFunctionOptions& options) {
  require_alpha_range(alpha, spec.dim, true);
  const double a = -2.0 * alpha;
  SquareFunctionOptions opts = options;
  opts.weight_power = a;
  const double oracle = 1.0 / std::sqrt(2.0 * alpha * (2.0 * alpha - 1.0));
  RatioReport rep;
  rep.name = "check_square_function_shells";
  double l2_err = 0.0;
  for (double R : radii) {
    const double w = width_fraction * R;
    const GridFunction fhat = sample_spectrum(spec, [&](const std::array<double, 3>& xi) {
      return cplx(smooth::bump((rho(xi) - R) / w));
    });
    const GridFunction f = dft_inverse(fhat);
    const SquareFunctionResult g = stein_square_function(f, rho, alpha, opts);
    const double l2 = g.l2_norm() / f.l2_norm();
    rep.metrics["l2_ratio_R" + fmt(R)] = l2;
    l2_err = std::max(l2_err, std::abs(l2 / oracle - 1.0));
    rep.add("R=" + fmt(R), g.weighted_l2_norm(a), weighted_l2_norm(f, a));
  }
  rep.finalize();
  rep.metrics["oracle"] = oracle;
  rep.metrics["l2_error_max"] = l2_err;
  rep.metrics["spread"] = rep.max_ratio / rep.min_ratio - 1.0;
  rep.symmetry_drift = rep.metrics["spread"];
  rep.params = {{"alpha", fmt(alpha)},
                {"radii", detail::join(radii)},
                {"width_fraction", fmt(width_fraction)},
                {"rho", rho.label()}};
  return rep;
}

std::vector<Profile1D> flu_profile_family(const std::vector<double>& widths,
                                          const std::vector<double>& modulations,
                                          double resolution) {
  std::vector<Profile1D> out;
  for (double w : widths)
    for (double R : modulations) {
      Profile1D h = formula_profile(
          [w, R](double r) { return cplx(smooth::bump((r - 1.0) / w) * std::cos(R * (r - 1.0))); },
          1.0 - w, 1.0 + w, resolution);
      h.kind = "modulated_bump";
      h.params = {{"width", w}, {"modulation", R}};
      out.push_back(std::move(h));
    }
  return out;
}

RatioReport check_flu_equivalence(const FluSetup& setup) {
  if (!(setup.u > 1.0 && setup.u < 2.0)) throw ParameterError("flu: u must lie in (1, 2)");
  const GridSpec& spec = setup.spec;
  RatioReport rep;
  rep.name = "check_flu_equivalence";
  const auto& rv = cached_rho(spec, setup.rho);
  for (std::size_t p = 0; p < setup.profiles.size(); ++p) {
    const Profile1D& h = setup.profiles[p];
    // guard: the symbol must fit inside the frequency box
    const GridFunction probe(spec, Domain::space, std::vector<cplx>(spec.size(), cplx(1.0)));
    nyquist_guard(probe, setup.rho, h.support_hi());
    GridFunction khat(spec, Domain::frequency);
    for (std::size_t i = 0; i < khat.size(); ++i) khat[i] = h(rv[i]);
    const double lhs = lorentz_norm(dft_inverse(khat), setup.u, setup.s);
    KernelOptions ko = setup.kernel_options;
    ko.weight_dim = spec.dim;
    const Kernel1D K =
        kernel_1d(h, setup.rho.beta(), setup.kernel_half_width, setup.kernel_samples, ko);
    const double rhs = mu_lorentz_norm(K, setup.u, setup.s);
    std::string id = h.kind + std::to_string(p);
    for (const auto& [k, v] : h.params) id += "_" + k + "=" + fmt(v);
    rep.add(id, lhs, rhs);
  }
  rep.finalize();
  rep.metrics["spread"] = rep.max_ratio / rep.min_ratio;
  rep.params = {{"u", fmt(setup.u)},
                {"s", fmt(setup.s)},
                {"rho", setup.rho.label()},
                {"grid", std::to_string(spec.dim) + "d n=" + std::to_string(spec.n) +
                             " L=" + fmt(spec.half_width)},
                {"kernel_half_width", fmt(setup.kernel_half_width)},
                {"kernel_samples", std::to_string(setup.kernel_samples)}};
  return rep;
}

const std::vector<ExperimentInfo>& experiment_list() {
  static const std::vector<ExperimentInfo> list{
      {"check_herz_maximal", "Herz-space bound for the quasiradial maximal function"},
      {"check_multiplier_equivalence",
       "weighted L2 boundedness of quasiradial multipliers vs the localized Sobolev condition"},
      {"check_square_function", "weighted L2 bound for the Riesz-means square function"},
      {"check_flu_equivalence", "Lorentz norm of a quasiradial kernel vs its 1-d model"},
      {"check_trace", "restriction of g^ to the rho sphere vs int |g|^2 |x|^b"},
      {"check_basic_maximal", "local maximal function over 1 < t < 2 in L2(|x|^-b)"},
      {"check_atau", "tau-integrated weighted bound for the wave-type multipliers A_tau"},
      {"check_weight_convolution", "convolution with a rapidly decaying kernel between weights"},
      {"check_embedding", "annular Lorentz embedding"},
      {"check_littlewood_paley", "Littlewood-Paley square function on Herz spaces"},
      {"check_lambda_besov", "weighted V_j masses against the Besov norm of the profile"},
      {"check_sobolev_embedding", "single-block maximal bound through the Besov norm"},
      {"check_kernel_decay", "decay of the localized kernels K_{j,s} inside and outside"},
      {"check_kappa_asymptotics", "large-r size of the Riesz-mean kernel kappa_{lambda,gamma}"},
      {"convergence_experiment", "a.e. convergence of Riesz means on a probe annulus"},
  };
  return list;
}

}  // namespace qrlab
