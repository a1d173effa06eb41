// Acceptance gate: one PASS/FAIL line per criterion.
// Usage: qrlab_acceptance [criterion numbers...]   (all when none given)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qrlab/bank.hpp"
#include "qrlab/distance.hpp"
#include "qrlab/errors.hpp"
#include "qrlab/grid.hpp"
#include "qrlab/operator.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/report.hpp"
#include "qrlab/smooth.hpp"
#include "qrlab/spaces.hpp"
#include "qrlab/verify.hpp"

using namespace qrlab;

namespace {

// Tolerances and budgets, pinned.
constexpr double kParseval = 1e-9;
constexpr double kRoundTrip = 1e-10;
constexpr double kVjRecon = 1e-8;
constexpr double kVjLeak = 1e-10;
constexpr double kLpRecon = 1e-9;
constexpr double kLorentzLp = 1e-12;
constexpr double kHerzAnnulus = 0.02;
constexpr double kShellOracle = 0.03;
constexpr double kIndicator = 0.01;
constexpr double kMuDisplay = 1e-8;
constexpr double kDrift5 = 0.05;
constexpr double kRefine = 0.02;
constexpr double kShellSpread = 0.05;
constexpr double kFluSpread = 8.0;
constexpr double kBand10 = 10.0;
constexpr double kOuterSlope = -3.5;
constexpr double kInnerFactor = 4.0;
constexpr double kKappaSlope = -1.25;
constexpr double kKappaSlopeTol = 0.1;
constexpr double kKappaBand = 10.0;
constexpr double kConvRatio = 0.25;
constexpr double kBandLimited = 1e-8;
constexpr double kDrift10 = 0.10;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    note << (ok ? "" : "!") << what << "; ";
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

DistanceFunction euclid() { return builtin_distance(DistanceKind::euclidean, {}); }

DistanceFunction ellipse() {
  DistanceParams p;
  p.axes = {1.0, 1.5};
  return builtin_distance(DistanceKind::ellipse, p);
}

bool finite_report(const RatioReport& r) {
  for (const auto& e : r.per_entry)
    if (!std::isfinite(e.ratio)) return false;
  return !r.per_entry.empty();
}

// ---------------------------------------------------------------- 1
void exactness(Outcome& o) {
  const GridSpec spec = make_grid(2, 256, 8.0);
  BankOptions bo;
  bo.scale = 1.0;
  const TestBank bank = make_bank(spec, 11, 4, bo);

  double pars = 0.0, trip = 0.0;
  for (const auto& e : bank.entries) {
    const GridFunction& f = e.values;
    const GridFunction fh = dft_forward(f);
    pars = std::max(pars, std::abs(fh.l2_norm_squared() / f.l2_norm_squared() - 1.0));
    const GridFunction back = dft_inverse(fh);
    trip = std::max(trip, (back - f).max_abs() / f.max_abs());
  }
  o.check(pars < kParseval, "parseval " + num(pars));
  o.check(trip < kRoundTrip, "round trip " + num(trip));

  const Profile1D h = bump_profile(1.0, 0.45);
  const int jm = max_block_index(h);
  const VjDecomposition vj = vj_decompose(h, jm);
  std::vector<cplx> sum(h.size(), cplx(0.0));
  double leak = 0.0;
  for (int j = 0; j <= jm; ++j) {
    const auto& c = vj.components[j].samples();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c[i];
    if (vj.components[j].l2_norm() > 1e-300) leak = std::max(leak, spectral_leakage(vj.components[j], j));
  }
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    err += std::norm(sum[i] - h.samples()[i]);
    ref += std::norm(h.samples()[i]);
  }
  const double vj_err = std::sqrt(err / ref);
  o.check(vj_err < kVjRecon, "V_j recon " + num(vj_err));
  o.check(leak < kVjLeak, "V_j leakage " + num(leak));

  BankOptions bl;
  bl.families = {BankFamily::band_limited};
  const TestBank shells = make_bank(spec, 12, 3, bl);
  double lp = 0.0;
  const DistanceFunction rho = euclid();
  for (const auto& e : shells.entries) {
    const int k_lo = static_cast<int>(std::floor(std::log2(e.shell_lo))) - 1;
    const int k_hi = static_cast<int>(std::ceil(std::log2(e.shell_hi))) + 1;
    const auto blocks = lp_blocks(e.values, rho, k_lo, k_hi);
    GridFunction acc(spec, Domain::space);
    for (const auto& b : blocks) acc += b;
    lp = std::max(lp, (acc - e.values).max_abs() / e.values.max_abs());
  }
  o.check(lp < kLpRecon, "LP recon " + num(lp));

  double lor = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    for (const auto& e : bank.entries) {
      double s = 0.0;
      for (std::size_t i = 0; i < e.values.size(); ++i) s += std::pow(std::abs(e.values[i]), p);
      const double lp_norm = std::pow(s * spec.cell_volume(), 1.0 / p);
      lor = std::max(lor, std::abs(lorentz_norm(e.values, p, p) / lp_norm - 1.0));
    }
  }
  o.check(lor < kLorentzLp, "Lorentz p=q " + num(lor));

  const auto dec = annuli(spec, 0, 0);
  GridFunction ind(spec, Domain::space);
  for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = dec.label[i] == 0 ? 1.0 : 0.0;
  const double herz = herz_norm(ind, 0.0, 2.0, dec);
  const double herz_err = std::abs(herz / std::sqrt(3.0 * std::numbers::pi) - 1.0);
  o.check(herz_err < kHerzAnnulus, "Herz annulus " + num(herz_err));
}

// ---------------------------------------------------------------- 2
void oracles(Outcome& o) {
  const GridSpec spec = make_grid(2, 256, 64.0);
  for (double alpha : {0.6, 0.9}) {
    const RatioReport r =
        check_square_function_shells(spec, euclid(), alpha, {0.75, 1.5}, 0.1);
    o.check(r.metrics.at("l2_error_max") < kShellOracle,
            "G shell a=" + num(alpha) + " " + num(r.metrics.at("l2_error_max")));
  }

  // indicator of a unit-measure square (16 x 16 cells of side 1/16)
  const GridSpec g = make_grid(2, 256, 8.0);
  GridFunction ind(g, Domain::space);
  for (std::size_t i = 0; i < ind.size(); ++i) {
    const auto idx = g.unflatten(i);
    ind[i] = (idx[0] >= 100 && idx[0] < 116 && idx[1] >= 40 && idx[1] < 56) ? 1.0 : 0.0;
  }
  double ind_err = 0.0;
  for (double p : {1.5, 2.0, 4.0})
    for (double q : {1.0, 2.0, 3.0, 8.0}) {
      const double want = std::pow(p / q, 1.0 / q);
      ind_err = std::max(ind_err, std::abs(lorentz_norm(ind, p, q) / want - 1.0));
    }
  o.check(ind_err < kIndicator, "indicator " + num(ind_err));

  const Profile1D h = bump_profile(1.0, 0.3);
  const Kernel1D K = kernel_1d(h, 1.0, 256.0, 1 << 14);
  double mu_err = 0.0;
  for (double u : {1.2, 1.5, 1.8}) {
    double s = 0.0;
    const double dr = K.spacing();
    for (std::size_t i = 0; i < K.r.size(); ++i)
      s += std::pow(std::abs(K.values[i]), u) * std::pow(1.0 + std::abs(K.r[i]), 1.0 - u / 2.0) * dr;
    const double display = std::pow(s, 1.0 / u);
    mu_err = std::max(mu_err, std::abs(mu_lorentz_norm(K, u, u) / display - 1.0));
  }
  o.check(mu_err < kMuDisplay, "mu display " + num(mu_err));
}

// ---------------------------------------------------------------- 3
BankOptions localized_bank() {
  BankOptions bo;
  bo.scale = 8.0;
  bo.families = {BankFamily::gaussian, BankFamily::modulated_gaussian, BankFamily::smoothed_annulus};
  bo.sigma_spread = 0.25;
  bo.offset_max = 0.5;
  bo.modulation_lo = 0.5;
  bo.modulation_hi = 1.5;
  bo.annulus_width_lo = 0.8;
  bo.annulus_width_hi = 1.0;
  return bo;
}

void herz_maximal(Outcome& o) {
  const GridSpec spec = make_grid(2, 512, 256.0);
  HerzMaximalSetup s;
  s.rho = euclid();
  s.bank = make_bank(spec, 7, 12, localized_bank());
  s.profiles = {bump_profile(1.0, 0.45), riesz_profile(0.5, 0.0, kDefaultProfileResolution, true),
                riesz_profile(0.25, 2.0, kDefaultProfileResolution, true)};
  const auto reports = check_herz_maximal(s);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const std::string q = r.params.at("q");
    o.check(finite_report(r), "q=" + q + " max " + num(r.max_ratio));
    o.check(r.symmetry_drift < kDrift5, "drift " + num(r.symmetry_drift));
    o.check(r.metrics.at("refinement_change") < kRefine,
            "refine " + num(r.metrics.at("refinement_change")));
  }
}

// ---------------------------------------------------------------- 4
void square_function(Outcome& o) {
  const GridSpec spec = make_grid(2, 256, 128.0);
  BankOptions bo = localized_bank();
  bo.scale = 3.0;
  for (double alpha : {0.6, 0.9}) {
    SquareFunctionSetup s;
    s.rho = euclid();
    s.alpha = alpha;
    s.bank = make_bank(spec, 5, 4, bo);
    const RatioReport r = check_square_function(s);
    o.check(finite_report(r), "a=" + num(alpha) + " max " + num(r.max_ratio));
    o.check(r.symmetry_drift < kDrift5, "drift " + num(r.symmetry_drift));
    const RatioReport sh = check_square_function_shells(spec, euclid(), alpha, {0.5, 1.0, 2.0}, 0.1);
    o.check(sh.metrics.at("spread") < kShellSpread, "shell spread " + num(sh.metrics.at("spread")));
  }
}

// ---------------------------------------------------------------- 5
void flu(Outcome& o) {
  const auto profiles = flu_profile_family({1.0 / 8, 1.0 / 16, 1.0 / 32}, {0.0, 8.0, 32.0});
  for (const auto& rho : {euclid(), ellipse()}) {
    FluSetup s;
    s.spec = make_grid(2, 1024, 512.0);
    s.rho = rho;
    s.profiles = profiles;
    const RatioReport r = check_flu_equivalence(s);
    o.check(finite_report(r) && r.metrics.at("spread") <= kFluSpread,
            rho.label() + " spread " + num(r.metrics.at("spread")));
  }
}

// ---------------------------------------------------------------- 6
void multiplier(Outcome& o) {
  MultiplierSetup s;
  s.spec = make_grid(2, 256, 128.0);
  s.rho = euclid();
  BankOptions bo = localized_bank();
  bo.scale = 6.0;
  s.bank = make_bank(s.spec, 9, 6, bo);
  const RatioReport r = check_multiplier_equivalence(s);
  o.check(r.metrics.at("forward_band") <= kBand10, "forward band " + num(r.metrics.at("forward_band")));
  o.check(r.metrics.at("reverse_band") <= kBand10, "reverse band " + num(r.metrics.at("reverse_band")));
  o.check(r.metrics.at("single_block_drift") < kDrift5,
          "single block drift " + num(r.metrics.at("single_block_drift")));
}

// ---------------------------------------------------------------- 7
void kernel_decay(Outcome& o) {
  KernelDecaySetup s;
  s.spec = make_grid(2, 4096, 4096 * std::numbers::pi / 24.0);
  s.rho = euclid();
  s.h = bump_profile(1.0, 0.45);
  const RatioReport r = check_kernel_decay(s);
  o.check(r.metrics.at("max_outer_slope") <= kOuterSlope,
          "outer slope " + num(r.metrics.at("max_outer_slope")));
  const double band = r.max_ratio / r.min_ratio;
  o.check(band <= kInnerFactor, "inner band " + num(band));
}

// ---------------------------------------------------------------- 8
void kappa(Outcome& o) {
  KappaSetup a;
  a.lambda = 0.25;
  a.gamma = 0.0;
  const RatioReport ra = check_kappa_asymptotics(a);
  const double slope = ra.metrics.at("envelope_slope");
  o.check(std::abs(slope - kKappaSlope) <= kKappaSlopeTol, "slope " + num(slope));
  KappaSetup b = a;
  b.gamma = 1.0;
  const RatioReport rb = check_kappa_asymptotics(b);
  o.check(rb.metrics.at("band") <= kKappaBand, "band " + num(rb.metrics.at("band")));
}

// ---------------------------------------------------------------- 9
void convergence(Outcome& o) {
  const GridSpec spec = make_grid(2, 256, 16.0);
  ConvergenceSetup s;
  s.f = sample(spec, [](const std::array<double, 3>& x) {
    return cplx(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])));
  });
  s.rho = euclid();
  for (int k = 2; k <= 7; ++k) s.ts.push_back(std::ldexp(1.0, k));
  const ConvergenceReport r = convergence_experiment(s);
  o.check(r.metrics.at("strictly_decreasing") == 1.0, "strict");
  o.check(r.metrics.at("final_over_initial") < kConvRatio,
          "final/initial " + num(r.metrics.at("final_over_initial")));

  // spectrum bump((rho - 2)/1): radius 3
  const double radius = 3.0;
  const GridFunction fh = sample_spectrum(spec, [](const std::array<double, 3>& xi) {
    return cplx(smooth::bump(std::hypot(xi[0], xi[1]) - 2.0));
  });
  ConvergenceSetup b;
  b.f = dft_inverse(fh);
  b.rho = euclid();
  b.lambda = 0.0;
  b.gamma = 0.0;
  b.ts = {1.5, 2.0, 2.5, 2.9, 3.1, 4.0, 8.0};
  const ConvergenceReport rb = convergence_experiment(b);
  bool exact = true;
  for (std::size_t i = 0; i < rb.t_values.size(); ++i)
    if ((rb.sup_errors[i] < kBandLimited) != (rb.t_values[i] > radius)) exact = false;
  o.check(exact, "band-limited switch at radius");
}

// ---------------------------------------------------------------- 10
std::vector<RatioReport> lemma_reports() {
  std::vector<RatioReport> out;
  const DistanceFunction rho = euclid();
  const GridSpec spec = make_grid(2, 256, 16.0);
  BankOptions bo = localized_bank();
  bo.scale = 1.0;
  const TestBank bank = make_bank(spec, 21, 6, bo);

  out.push_back(check_embedding(bank, 1.0, 2.0, 2.0, covering_annuli(spec)));
  out.push_back(check_trace({rho, bank}));
  {
    BasicMaximalSetup s{rho, bump_profile(1.0, 0.45), bank};
    out.push_back(check_basic_maximal(s));
  }
  out.push_back(check_atau({rho, bank}));
  {
    // DC leak ~ exp(-mod^2): modulation 5..6 sigma^-1 keeps it below 1e-10
    const GridSpec wide = make_grid(2, 512, 32.0);
    BankOptions lo = bo;
    lo.scale = 1.5;
    lo.families = {BankFamily::modulated_gaussian};
    lo.modulation_lo = 5.0;
    lo.modulation_hi = 6.0;
    LpSetup s{rho, make_bank(wide, 22, 6, lo)};
    s.k_min = -4;
    s.k_max = 3;
    s.l_min = -1;
    s.l_max = 3;
    out.push_back(check_littlewood_paley(s));
  }
  out.push_back(check_weight_convolution({}));
  {
    LambdaBesovSetup s;
    s.profiles = single_block_profiles({2, 3, 4, 5});
    out.push_back(check_lambda_besov(s));
  }
  {
    SobembSetup s{rho, bump_profile(1.0, 0.45), bank};
    out.push_back(check_sobolev_embedding(s));
  }
  return out;
}

void lemmas(Outcome& o) {
  const auto first = lemma_reports();
  for (const auto& r : first) {
    o.check(finite_report(r), r.name + " max " + num(r.max_ratio));
    o.check(r.symmetry_drift < kDrift10, "drift " + num(r.symmetry_drift));
  }
  const auto second = lemma_reports();
  bool same = first.size() == second.size();
  for (std::size_t i = 0; same && i < first.size(); ++i) same = to_json(first[i]) == to_json(second[i]);
  o.check(same, "re-run byte-identical");
}

struct Criterion {
  const char* title;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"exactness suite", 30, exactness},
      {"closed-form oracles", 120, oracles},
      {"Herz maximal ratio test", 300, herz_maximal},
      {"square function ratio test", 300, square_function},
      {"Lorentz kernel two-sided test", 300, flu},
      {"multiplier characterization", 0, multiplier},
      {"kernel decay", 0, kernel_decay},
      {"kappa asymptotics", 0, kappa},
      {"Riesz means convergence", 0, convergence},
      {"supporting lemmas", 0, lemmas},
  };
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
  if (pick.empty())
    for (int i = 1; i <= static_cast<int>(all.size()); ++i) pick.push_back(i);

  int failed = 0;
  for (int id : pick) {
    if (id < 1 || id > static_cast<int>(all.size())) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const Criterion& c = all[id - 1];
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0) o.check(secs < c.budget_s, "runtime budget " + num(c.budget_s) + " s");
    std::printf("criterion %2d %-32s %s  %7.1f s  %s\n", id, c.title, o.pass ? "PASS" : "FAIL", secs,
                o.note.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
