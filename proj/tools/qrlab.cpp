// qrlab: config-driven runner for the verify checks.
//
//   qrlab run <config.json> [--threads N]
//   qrlab list
//
// Exit codes: 0 all thresholds pass, 1 threshold failure, 2 schema or
// parameter error, 3 guard error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrlab/bank.hpp"
#include "qrlab/distance.hpp"
#include "qrlab/errors.hpp"
#include "qrlab/grid.hpp"
#include "qrlab/operator.hpp"
#include "qrlab/parallel.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/report.hpp"
#include "qrlab/smooth.hpp"
#include "qrlab/spaces.hpp"
#include "qrlab/verify.hpp"

using json = nlohmann::json;
using namespace qrlab;

namespace {

// Object view that remembers which keys were read; finish() rejects the rest.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const json& raw(const std::string& k) {
    used_.insert(k);
    return j_.at(k);
  }

  template <class T>
  T get(const std::string& k, T fallback) {
    if (!j_.contains(k)) return fallback;
    return typed<T>(k);
  }

  template <class T>
  T need(const std::string& k) {
    if (!j_.contains(k)) throw SchemaError(where_ + ": missing key '" + k + "'");
    return typed<T>(k);
  }

  Section sub(const std::string& k) { return Section(raw(k), where_ + "." + k); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw SchemaError(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  template <class T>
  T typed(const std::string& k) {
    const json& v = raw(k);
    try {
      if constexpr (std::is_same_v<T, double>) {
        // "inf" spells the infinite exponent
        if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
        if (!v.is_number()) throw SchemaError("");
      } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer()) throw SchemaError("");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw SchemaError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw SchemaError("");
      } else if constexpr (std::is_same_v<T, std::vector<double>>) {
        T out;
        if (!v.is_array()) throw SchemaError("");
        for (const auto& e : v) {
          if (e.is_string() && e.get<std::string>() == "inf")
            out.push_back(kInfinity);
          else if (e.is_number())
            out.push_back(e.get<double>());
          else
            throw SchemaError("");
        }
        return out;
      } else if constexpr (std::is_same_v<T, std::vector<int>>) {
        if (!v.is_array()) throw SchemaError("");
        for (const auto& e : v)
          if (!e.is_number_integer()) throw SchemaError("");
      }
      return v.get<T>();
    } catch (const SchemaError&) {
      throw SchemaError(where_ + "." + k + ": wrong type");
    } catch (const json::exception&) {
      throw SchemaError(where_ + "." + k + ": wrong type");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

GridSpec parse_grid(Section s) {
  const int dim = s.need<int>("dim");
  const int n = s.need<int>("n");
  const double L = s.need<double>("half_width");
  s.finish();
  if (n < 8 || (n & (n - 1)) != 0)
    throw SchemaError("grid.n: must be a power of two >= 8, got " + std::to_string(n));
  return make_grid(dim, n, L);
}

DistanceFunction parse_rho(Section s, int dim) {
  const std::string kind = s.need<std::string>("kind");
  DistanceParams p;
  p.dim = dim;
  if (s.has("params")) {
    Section q = s.sub("params");
    p.beta = q.get("beta", p.beta);
    p.c = q.get("c", p.c);
    p.m = q.get("m", p.m);
    p.axes = q.get("axes", p.axes);
    q.finish();
  }
  s.finish();
  if (kind == "ellipse" && p.axes.empty()) p.axes.assign(dim, 1.0);
  try {
    return builtin_distance(kind, p);
  } catch (const ParameterError& e) {
    throw SchemaError(std::string("rho: ") + e.what());
  }
}

// One profile spec may expand to several profiles (families).
std::vector<Profile1D> parse_profile(Section s) {
  const std::string kind = s.need<std::string>("kind");
  static const json kEmpty = json::object();
  Section q = s.has("params") ? s.sub("params") : Section(kEmpty, "profile.params");
  const double res = q.get("resolution", kDefaultProfileResolution);
  std::vector<Profile1D> out;
  if (kind == "bump") {
    out.push_back(bump_profile(q.get("center", 1.0), q.get("width", 0.45), res));
  } else if (kind == "riesz") {
    out.push_back(riesz_profile(q.get("lambda", 0.5), q.get("gamma", 0.0), res,
                                q.get("cutoff", false)));
  } else if (kind == "sequence") {
    out.push_back(sequence_profile(q.need<std::vector<double>>("a"), q.get("lambda", 0.5), res));
  } else if (kind == "flu_family") {
    out = flu_profile_family(q.need<std::vector<double>>("widths"),
                             q.need<std::vector<double>>("modulations"), res);
  } else if (kind == "single_block") {
    out = single_block_profiles(q.need<std::vector<int>>("j0"), res);
  } else {
    throw SchemaError("profile.kind: unknown '" + kind + "'");
  }
  q.finish();
  s.finish();
  return out;
}

std::vector<Profile1D> parse_profiles(Section& top) {
  std::vector<Profile1D> out;
  if (!top.has("profile")) return out;
  const json& p = top.raw("profile");
  if (p.is_array()) {
    for (std::size_t i = 0; i < p.size(); ++i)
      for (auto& h : parse_profile(Section(p[i], "profile[" + std::to_string(i) + "]")))
        out.push_back(std::move(h));
  } else {
    out = parse_profile(Section(p, "profile"));
  }
  return out;
}

TestBank parse_bank(Section s, const GridSpec& spec) {
  const auto seed = s.get<std::uint64_t>("seed", 1);
  const int count = s.get("count", 8);
  BankOptions o;
  if (s.has("families")) {
    o.families.clear();
    const json& fams = s.raw("families");
    if (!fams.is_array()) throw SchemaError("bank.families: expected an array");
    for (const auto& f : fams) {
      if (!f.is_string()) throw SchemaError("bank.families: expected strings");
      try {
        o.families.push_back(bank_family_from_string(f.get<std::string>()));
      } catch (const ParameterError& e) {
        throw SchemaError(std::string("bank.families: ") + e.what());
      }
    }
  }
  o.scale = s.get("scale", o.scale);
  o.shell_lo = s.get("shell_lo", o.shell_lo);
  o.shell_hi = s.get("shell_hi", o.shell_hi);
  o.sigma_spread = s.get("sigma_spread", o.sigma_spread);
  o.offset_max = s.get("offset_max", o.offset_max);
  o.modulation_lo = s.get("modulation_lo", o.modulation_lo);
  o.modulation_hi = s.get("modulation_hi", o.modulation_hi);
  o.annulus_width_lo = s.get("annulus_width_lo", o.annulus_width_lo);
  o.annulus_width_hi = s.get("annulus_width_hi", o.annulus_width_hi);
  s.finish();
  if (count < 1) throw SchemaError("bank.count: must be positive");
  return make_bank(spec, seed, count, o);
}

TGrid parse_tgrid(Section s) {
  const int k_min = s.need<int>("k_min");
  const int k_max = s.need<int>("k_max");
  const int M = s.get("M", 16);
  s.finish();
  return make_tgrid(k_min, k_max, M);
}

NormSpec parse_norm(Section s) {
  NormSpec n;
  const std::string kind = s.need<std::string>("kind");
  if (kind == "lorentz")
    n.kind = NormKind::lorentz;
  else if (kind == "herz")
    n.kind = NormKind::herz;
  else if (kind == "weighted_l2")
    n.kind = NormKind::weighted_l2;
  else
    throw SchemaError("norm.kind: unknown '" + kind + "'");
  if (s.has("params")) {
    Section q = s.sub("params");
    n.p = q.get("p", n.p);
    n.q = q.get("q", n.q);
    n.gamma = q.get("gamma", n.gamma);
    n.r = q.get("r", n.r);
    n.a = q.get("a", n.a);
    n.l_min = q.get("l_min", n.l_min);
    n.l_max = q.get("l_max", n.l_max);
    q.finish();
  }
  s.finish();
  return n;
}

// Everything an experiment may need, parsed up front so schema errors come
// before any computation.
struct Config {
  std::string experiment;
  std::optional<GridSpec> grid;
  std::optional<DistanceFunction> rho;
  std::vector<Profile1D> profiles;
  std::optional<NormSpec> norm;
  std::optional<TestBank> bank;
  std::optional<TGrid> tgrid;
  json params = json::object();
  json thresholds = json::object();
  std::string output;
  std::string echo;
};

Config parse_config(const json& j) {
  Config c;
  Section top(j, "config");
  c.experiment = top.need<std::string>("experiment");
  bool known = c.experiment == "norms" || c.experiment == "kernel" || c.experiment == "profile";
  for (const auto& e : experiment_list()) known = known || e.name == c.experiment;
  if (!known) throw SchemaError("experiment: unknown '" + c.experiment + "'");
  if (top.has("grid")) c.grid = parse_grid(top.sub("grid"));
  const int dim = c.grid ? c.grid->dim : 2;
  if (top.has("rho")) c.rho = parse_rho(top.sub("rho"), dim);
  c.profiles = parse_profiles(top);
  if (top.has("norm")) c.norm = parse_norm(top.sub("norm"));
  if (top.has("bank")) {
    if (!c.grid) throw SchemaError("bank: requires grid");
    c.bank = parse_bank(top.sub("bank"), *c.grid);
  }
  if (top.has("tgrid")) c.tgrid = parse_tgrid(top.sub("tgrid"));
  if (top.has("params")) {
    c.params = top.raw("params");
    if (!c.params.is_object()) throw SchemaError("params: expected an object");
  }
  if (top.has("thresholds")) {
    c.thresholds = top.raw("thresholds");
    if (!c.thresholds.is_object()) throw SchemaError("thresholds: expected an object");
  }
  c.output = top.get<std::string>("output", "qrlab_out/" + c.experiment);
  top.finish();
  c.echo = j.dump();
  return c;
}

template <class T>
const T& require(const std::optional<T>& v, const char* what, const std::string& exp) {
  if (!v) throw SchemaError(exp + ": missing '" + what + "'");
  return *v;
}

const Profile1D& one_profile(const Config& c) {
  if (c.profiles.size() != 1) throw SchemaError(c.experiment + ": expects exactly one profile");
  return c.profiles.front();
}

using Outcome = std::variant<std::vector<RatioReport>, ConvergenceReport>;

// Extra artifacts written by the non-report experiments.
struct Artifacts {
  std::string csv;
};

Outcome run_experiment(const Config& c, Artifacts& art) {
  Section p(c.params, "params");
  const std::string& x = c.experiment;
  std::vector<RatioReport> reps;
  auto grid = [&] { return require(c.grid, "grid", x); };
  auto rho = [&] { return require(c.rho, "rho", x); };
  auto bank = [&] { return require(c.bank, "bank", x); };

  if (x == "check_herz_maximal") {
    HerzMaximalSetup s;
    s.rho = rho();
    s.bank = bank();
    s.profiles = c.profiles;
    if (s.profiles.empty()) throw SchemaError(x + ": missing 'profile'");
    if (c.tgrid) s.tgrid = *c.tgrid;
    s.alpha = p.get("alpha", s.alpha);
    s.qs = p.get("qs", s.qs);
    s.l_min = p.get("l_min", s.l_min);
    s.l_max = p.get("l_max", s.l_max);
    s.dilations = p.get("dilations", s.dilations);
    s.refine = p.get("refine", s.refine);
    s.output_uncovered_tolerance = p.get("output_uncovered_tolerance", s.output_uncovered_tolerance);
    s.enforce_range = p.get("enforce_range", s.enforce_range);
    p.finish();
    reps = check_herz_maximal(s);
  } else if (x == "check_multiplier_equivalence") {
    MultiplierSetup s;
    s.spec = grid();
    s.rho = rho();
    s.bank = bank();
    s.alpha = p.get("alpha", s.alpha);
    s.k_min = p.get("k_min", s.k_min);
    s.k_max = p.get("k_max", s.k_max);
    s.draws = p.get("draws", s.draws);
    s.seed = p.get("seed", s.seed);
    s.taus = p.get("taus", s.taus);
    s.t_steps = p.get("t_steps", s.t_steps);
    s.enforce_range = p.get("enforce_range", s.enforce_range);
    p.finish();
    reps.push_back(check_multiplier_equivalence(s));
  } else if (x == "check_square_function") {
    SquareFunctionSetup s;
    s.rho = rho();
    s.bank = bank();
    s.alpha = p.get("alpha", s.alpha);
    s.dilations = p.get("dilations", s.dilations);
    s.options.period_margin = p.get("period_margin", s.options.period_margin);
    s.options.window_fraction = p.get("window_fraction", s.options.window_fraction);
    s.enforce_range = p.get("enforce_range", s.enforce_range);
    p.finish();
    reps.push_back(check_square_function(s));
  } else if (x == "check_flu_equivalence") {
    FluSetup s;
    s.spec = grid();
    s.rho = rho();
    s.profiles = c.profiles;
    if (s.profiles.empty()) throw SchemaError(x + ": missing 'profile'");
    s.u = p.get("u", s.u);
    s.s = p.get("s", s.s);
    s.kernel_half_width = p.get("kernel_half_width", s.kernel_half_width);
    s.kernel_samples = p.get("kernel_samples", s.kernel_samples);
    p.finish();
    reps.push_back(check_flu_equivalence(s));
  } else if (x == "check_trace") {
    TraceSetup s{rho(), bank()};
    s.b = p.get("b", s.b);
    s.sphere_nodes = p.get("sphere_nodes", s.sphere_nodes);
    s.dilations = p.get("dilations", s.dilations);
    p.finish();
    reps.push_back(check_trace(s));
  } else if (x == "check_basic_maximal") {
    BasicMaximalSetup s{rho(), one_profile(c), bank()};
    s.b = p.get("b", s.b);
    s.t_steps = p.get("t_steps", s.t_steps);
    s.dilations = p.get("dilations", s.dilations);
    s.refine = p.get("refine", s.refine);
    p.finish();
    reps.push_back(check_basic_maximal(s));
  } else if (x == "check_atau") {
    AtauSetup s{rho(), bank()};
    s.b = p.get("b", s.b);
    s.tau_max = p.get("tau_max", s.tau_max);
    s.tau_step = p.get("tau_step", s.tau_step);
    s.dilations = p.get("dilations", s.dilations);
    p.finish();
    reps.push_back(check_atau(s));
  } else if (x == "check_weight_convolution") {
    WeightConvolutionSetup s;
    s.sigma = p.get("sigma", s.sigma);
    s.a = p.get("a", s.a);
    s.u = p.get("u", s.u);
    s.s = p.get("s", s.s);
    s.d = p.get("d", s.d);
    s.half_width = p.get("half_width", s.half_width);
    s.samples = p.get("samples", s.samples);
    s.count = p.get("count", s.count);
    s.seed = p.get("seed", s.seed);
    p.finish();
    reps.push_back(check_weight_convolution(s));
  } else if (x == "check_embedding") {
    const GridSpec g = grid();
    const double a = p.get("a", 1.0), r = p.get("r", 2.0), q = p.get("q", 2.0);
    const auto dil = p.get("dilations", std::vector<int>{-1, 0, 1});
    AnnulusDecomposition dec = covering_annuli(g);
    if (p.has("l_min") || p.has("l_max"))
      dec = annuli(g, p.need<int>("l_min"), p.need<int>("l_max"));
    p.finish();
    reps.push_back(check_embedding(bank(), a, r, q, dec, dil));
  } else if (x == "check_littlewood_paley") {
    LpSetup s{rho(), bank()};
    s.gamma = p.get("gamma", s.gamma);
    s.q = p.get("q", s.q);
    s.k_min = p.get("k_min", s.k_min);
    s.k_max = p.get("k_max", s.k_max);
    s.l_min = p.get("l_min", s.l_min);
    s.l_max = p.get("l_max", s.l_max);
    s.dilations = p.get("dilations", s.dilations);
    p.finish();
    reps.push_back(check_littlewood_paley(s));
  } else if (x == "check_lambda_besov") {
    LambdaBesovSetup s;
    s.profiles = c.profiles;
    if (s.profiles.empty()) throw SchemaError(x + ": missing 'profile'");
    s.alpha = p.get("alpha", s.alpha);
    s.s = p.get("s", s.s);
    s.b = p.get("b", s.b);
    s.j_max = p.get("j_max", s.j_max);
    p.finish();
    reps.push_back(check_lambda_besov(s));
  } else if (x == "check_sobolev_embedding") {
    SobembSetup s{rho(), one_profile(c), bank()};
    s.gamma = p.get("gamma", s.gamma);
    s.js = p.get("js", s.js);
    s.t_steps = p.get("t_steps", s.t_steps);
    s.dilations = p.get("dilations", s.dilations);
    p.finish();
    reps.push_back(check_sobolev_embedding(s));
  } else if (x == "check_kernel_decay") {
    KernelDecaySetup s;
    s.spec = grid();
    s.rho = rho();
    s.h = one_profile(c);
    s.js = p.get("js", s.js);
    s.s = p.get("s", s.s);
    s.c0 = p.get("c0", s.c0);
    p.finish();
    reps.push_back(check_kernel_decay(s));
  } else if (x == "check_kappa_asymptotics") {
    KappaSetup s;
    s.lambda = p.get("lambda", s.lambda);
    s.gamma = p.get("gamma", s.gamma);
    s.r_lo = p.get("r_lo", s.r_lo);
    s.r_hi = p.get("r_hi", s.r_hi);
    s.resolution = p.get("resolution", s.resolution);
    p.finish();
    reps.push_back(check_kappa_asymptotics(s));
  } else if (x == "convergence_experiment") {
    const GridSpec g = grid();
    ConvergenceSetup s;
    s.rho = rho();
    s.lambda = p.get("lambda", s.lambda);
    s.gamma = p.get("gamma", s.gamma);
    s.ts = p.need<std::vector<double>>("ts");
    s.probe_r = p.get("probe_r", s.probe_r);
    const std::string mode = p.get<std::string>("mode", "full");
    if (mode == "full")
      s.mode = RieszMode::full;
    else if (mode == "cutoff")
      s.mode = RieszMode::cutoff;
    else
      throw SchemaError("params.mode: expected 'full' or 'cutoff'");
    // input f: gaussian of width sigma, or the band-limited shell bump
    const std::string input = p.get<std::string>("input", "gaussian");
    const double width = p.get("input_width", 1.0);
    const double radius = p.get("input_radius", 2.0);
    p.finish();
    if (input == "gaussian") {
      s.f = sample(g, [&](const std::array<double, 3>& y) {
        return cplx(std::exp(-(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / (2.0 * width * width)));
      });
    } else if (input == "shell") {
      const GridFunction hat = sample_spectrum(g, [&](const std::array<double, 3>& xi) {
        return cplx(smooth::bump((s.rho(xi) - radius) / width));
      });
      s.f = dft_inverse(hat);
    } else {
      throw SchemaError("params.input: expected 'gaussian' or 'shell'");
    }
    return convergence_experiment(s);
  } else if (x == "norms") {
    const NormSpec n = require(c.norm, "norm", x);
    p.finish();
    const TestBank& b = bank();
    validate(n, b.spec.dim);
    RatioReport r;
    r.name = "norms";
    for (std::size_t i = 0; i < b.entries.size(); ++i)
      r.add(b.entries[i].label + "#" + std::to_string(i), evaluate(n, b.entries[i].values),
            b.entries[i].values.l2_norm());
    r.finalize();
    reps.push_back(r);
  } else if (x == "kernel") {
    const Profile1D& h = one_profile(c);
    const double beta = c.rho ? c.rho->beta() : 1.0;
    const double R = p.get("R", 256.0);
    const int n_r = p.get("n_r", 1 << 14);
    const double u = p.get("u", 1.5), s = p.get("s", 1.5);
    KernelOptions ko;
    ko.weight_dim = p.get("weight_dim", ko.weight_dim);
    p.finish();
    const Kernel1D K = kernel_1d(h, beta, R, n_r, ko);
    std::ostringstream os;
    os << "r,re,im\n" << std::setprecision(17);
    for (std::size_t i = 0; i < K.r.size(); ++i)
      os << K.r[i] << "," << K.values[i].real() << "," << K.values[i].imag() << "\n";
    art.csv = os.str();
    RatioReport r;
    r.name = "kernel";
    double l2 = 0.0;
    for (const auto& v : K.values) l2 += std::norm(v) * K.spacing();
    r.add("mu_lorentz", mu_lorentz_norm(K, u, s), std::sqrt(l2));
    r.finalize();
    r.params = {{"u", std::to_string(u)}, {"s", std::to_string(s)}};
    reps.push_back(r);
  } else if (x == "profile") {
    const Profile1D& h = one_profile(c);
    const double alpha = p.get("alpha", 0.75), s = p.get("s", 2.0);
    p.finish();
    std::ostringstream os;
    write_csv(os, h);
    art.csv = os.str();
    RatioReport r;
    r.name = "profile";
    r.add("besov", besov_norm(h, alpha, s), h.l2_norm());
    r.finalize();
    reps.push_back(r);
  }
  return reps;
}

double lookup(const RatioReport& r, const std::string& key) {
  if (key == "max_ratio") return r.max_ratio;
  if (key == "min_ratio") return r.min_ratio;
  if (key == "symmetry_drift") return r.symmetry_drift;
  auto it = r.metrics.find(key);
  if (it == r.metrics.end()) throw SchemaError("thresholds: report has no quantity '" + key + "'");
  return it->second;
}

double lookup(const ConvergenceReport& r, const std::string& key) {
  if (key == "final_error") return r.sup_errors.back();
  if (key == "monotone_tail") return r.monotone_tail ? 1.0 : 0.0;
  auto it = r.metrics.find(key);
  if (it == r.metrics.end()) throw SchemaError("thresholds: report has no quantity '" + key + "'");
  return it->second;
}

// thresholds: {"quantity": {"min": a, "max": b}}; failures are listed.
template <class R>
std::vector<std::string> check_thresholds(const json& th, const R& r) {
  std::vector<std::string> bad;
  for (auto it = th.begin(); it != th.end(); ++it) {
    Section b(it.value(), "thresholds." + it.key());
    const double lo = b.get("min", -kInfinity), hi = b.get("max", kInfinity);
    b.finish();
    const double v = lookup(r, it.key());
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << it.key() << "=" << std::setprecision(6) << v;
      bad.push_back(os.str());
    }
  }
  return bad;
}

std::string csv_header(const std::string& echo) { return "# " + echo + "\n"; }

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run(const std::string& path) {
  json j;
  {
    std::ifstream in(path);
    if (!in) {
      std::fprintf(stderr, "qrlab: cannot read %s\n", path.c_str());
      return 2;
    }
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      std::fprintf(stderr, "qrlab: schema error: %s\n", e.what());
      return 2;
    }
  }
  Config c;
  Outcome out;
  Artifacts art;
  try {
    c = parse_config(j);
    out = run_experiment(c, art);
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "qrlab: schema error: %s\n", e.what());
    return 2;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "qrlab: schema error: %s\n", e.what());
    return 2;
  } catch (const GuardError& e) {
    std::fprintf(stderr, "qrlab: guard error: %s\n", e.what());
    return 3;
  }

  const char* env = std::getenv("QRLAB_OUT");
  const std::string prefix = env && *env ? env : c.output;
  std::vector<std::string> bad;
  std::string json_text, csv_text = csv_header(c.echo), summary;
  try {
    if (auto* conv = std::get_if<ConvergenceReport>(&out)) {
      bad = check_thresholds(c.thresholds, *conv);
      json_text = to_json(*conv, c.echo);
      std::ostringstream os;
      write_csv(os, *conv);
      csv_text += os.str();
      std::ostringstream s;
      s << conv->name << " final_error " << std::setprecision(6) << conv->sup_errors.back();
      summary = s.str();
    } else {
      const auto& reps = std::get<std::vector<RatioReport>>(out);
      for (const auto& r : reps)
        for (auto& b : check_thresholds(c.thresholds, r)) bad.push_back(b);
      if (reps.size() == 1) {
        json_text = to_json(reps.front(), c.echo);
      } else {
        json_text = "[\n";
        for (std::size_t i = 0; i < reps.size(); ++i)
          json_text += to_json(reps[i], c.echo) + (i + 1 < reps.size() ? ",\n" : "\n");
        json_text += "]";
      }
      if (!art.csv.empty()) {
        csv_text += art.csv;
      } else {
        // several reports share one table: the q label prefixes entry ids
        for (std::size_t i = 0; i < reps.size(); ++i) {
          RatioReport r = reps[i];
          if (reps.size() > 1) {
            auto q = r.params.find("q");
            const std::string tag = q != r.params.end() ? "q=" + q->second : std::to_string(i);
            for (auto& e : r.per_entry) e.id = tag + "/" + e.id;
          }
          std::ostringstream os;
          write_csv(os, r);
          csv_text += i == 0 ? os.str() : os.str().substr(os.str().find('\n') + 1);
        }
      }
      std::ostringstream s;
      s << reps.front().name << " max_ratio";
      for (const auto& r : reps) s << " " << std::setprecision(6) << r.max_ratio;
      summary = s.str();
    }
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "qrlab: schema error: %s\n", e.what());
    return 2;
  }
  write_file(prefix + ".json", json_text + "\n");
  write_file(prefix + ".csv", csv_text);

  std::string line = summary + (bad.empty() ? " PASS" : " FAIL");
  for (const auto& b : bad) line += " " + b;
  std::printf("%s\n", line.c_str());
  return bad.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrlab: quasiradial multiplier experiments"};
  app.require_subcommand(1);
  std::string config;
  unsigned threads = 0;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a JSON config");
  run_cmd->add_option("config", config, "experiment config")->required();
  run_cmd->add_option("--threads", threads, "worker threads (default: all cores)");
  auto* list_cmd = app.add_subcommand("list", "list the available experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (list_cmd->parsed()) {
    for (const auto& e : experiment_list()) std::printf("%-30s %s\n", e.name.c_str(), e.description.c_str());
    return 0;
  }
  if (threads > 0) set_thread_count(threads);
  try {
    return run(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qrlab: error: %s\n", e.what());
    return 3;
  }
}
