#include "qrlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrlab/errors.hpp"
#include "qrlab/parallel.hpp"

namespace qrlab {

double step_lorentz_norm(std::span<const double> values, std::span<const double> masses,
                         double p, double q) {
  if (values.size() != masses.size()) throw ParameterError("lorentz: values/masses size mismatch");
  if (!(p > 0.0)) throw ParameterError("lorentz: p must be positive");
  if (!(q >= 1.0)) throw ParameterError("lorentz: q must be >= 1");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  double t = 0.0;
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t i : order) {
      if (values[i] <= 0.0) break;
      t += masses[i];
      best = std::max(best, std::pow(t, 1.0 / p) * values[i]);
    }
    return best;
  }
  const double e = q / p;
  double sum = 0.0, prev = 0.0;
  for (std::size_t i : order) {
    if (values[i] <= 0.0) break;
    t += masses[i];
    const double cur = std::pow(t, e);
    sum += std::pow(values[i], q) * (cur - prev);
    prev = cur;
  }
  return std::pow(sum / e, 1.0 / q);
}

double lorentz_norm(const GridFunction& f, double p, double q) {
  if (f.domain() != Domain::space) throw ParameterError("lorentz_norm: expects a space field");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::abs(f[i]);
  const std::vector<double> m(f.size(), f.spec().cell_volume());
  return step_lorentz_norm(v, m, p, q);
}

double weak_lorentz_quasinorm(const GridFunction& f, double p) {
  return lorentz_norm(f, p, kInfinity);
}

double uncovered_fraction(const GridFunction& f, const AnnulusDecomposition& decomp, double r) {
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::pow(std::abs(f[i]), r);
    total += v;
    if (decomp.label[i] == AnnulusDecomposition::kUncovered) outside += v;
  }
  return total > 0.0 ? outside / total : 0.0;
}

std::vector<double> annulus_norms(const GridFunction& f, const AnnulusDecomposition& decomp,
                                  double r, double weight_power) {
  if (f.domain() != Domain::space) throw ParameterError("annulus_norms: expects a space field");
  if (decomp.label.size() != f.size()) throw ParameterError("annulus_norms: decomposition mismatch");
  const auto& radii = regularized_radii(f.spec());
  const std::size_t origin = origin_index(f.spec());
  const double w0 = weight_power != 0.0 ? origin_cell_power(f.spec(), weight_power) : 1.0;
  std::vector<double> acc(decomp.count(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int l = decomp.label[i];
    if (l == AnnulusDecomposition::kUncovered) continue;
    double v = std::pow(std::abs(f[i]), r);
    if (weight_power != 0.0) v *= power_weight(radii, i, origin, w0, weight_power);
    acc[l - decomp.l_min] += v;
  }
  const double cell = f.spec().cell_volume();
  for (auto& v : acc) v = std::pow(v * cell, 1.0 / r);
  return acc;
}

double herz_norm(const GridFunction& f, double gamma, double q, const AnnulusDecomposition& decomp,
                 const HerzOptions& options) {
  if (!(q >= 1.0)) throw ParameterError("herz_norm: q must be >= 1");
  const double miss = uncovered_fraction(f, decomp, options.r);
  if (miss > options.uncovered_tolerance)
    throw GuardError("herz_norm: mass outside annuli " + std::to_string(miss) +
                     " exceeds tolerance");
  const auto norms = annulus_norms(f, decomp, options.r);
  double acc = 0.0;
  for (int l = decomp.l_min; l <= decomp.l_max; ++l) {
    const double term = std::exp2(l * gamma) * norms[l - decomp.l_min];
    if (std::isinf(q))
      acc = std::max(acc, term);
    else
      acc += std::pow(term, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double weighted_l2_norm(const GridFunction& f, double a) {
  if (f.domain() != Domain::space) throw ParameterError("weighted_l2_norm: expects a space field");
  if (!(std::abs(a) < f.spec().dim)) throw ParameterError("weighted_l2_norm: need |a| < d");
  const auto& radii = regularized_radii(f.spec());
  const std::size_t origin = origin_index(f.spec());
  const double w0 = a != 0.0 ? origin_cell_power(f.spec(), a) : 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::norm(f[i]);
    if (v != 0.0) s += v * (a == 0.0 ? 1.0 : power_weight(radii, i, origin, w0, a));
  }
  return std::sqrt(s * f.spec().cell_volume());
}

void validate(const NormSpec& spec, int dim) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ParameterError(msg);
  };
  switch (spec.kind) {
    case NormKind::lorentz:
      require(spec.p > 1.0 && std::isfinite(spec.p), "lorentz: p must lie in (1, inf)");
      require(spec.q >= 1.0, "lorentz: q must lie in [1, inf]");
      break;
    case NormKind::herz:
      require(std::abs(spec.gamma) < 0.5 * dim, "herz: gamma must lie in (-d/2, d/2)");
      require(spec.q >= 1.0, "herz: q must lie in [1, inf]");
      require(spec.r >= 1.0 && std::isfinite(spec.r), "herz: r must lie in [1, inf)");
      require(spec.l_min <= spec.l_max, "herz: l_min > l_max");
      break;
    case NormKind::weighted_l2:
      require(std::abs(spec.a) < dim, "weighted_l2: need |a| < d");
      break;
  }
}

double evaluate(const NormSpec& spec, const GridFunction& f) {
  validate(spec, f.spec().dim);
  switch (spec.kind) {
    case NormKind::lorentz: return lorentz_norm(f, spec.p, spec.q);
    case NormKind::herz:
      return herz_norm(f, spec.gamma, spec.q, annuli(f.spec(), spec.l_min, spec.l_max),
                       HerzOptions{spec.r, 1e-8});
    case NormKind::weighted_l2: return weighted_l2_norm(f, spec.a);
  }
  return 0.0;
}

double embedding_lhs(const GridFunction& f, double a, double r, double q,
                     const AnnulusDecomposition& decomp) {
  const auto norms = annulus_norms(f, decomp, r, -a);
  double acc = 0.0;
  for (double v : norms) acc = std::isinf(q) ? std::max(acc, v) : acc + std::pow(v, q);
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

RatioReport check_embedding(const TestBank& bank, double a, double r, double q,
                            const AnnulusDecomposition& decomp, const std::vector<int>& dilations) {
  const int d = bank.spec.dim;
  if (!(a > 0.0 && a < d)) throw ParameterError("check_embedding: need 0 < a < d");
  if (!(q > 1.0)) throw ParameterError("check_embedding: need q > 1");
  const double p = r * d / (d - a);
  RatioReport rep;
  rep.name = "check_embedding";
  rep.params = {{"a", std::to_string(a)}, {"r", std::to_string(r)}, {"q", std::to_string(q)},
                {"p", std::to_string(p)}};
  const std::size_t n = bank.entries.size();
  std::vector<double> lhs(n), rhs(n), drift(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const auto& e = bank.entries[i];
    lhs[i] = embedding_lhs(e.values, a, r, q, decomp);
    rhs[i] = lorentz_norm(e.values, p, q);
    const double base = lhs[i] / rhs[i];
    for (int m : dilations) {
      if (m == 0) continue;
      const GridFunction g = e.sample(bank.spec, m);
      const double ratio = embedding_lhs(g, a, r, q, decomp) / lorentz_norm(g, p, q);
      drift[i] = std::max(drift[i], std::abs(ratio / base - 1.0));
    }
  });
  for (std::size_t i = 0; i < n; ++i) rep.add(bank.entries[i].label, lhs[i], rhs[i]);
  rep.finalize();
  rep.symmetry_drift = *std::max_element(drift.begin(), drift.end());
  return rep;
}

}  // namespace qrlab
