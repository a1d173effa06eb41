#include <algorithm>
#include <cmath>

#include "check_util.hpp"
#include "qrlab/errors.hpp"
#include "qrlab/verify.hpp"

namespace qrlab {

ConvergenceReport convergence_experiment(const ConvergenceSetup& setup) {
  if (setup.ts.empty()) throw ParameterError("convergence: empty t sequence");
  for (std::size_t i = 1; i < setup.ts.size(); ++i)
    if (!(setup.ts[i] > setup.ts[i - 1]))
      throw ParameterError("convergence: t values must increase strictly");
  if (!(setup.probe_r > 1.0)) throw ParameterError("convergence: probe radius must exceed 1");
  const GridFunction& f = setup.f;
  const auto& radii = regularized_radii(f.spec());
  const double lo = 1.0 / setup.probe_r;
  ConvergenceReport rep;
  rep.name = setup.mode == RieszMode::full ? "convergence_experiment"
                                           : "convergence_experiment_cutoff";
  rep.probe_r_min = lo;
  rep.probe_r_max = setup.probe_r;
  for (double t : setup.ts) {
    const GridFunction s = riesz_mean(f, setup.rho, setup.lambda, setup.gamma, t, setup.mode);
    double err = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) {
      if (radii[p] < lo || radii[p] > setup.probe_r) continue;
      const cplx v = setup.mode == RieszMode::full ? s[p] - f[p] : s[p];
      err = std::max(err, std::abs(v));
    }
    rep.t_values.push_back(t);
    rep.sup_errors.push_back(err);
  }
  const std::size_t n = rep.sup_errors.size();
  bool tail = n >= 2;
  for (std::size_t i = n / 2; i + 1 < n; ++i)
    if (!(rep.sup_errors[i + 1] < rep.sup_errors[i])) tail = false;
  rep.monotone_tail = tail;
  bool strict = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(rep.sup_errors[i + 1] < rep.sup_errors[i])) strict = false;
  rep.metrics["strictly_decreasing"] = strict ? 1.0 : 0.0;
  rep.metrics["final_over_initial"] =
      rep.sup_errors.front() > 0.0 ? rep.sup_errors.back() / rep.sup_errors.front() : 0.0;
  rep.params = {{"lambda", detail::fmt(setup.lambda)},
                {"gamma", detail::fmt(setup.gamma)},
                {"mode", setup.mode == RieszMode::full        ? "full"
                         : setup.mode == RieszMode::cutoff    ? "cutoff"
                                                              : "remainder"},
                {"probe_r", detail::fmt(setup.probe_r)},
                {"rho", setup.rho.label()}};
  return rep;
}

}  // namespace qrlab
