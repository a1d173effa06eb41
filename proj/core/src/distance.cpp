#include "qrlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrlab/errors.hpp"

namespace qrlab {

std::string to_string(DistanceKind k) {
  switch (k) {
    case DistanceKind::euclidean: return "euclidean";
    case DistanceKind::scaled_euclidean: return "scaled_euclidean";
    case DistanceKind::lp_smooth: return "lp_smooth";
    case DistanceKind::ellipse: return "ellipse";
  }
  return "?";
}

DistanceKind distance_kind_from_string(const std::string& s) {
  for (auto k : {DistanceKind::euclidean, DistanceKind::scaled_euclidean, DistanceKind::lp_smooth,
                 DistanceKind::ellipse})
    if (to_string(k) == s) return k;
  throw ParameterError("unknown distance kind: " + s);
}

DistanceFunction::DistanceFunction(DistanceKind kind, const DistanceParams& params)
    : kind_(kind), params_(params) {}

double DistanceFunction::base(const std::array<double, 3>& xi) const {
  const int d = params_.dim;
  switch (kind_) {
    case DistanceKind::euclidean:
    case DistanceKind::scaled_euclidean: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += xi[i] * xi[i];
      return (kind_ == DistanceKind::scaled_euclidean ? params_.c : 1.0) * std::sqrt(s);
    }
    case DistanceKind::lp_smooth: {
      double mx = 0.0;
      for (int i = 0; i < d; ++i) mx = std::max(mx, std::abs(xi[i]));
      if (mx == 0.0) return 0.0;
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += std::pow(xi[i] / mx, 2 * params_.m);
      return mx * std::pow(s, 1.0 / (2 * params_.m));
    }
    case DistanceKind::ellipse: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += (xi[i] / params_.axes[i]) * (xi[i] / params_.axes[i]);
      return std::sqrt(s);
    }
  }
  return 0.0;
}

std::array<double, 3> DistanceFunction::base_gradient(const std::array<double, 3>& xi,
                                                      double b) const {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  const int d = params_.dim;
  switch (kind_) {
    case DistanceKind::euclidean:
    case DistanceKind::scaled_euclidean: {
      const double c = kind_ == DistanceKind::scaled_euclidean ? params_.c : 1.0;
      for (int i = 0; i < d; ++i) g[i] = c * c * xi[i] / b;
      break;
    }
    case DistanceKind::lp_smooth:
      for (int i = 0; i < d; ++i) g[i] = std::pow(xi[i] / b, 2 * params_.m - 1);
      break;
    case DistanceKind::ellipse:
      for (int i = 0; i < d; ++i) g[i] = xi[i] / (params_.axes[i] * params_.axes[i] * b);
      break;
  }
  return g;
}

double DistanceFunction::operator()(const std::array<double, 3>& xi) const {
  const double b = base(xi);
  return params_.beta == 1.0 ? b : std::pow(b, params_.beta);
}

std::array<double, 3> DistanceFunction::gradient(const std::array<double, 3>& xi) const {
  const double b = base(xi);
  if (b == 0.0) throw ParameterError("distance gradient requested at the origin");
  auto g = base_gradient(xi, b);
  if (params_.beta != 1.0) {
    const double f = params_.beta * std::pow(b, params_.beta - 1.0);
    for (auto& v : g) v *= f;
  }
  return g;
}

double DistanceFunction::gradient_norm(const std::array<double, 3>& xi) const {
  const auto g = gradient(xi);
  return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
}

std::string DistanceFunction::label() const {
  std::string s = to_string(kind_);
  if (kind_ == DistanceKind::scaled_euclidean) s += "(c=" + std::to_string(params_.c) + ")";
  if (kind_ == DistanceKind::lp_smooth) s += "(m=" + std::to_string(params_.m) + ")";
  if (kind_ == DistanceKind::ellipse) {
    s += "(";
    for (std::size_t i = 0; i < params_.axes.size(); ++i)
      s += (i ? "," : "") + std::to_string(params_.axes[i]);
    s += ")";
  }
  return s;
}

DistanceFunction DistanceFunction::with_beta(double beta) const {
  DistanceParams p = params_;
  p.beta = beta;
  return builtin_distance(kind_, p);
}

DistanceFunction builtin_distance(DistanceKind kind, const DistanceParams& params) {
  if (params.dim < 1 || params.dim > 3) throw ParameterError("distance: dim must be 1..3");
  if (!(params.beta > 0.0)) throw ParameterError("distance: beta must be positive");
  if (kind == DistanceKind::scaled_euclidean && !(params.c > 0.0))
    throw ParameterError("scaled_euclidean: c must be positive");
  if (kind == DistanceKind::lp_smooth && params.m < 1)
    throw ParameterError("lp_smooth: m must be >= 1");
  if (kind == DistanceKind::ellipse) {
    if (static_cast<int>(params.axes.size()) != params.dim)
      throw ParameterError("ellipse: need one axis per dimension");
    for (double a : params.axes)
      if (!(a > 0.0)) throw ParameterError("ellipse: axes must be positive");
  }
  return DistanceFunction(kind, params);
}

DistanceFunction builtin_distance(const std::string& kind, const DistanceParams& params) {
  return builtin_distance(distance_kind_from_string(kind), params);
}

std::vector<double> rho_on_frequencies(const DistanceFunction& rho, const GridSpec& spec) {
  if (rho.dim() != spec.dim) throw ParameterError("distance dimension does not match grid");
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rho(spec.frequency_point(i));
  return out;
}

int compute_c0(const DistanceFunction& rho) {
  if (rho.beta() != 1.0) throw ParameterError("compute_c0: requires beta = 1");
  const int d = rho.dim();
  // box that contains {rho <= 8}
  double rho_min = 1e300;
  for (int k = 0; k < 4096; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 4096;
    std::array<double, 3> u{std::cos(th), std::sin(th), 0.0};
    if (d == 1) u = {1.0, 0.0, 0.0};
    if (d == 3) u = {std::cos(th), 0.6 * std::sin(th), 0.8 * std::sin(th)};
    rho_min = std::min(rho_min, rho(u));
    for (int i = 0; i < d; ++i) {
      std::array<double, 3> e{0.0, 0.0, 0.0};
      e[i] = 1.0;
      rho_min = std::min(rho_min, rho(e));
    }
  }
  const double box = 8.0 / (0.99 * rho_min);
  constexpr int kPerAxis = 64;
  double g_lo = 1e300, g_hi = 0.0;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= kPerAxis;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    std::size_t rest = flat;
    for (int i = 0; i < d; ++i) {
      xi[i] = -box + (2.0 * box) * (static_cast<double>(rest % kPerAxis) + 0.5) / kPerAxis;
      rest /= kPerAxis;
    }
    const double r = rho(xi);
    if (r < 0.125 || r > 8.0) continue;
    const double g = rho.gradient_norm(xi);
    g_lo = std::min(g_lo, g);
    g_hi = std::max(g_hi, g);
  }
  if (g_hi == 0.0) throw ParameterError("compute_c0: sampled annulus is empty");
  if (!(g_lo > 0.0)) throw ParameterError("compute_c0: gradient vanishes on the annulus");
  const double lo = std::log2(g_lo), hi = std::log2(g_hi);
  const double margin = 0.1 * (hi - lo);
  const double need = std::max(-(lo - margin), hi + margin);
  int c0 = 2;
  while (c0 - 2 < need - 1e-12) ++c0;
  return c0;
}

double SphereQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double ray_root(const DistanceFunction& rho, const std::array<double, 3>& u) {
  auto f = [&](double r) { return rho({r * u[0], r * u[1], r * u[2]}) - 1.0; };
  double a = 0.125, b = 8.0;
  double fa = f(a), fb = f(b);
  if (!(fa < 0.0 && fb > 0.0)) throw ParameterError("ray_root: no sign change on [1/8, 8]");
  for (int it = 0; it < 30; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm < 0.0) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double x0 = a, x1 = b, f0 = fa, f1 = fb;
  for (int it = 0; it < 20 && std::abs(f1) > 1e-12; ++it) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
  }
  if (!(std::abs(f1) <= 1e-12)) throw ParameterError("ray_root: secant refinement failed");
  return x1;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

SphereQuadrature sphere_quadrature(const DistanceFunction& rho, int n_nodes) {
  const int d = rho.dim();
  if (d != 2 && d != 3) throw ParameterError("sphere_quadrature: d must be 2 or 3");
  if (n_nodes < 8) throw ParameterError("sphere_quadrature: need at least 8 nodes");
  if (d == 3 && n_nodes > (1 << 17)) throw ParameterError("sphere_quadrature: d = 3 node budget exceeded");
  SphereQuadrature q;
  auto add = [&](const std::array<double, 3>& u, double d_omega) {
    const double r = ray_root(rho, u);
    const std::array<double, 3> xi{r * u[0], r * u[1], r * u[2]};
    const double g = rho.gradient_norm(xi);
    q.nodes.push_back(xi);
    q.grad_norm.push_back(g);
    q.weights.push_back(std::pow(r, d) * g / rho.beta() * d_omega);
  };
  if (d == 2) {
    for (int k = 0; k < n_nodes; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_nodes;
      add({std::cos(th), std::sin(th), 0.0}, 2.0 * std::numbers::pi / n_nodes);
    }
  } else {
    const int n_theta = std::max(4, static_cast<int>(std::lround(std::sqrt(n_nodes / 2.0))));
    const int n_phi = 2 * n_theta;
    std::vector<double> z, wz;
    gauss_legendre(n_theta, z, wz);
    for (int i = 0; i < n_theta; ++i) {
      const double s = std::sqrt(1.0 - z[i] * z[i]);
      for (int k = 0; k < n_phi; ++k) {
        const double ph = 2.0 * std::numbers::pi * k / n_phi;
        add({s * std::cos(ph), s * std::sin(ph), z[i]}, wz[i] * 2.0 * std::numbers::pi / n_phi);
      }
    }
  }
  return q;
}

}  // namespace qrlab
