#pragma once

#include <array>
#include <string>
#include <vector>

#include "qrlab/grid.hpp"

namespace qrlab {

enum class DistanceKind { euclidean, scaled_euclidean, lp_smooth, ellipse };

std::string to_string(DistanceKind k);
DistanceKind distance_kind_from_string(const std::string& s);

struct DistanceParams {
  int dim = 2;
  double beta = 1.0;
  /// scaled_euclidean factor
  double c = 1.0;
  /// lp_smooth exponent, (sum xi_i^{2m})^{1/(2m)}
  int m = 2;
  /// ellipse semi-axes a_1..a_d
  std::vector<double> axes;
};

/// rho(xi) = base(xi)^beta with base one of the 1-homogeneous gauges
/// |xi|, c|xi|, (sum xi_i^{2m})^{1/2m}, (sum (xi_i/a_i)^2)^{1/2}.
class DistanceFunction {
 public:
  DistanceFunction() = default;
  DistanceFunction(DistanceKind kind, const DistanceParams& params);

  double operator()(const std::array<double, 3>& xi) const;
  std::array<double, 3> gradient(const std::array<double, 3>& xi) const;
  double gradient_norm(const std::array<double, 3>& xi) const;

  double beta() const { return params_.beta; }
  int dim() const { return params_.dim; }
  DistanceKind kind() const { return kind_; }
  const DistanceParams& params() const { return params_; }
  std::string label() const;

  /// Same gauge with homogeneity degree 1.
  DistanceFunction with_beta(double beta) const;

 private:
  double base(const std::array<double, 3>& xi) const;
  std::array<double, 3> base_gradient(const std::array<double, 3>& xi, double b) const;

  DistanceKind kind_ = DistanceKind::euclidean;
  DistanceParams params_{};
};

/// Throws ParameterError for c <= 0, m < 1, beta <= 0, wrong axis count or
/// non-positive axes.
DistanceFunction builtin_distance(DistanceKind kind, const DistanceParams& params);
DistanceFunction builtin_distance(const std::string& kind, const DistanceParams& params);

/// rho at every frequency lattice point of `spec`.
std::vector<double> rho_on_frequencies(const DistanceFunction& rho, const GridSpec& spec);

/// Smallest c0 >= 2 with 2^{-c0+2} <= |grad rho| <= 2^{c0-2} on
/// 1/8 <= rho <= 8, after widening the sampled range of log2|grad rho| by 10%
/// of its length on each side. Requires beta = 1.
int compute_c0(const DistanceFunction& rho);

struct SphereQuadrature {
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
  std::vector<double> grad_norm;
  double total_weight() const;
};

/// Nodes on {rho = 1} found along rays; weights approximate surface measure.
/// d = 2 uses n_nodes equispaced angles; d = 3 uses a Gauss-Legendre (cos
/// theta) by uniform phi product with about n_nodes points.
SphereQuadrature sphere_quadrature(const DistanceFunction& rho, int n_nodes);

/// Root r of rho(r u) = 1 along the unit direction u: bisection on [1/8, 8]
/// then secant refinement to 1e-12 in rho.
double ray_root(const DistanceFunction& rho, const std::array<double, 3>& u);

}  // namespace qrlab
