#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qrlab/distance.hpp"
#include "qrlab/errors.hpp"

using namespace qrlab;

namespace {

DistanceFunction make(DistanceKind k, double beta = 1.0, int dim = 2) {
  DistanceParams p;
  p.dim = dim;
  p.beta = beta;
  p.c = 1.7;
  p.m = 2;
  if (k == DistanceKind::ellipse) p.axes = dim == 2 ? std::vector<double>{1.0, 1.5} : std::vector<double>{1.0, 1.5, 0.8};
  return builtin_distance(k, p);
}

const DistanceKind kAll[] = {DistanceKind::euclidean, DistanceKind::scaled_euclidean,
                             DistanceKind::lp_smooth, DistanceKind::ellipse};

}  // namespace

TEST(Distance, ClosedFormValues) {
  const std::array<double, 3> xi{3.0, -4.0, 0.0};
  EXPECT_DOUBLE_EQ(make(DistanceKind::euclidean)(xi), 5.0);
  EXPECT_DOUBLE_EQ(make(DistanceKind::scaled_euclidean)(xi), 1.7 * 5.0);
  EXPECT_NEAR(make(DistanceKind::lp_smooth)(xi), std::pow(81.0 + 256.0, 0.25), 1e-14);
  EXPECT_NEAR(make(DistanceKind::ellipse)(xi), std::sqrt(9.0 + 16.0 / 2.25), 1e-14);
  EXPECT_NEAR(make(DistanceKind::euclidean, 2.0)(xi), 25.0, 1e-13);
}

TEST(Distance, Homogeneity) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> U(-3.0, 3.0), T(0.1, 10.0);
  for (auto k : kAll)
    for (double beta : {0.5, 1.0, 2.0}) {
      const auto rho = make(k, beta, 3);
      for (int i = 0; i < 50; ++i) {
        const std::array<double, 3> xi{U(gen), U(gen), U(gen)};
        const double t = T(gen);
        EXPECT_NEAR(rho({t * xi[0], t * xi[1], t * xi[2]}), std::pow(t, beta) * rho(xi),
                    1e-12 * std::pow(t, beta) * rho(xi));
      }
    }
}

TEST(Distance, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (auto k : kAll) {
    const auto rho = make(k, 1.3, 3);
    for (int i = 0; i < 30; ++i) {
      const std::array<double, 3> xi{U(gen), U(gen), U(gen)};
      const auto g = rho.gradient(xi);
      const double h = 1e-6;
      double n2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        auto a = xi, b = xi;
        a[d] += h;
        b[d] -= h;
        const double fd = (rho(a) - rho(b)) / (2 * h);
        EXPECT_NEAR(g[d], fd, 1e-6 * (1.0 + std::abs(fd)));
        n2 += g[d] * g[d];
      }
      EXPECT_NEAR(rho.gradient_norm(xi), std::sqrt(n2), 1e-12 * (1 + std::sqrt(n2)));
    }
  }
}

// Euler: xi . grad rho = beta rho
TEST(Distance, EulerIdentity) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (auto k : kAll) {
    const auto rho = make(k, 1.5, 2);
    for (int i = 0; i < 30; ++i) {
      const std::array<double, 3> xi{U(gen), U(gen), 0.0};
      const auto g = rho.gradient(xi);
      EXPECT_NEAR(xi[0] * g[0] + xi[1] * g[1], 1.5 * rho(xi), 1e-12 * (1 + rho(xi)));
    }
  }
}

TEST(Distance, C0) {
  EXPECT_EQ(compute_c0(make(DistanceKind::euclidean)), 2);
  EXPECT_GE(compute_c0(make(DistanceKind::ellipse)), 2);
  EXPECT_THROW(compute_c0(make(DistanceKind::euclidean, 2.0)), ParameterError);
}

TEST(Distance, RayRoot) {
  EXPECT_NEAR(ray_root(make(DistanceKind::euclidean), {1.0, 0.0, 0.0}), 1.0, 1e-12);
  EXPECT_NEAR(ray_root(make(DistanceKind::scaled_euclidean), {0.0, 1.0, 0.0}), 1.0 / 1.7, 1e-12);
  EXPECT_NEAR(ray_root(make(DistanceKind::ellipse), {0.0, 1.0, 0.0}), 1.5, 1e-12);
}

// perimeter of the ellipse with semi-axes 1 and 1.5, by a test-side quadrature
TEST(Distance, SphereQuadratureMeasures) {
  const auto circ = sphere_quadrature(make(DistanceKind::euclidean), 256);
  EXPECT_NEAR(circ.total_weight(), 2.0 * std::numbers::pi, 1e-10);
  double per = 0.0;
  const int n = 1 << 16;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * (i + 0.5) / n;
    per += std::hypot(std::sin(t), 1.5 * std::cos(t));
  }
  per *= 2.0 * std::numbers::pi / n;
  const auto ell = sphere_quadrature(make(DistanceKind::ellipse), 512);
  EXPECT_NEAR(ell.total_weight(), per, 1e-8 * per);
  const auto s3 = sphere_quadrature(make(DistanceKind::euclidean, 1.0, 3), 2048);
  EXPECT_NEAR(s3.total_weight(), 4.0 * std::numbers::pi, 1e-6);
  for (const auto& x : ell.nodes) EXPECT_NEAR(make(DistanceKind::ellipse)(x), 1.0, 1e-12);
}

TEST(Distance, InvalidParameters) {
  DistanceParams p;
  p.c = -1.0;
  EXPECT_THROW(builtin_distance(DistanceKind::scaled_euclidean, p), ParameterError);
  p = {};
  p.m = 0;
  EXPECT_THROW(builtin_distance(DistanceKind::lp_smooth, p), ParameterError);
  p = {};
  p.axes = {1.0};
  EXPECT_THROW(builtin_distance(DistanceKind::ellipse, p), ParameterError);
  p = {};
  p.beta = 0.0;
  EXPECT_THROW(builtin_distance(DistanceKind::euclidean, p), ParameterError);
  EXPECT_THROW(builtin_distance("taxicab", {}), ParameterError);
  EXPECT_EQ(distance_kind_from_string("lp_smooth"), DistanceKind::lp_smooth);
}
