#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "qrlab/errors.hpp"
#include "qrlab/operator.hpp"
#include "qrlab/smooth.hpp"

using namespace qrlab;

namespace {

GridFunction gaussian(const GridSpec& spec, double sigma) {
  return sample(spec, [sigma](const std::array<double, 3>& x) {
    return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * sigma * sigma)));
  });
}

GridFunction shell(const GridSpec& spec, double radius, double width) {
  return dft_inverse(sample_spectrum(spec, [=](const std::array<double, 3>& xi) {
    return cplx(smooth::bump((std::hypot(xi[0], xi[1]) - radius) / width));
  }));
}

DistanceFunction euclid() { return builtin_distance(DistanceKind::euclidean, {}); }

}  // namespace

// heat symbol on a gaussian: variance adds
TEST(Operator, ApplySymbolHeatOracle) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const double sigma = 1.2, tau = 0.7;
  const GridFunction out =
      apply_symbol(gaussian(s, sigma), euclid(),
                   {[tau](double r) { return cplx(std::exp(-0.5 * tau * r * r)); }, 1e9});
  const double v = sigma * sigma + tau;
  double err = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = s.point(i);
    err = std::max(err, std::abs(out[i] - sigma * sigma / v * std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2 * v))));
  }
  EXPECT_LT(err, 1e-12);
}

TEST(Operator, RieszSplitsIntoCutoffAndRemainder) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const GridFunction f = gaussian(s, 1.0);
  const auto rho = euclid();
  const GridFunction full = riesz_mean(f, rho, 0.5, 1.0, 2.0);
  const GridFunction sum = riesz_mean(f, rho, 0.5, 1.0, 2.0, RieszMode::cutoff) +
                           riesz_mean(f, rho, 0.5, 1.0, 2.0, RieszMode::remainder);
  EXPECT_LT((full - sum).max_abs(), 1e-12);
}

// a band-limited f is reproduced exactly once t passes the spectral radius
TEST(Operator, RieszMeanOfBandLimitedInput) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const GridFunction f = shell(s, 2.0, 0.5);
  const auto rho = euclid();
  EXPECT_LT((riesz_mean(f, rho, 0.0, 0.0, 3.0) - f).max_abs(), 1e-12);
  EXPECT_GT((riesz_mean(f, rho, 0.0, 0.0, 2.0) - f).max_abs(), 1e-3);
}

TEST(Operator, MaximalDominatesEachDilation) {
  const GridSpec s = make_grid(2, 128, 32.0);
  const GridFunction f = gaussian(s, 2.0);
  const Profile1D h = bump_profile(1.0, 0.45);
  const auto ts = make_tgrid(-2, -1, 4).values();
  const GridFunction M = maximal_function(f, euclid(), h, ts);
  for (double t : ts) {
    const GridFunction a = apply_multiplier(f, euclid(), h, t);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_GE(M[i].real() + 1e-15, std::abs(a[i]));
  }
}

TEST(Operator, TGrid) {
  const TGrid g = make_tgrid(-2, 1, 4);
  const auto v = g.values();
  ASSERT_EQ(v.size(), 16u);
  EXPECT_DOUBLE_EQ(v.front(), 0.25);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  const auto r = g.refined().values();
  const std::set<double> fine(r.begin(), r.end());
  for (double t : v) EXPECT_TRUE(fine.count(t));
  EXPECT_DOUBLE_EQ(g.shifted(1).values().front(), 0.5);
}

TEST(Operator, LittlewoodPaleyBlocksReconstruct) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const GridFunction f = shell(s, 2.0, 1.0);
  const auto rho = euclid();
  EXPECT_LT(lp_uncovered_fraction(f, rho, -2, 3), 1e-20);
  const auto blocks = lp_blocks(f, rho, -2, 3);
  GridFunction sum(s, Domain::space);
  for (const auto& b : blocks) sum += b;
  EXPECT_LT((sum - f).max_abs(), 1e-12);
  EXPECT_THROW(lp_blocks(f, rho, 1, 1), GuardError);
  EXPECT_THROW(lp_blocks(f, rho, 2, 1), ParameterError);
}

TEST(Operator, WaveMultiplierAtZeroIsTheFattenedBlock) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const GridFunction f = gaussian(s, 1.0);
  EXPECT_LT((a_tau(f, euclid(), 0.0) - l_block(f, euclid(), 0)).max_abs(), 1e-14);
  // |e^{-i tau rho}| = 1: the L2 mass does not depend on tau
  EXPECT_NEAR(a_tau(f, euclid(), 3.0).l2_norm(), a_tau(f, euclid(), 0.0).l2_norm(), 1e-12);
}

TEST(Operator, NyquistGuard) {
  const GridSpec s = make_grid(2, 64, 16.0);
  GridFunction spike(s, Domain::space);
  spike[origin_index(s)] = 1.0;
  EXPECT_THROW(nyquist_guard(spike, euclid(), 1e3), GuardError);
  EXPECT_NO_THROW(nyquist_guard(spike, euclid(), 1.0));
  EXPECT_NO_THROW(nyquist_guard(gaussian(s, 2.0), euclid(), 1e3));
  EXPECT_THROW(nyquist_guard(gaussian(s, 1.0), euclid(), 1e3), GuardError);
}

// B(1 - i w, alpha) = alpha^-1 int_0^1 (1 - v^{1/alpha})^{-i w} dv after v = (1-u)^alpha
TEST(Operator, MellinSymbolAgainstQuadrature) {
  for (double alpha : {0.6, 0.75, 1.5}) {
    EXPECT_NEAR(mellin_symbol_sq(alpha, 0.0), 1.0 / (alpha * alpha), 1e-12);
    for (double w : {0.5, 2.0}) {
      const int n = 400000;
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = (i + 0.5) / n;
        acc += std::polar(1.0, -w * std::log1p(-std::pow(v, 1.0 / alpha)));
      }
      acc /= alpha * n;
      EXPECT_NEAR(mellin_symbol_sq(alpha, w), std::norm(acc), 1e-4);
    }
  }
}

TEST(Operator, SquareFunctionRejectsBadAlpha) {
  const GridSpec s = make_grid(2, 64, 16.0);
  EXPECT_THROW(stein_square_function(gaussian(s, 1.0), euclid(), 0.5), ParameterError);
}
