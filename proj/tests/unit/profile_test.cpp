#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qrlab/errors.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/smooth.hpp"
#include "qrlab/verify.hpp"

using namespace qrlab;

namespace {

// midpoint rule on [a, b]
template <class F>
double integrate(F&& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

}  // namespace

TEST(Profile, RieszValues) {
  EXPECT_DOUBLE_EQ(riesz_value(0.5, 0.0, 0.75), 0.5);
  EXPECT_NEAR(riesz_value(0.5, 1.0, 0.75), 0.5 / (1.0 + std::log(4.0)), 1e-15);
  EXPECT_EQ(riesz_value(0.5, 1.0, 1.0), 0.0);
  EXPECT_EQ(riesz_value(0.5, 1.0, -0.1), 0.0);
  const Profile1D h = riesz_profile(0.25, 1.0);
  EXPECT_NEAR(h(0.3).real(), riesz_value(0.25, 1.0, 0.3), 1e-15);
  const Profile1D hc = riesz_profile(0.25, 1.0, kDefaultProfileResolution, true);
  EXPECT_EQ(hc(0.3), cplx(0.0));
  EXPECT_NEAR(hc(0.6).real(), smooth::chi(0.6) * riesz_value(0.25, 1.0, 0.6), 1e-15);
}

TEST(Profile, BumpNormAgainstQuadrature) {
  const Profile1D h = bump_profile(1.0, 0.45);
  EXPECT_DOUBLE_EQ(h(1.0).real(), 1.0);
  EXPECT_EQ(h(1.46), cplx(0.0));
  const double exact =
      std::sqrt(integrate([](double r) { return std::pow(smooth::bump((r - 1.0) / 0.45), 2); }, 0.55, 1.45));
  EXPECT_NEAR(h.l2_norm(), exact, 1e-9);
  EXPECT_DOUBLE_EQ(h.sup_norm(), 1.0);
}

TEST(Profile, SequenceProfileValue) {
  const Profile1D h = sequence_profile({2.0, 5.0}, 0.5);
  const double tau = 1.0 - 0.375 / 4.0;
  EXPECT_NEAR(h(tau).real(), 2.0 * std::exp2(-2 * 0.5), 1e-14);
  const double tau3 = 1.0 - 0.375 / 8.0;
  EXPECT_NEAR(h(tau3).real(), 5.0 * std::exp2(-3 * 0.5), 1e-14);
}

TEST(Profile, Arithmetic) {
  const Profile1D a = bump_profile(1.0, 0.3), b = bump_profile(1.2, 0.3);
  const Profile1D s = a + cplx(2.0) * b;
  for (double r : {0.8, 1.0, 1.1, 1.4}) EXPECT_NEAR(std::abs(s(r) - a(r) - 2.0 * b(r)), 0.0, 1e-14);
}

// the telescoped remainder h - sum V_j h is exactly the reported tail
TEST(Profile, VjReconstruction) {
  const Profile1D h = riesz_profile(0.5, 0.0, 1024.0);
  for (int J : {4, 8}) {
    const auto dec = vj_decompose(h, J);
    ASSERT_EQ(static_cast<int>(dec.components.size()), J + 1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      cplx s = 0.0;
      for (const auto& c : dec.components) s += c.samples()[i];
      d2 += std::norm(h.samples()[i] - s);
    }
    EXPECT_NEAR(std::sqrt(d2 * h.spacing()), dec.tail_l2, 1e-10);
    for (int j = 0; j <= J; ++j) EXPECT_LT(spectral_leakage(dec.components[j], j), 1e-20);
  }
  EXPECT_THROW(vj_decompose(h, 40), GuardError);
}

// zeta_j >= 0 with sum 1 and at most two overlapping: 1/2 <= sum zeta_j^2 <= 1
TEST(Profile, BesovBlocksBracketTheL2Norm) {
  for (const Profile1D& h : {bump_profile(1.0, 0.45, 1024.0), riesz_profile(1.0, 0.0, 1024.0)}) {
    const auto blocks = besov_blocks(h, max_block_index(h));
    double s = 0.0;
    for (double b : blocks) s += b * b;
    const double n2 = h.l2_norm() * h.l2_norm();
    EXPECT_LE(s, n2 * (1 + 1e-12));
    EXPECT_GE(s, 0.5 * n2 * (1 - 1e-12));
    EXPECT_LE(besov_norm(h, 0.5, 2.0), besov_norm(h, 1.0, 2.0));
    EXPECT_LE(besov_norm(h, 0.5, kInfinity), besov_norm(h, 0.5, 2.0));
  }
}

TEST(Profile, SingleBlockProfilesConcentrate) {
  const auto hs = single_block_profiles({5, 6}, 1024.0);
  ASSERT_EQ(hs.size(), 2u);
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const auto b = besov_blocks(hs[k], 8);
    const int j0 = k == 0 ? 5 : 6;
    for (int j = 0; j <= 8; ++j)
      if (std::abs(j - j0) > 1) EXPECT_LT(b[j], 0.05 * b[j0]);
  }
}

TEST(Profile, LambdaJbAtUnitWeightIsL2) {
  const Profile1D h = bump_profile(1.0, 0.45);
  EXPECT_NEAR(lambda_jb(h, 1.0), h.l2_norm(), 1e-12);
  const double exact = std::sqrt(integrate(
      [](double r) { return std::pow(smooth::bump((r - 1.0) / 0.45), 2) * r; }, 0.55, 1.45));
  EXPECT_NEAR(lambda_jb(h, 2.0), exact, 1e-8);
}

TEST(Profile, RescaleHomogeneity) {
  const Profile1D h = bump_profile(1.0, 0.45);
  const Profile1D h2 = rescale_homogeneity(h, 2.0);
  for (double s : {0.8, 0.95, 1.1}) EXPECT_NEAR(std::abs(h2(s) - h(s * s)), 0.0, 1e-15);
  EXPECT_NEAR(h2.support_hi(), std::sqrt(1.45), 1e-15);
  EXPECT_THROW(rescale_homogeneity(riesz_profile(0.5, 0.0), 2.0), ParameterError);
}

// K(r) = (2 pi)^-1 int h(t) e^{irt} dt against a direct test-side quadrature
TEST(Profile, KernelAgainstDirectIntegral) {
  const Profile1D h = bump_profile(1.0, 0.3);
  const Kernel1D K = kernel_1d(h, 1.0, 64.0, 1 << 10);
  ASSERT_EQ(K.r.size(), 1024u);
  EXPECT_DOUBLE_EQ(K.r[512], 0.0);
  for (std::size_t i : {512ul, 520ul, 600ul, 100ul, 1000ul}) {
    const double r = K.r[i];
    const double re = integrate([r](double t) { return smooth::bump((t - 1.0) / 0.3) * std::cos(r * t); }, 0.7, 1.3);
    const double im = integrate([r](double t) { return smooth::bump((t - 1.0) / 0.3) * std::sin(r * t); }, 0.7, 1.3);
    const cplx exact = cplx(re, im) / (2.0 * std::numbers::pi);
    EXPECT_LT(std::abs(K.values[i] - exact), 1e-9) << "r=" << r;
  }
}

TEST(Profile, MuLorentzDiagonalIsWeightedLp) {
  const Kernel1D K = kernel_1d(bump_profile(1.0, 0.3), 1.0, 256.0, 1 << 14);
  for (double u : {1.2, 1.5, 2.0}) {
    double s = 0.0;
    for (std::size_t i = 0; i < K.r.size(); ++i)
      s += std::pow(std::abs(K.values[i]), u) * std::pow(1.0 + std::abs(K.r[i]), 1.0 - u / 2.0) * K.spacing();
    EXPECT_NEAR(mu_lorentz_norm(K, u, u) / std::pow(s, 1.0 / u), 1.0, 1e-8);
  }
}

TEST(Profile, Errors) {
  EXPECT_THROW(bump_profile(1.0, 0.3, 1000.0), ParameterError);
  EXPECT_THROW(riesz_profile(-1.0, 0.0), ParameterError);
  EXPECT_THROW(riesz_profile(0.5, -1.0), ParameterError);
  EXPECT_THROW(besov_norm(bump_profile(1.0, 0.3), -1.0, 2.0), ParameterError);
  EXPECT_THROW(besov_blocks(bump_profile(1.0, 0.3, 64.0), 20), GuardError);
  EXPECT_THROW(kernel_1d(bump_profile(1.0, 0.3), 1.0, 10.0, 7), ParameterError);
}

TEST(Profile, CsvHeader) {
  std::ostringstream os;
  write_csv(os, bump_profile(1.0, 0.3, 64.0));
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# {", 0), 0u);
  EXPECT_NE(s.find("\nr,re,im\n"), std::string::npos);
}
