#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qrlab/errors.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/grid.hpp"
#include "qrlab/grid_io.hpp"

using namespace qrlab;

namespace {

GridFunction gaussian(const GridSpec& spec, double sigma) {
  return sample(spec, [sigma](const std::array<double, 3>& x) {
    return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * sigma * sigma)));
  });
}

GridFunction noise(const GridSpec& spec, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> N;
  GridFunction f(spec, Domain::space);
  for (auto& v : f.data()) v = cplx(N(gen), N(gen));
  return f;
}

}  // namespace

TEST(Grid, Validation) {
  EXPECT_THROW(make_grid(2, 100, 8.0), ParameterError);
  EXPECT_THROW(make_grid(2, 4, 8.0), ParameterError);
  EXPECT_THROW(make_grid(4, 16, 8.0), ParameterError);
  EXPECT_THROW(make_grid(2, 16, 0.0), ParameterError);
  EXPECT_THROW(make_grid(3, 128, 8.0), ParameterError);
  EXPECT_NO_THROW(make_grid(3, 64, 8.0));
}

TEST(Grid, Lattices) {
  const GridSpec s = make_grid(2, 64, 8.0);
  EXPECT_DOUBLE_EQ(s.spacing(), 0.25);
  EXPECT_DOUBLE_EQ(s.coordinate(32), 0.0);
  EXPECT_DOUBLE_EQ(s.freq_spacing(), std::numbers::pi / 8.0);
  EXPECT_DOUBLE_EQ(s.nyquist(), 64 * std::numbers::pi / 16.0);
  EXPECT_DOUBLE_EQ(s.frequency(63), -s.freq_spacing());
  const auto o = s.point(origin_index(s));
  EXPECT_EQ(o[0], 0.0);
  EXPECT_EQ(o[1], 0.0);
  for (std::size_t i : {0ul, 17ul, 4095ul}) EXPECT_EQ(s.flatten(s.unflatten(i)), i);
}

// continuum transform of exp(-|x|^2 / 2 sigma^2) in 2-d: 2 pi sigma^2 exp(-sigma^2 |xi|^2 / 2)
TEST(Grid, ForwardTransformMatchesGaussianOracle) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const double sigma = 1.3;
  const GridFunction hat = dft_forward(gaussian(s, sigma));
  double err = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto xi = s.frequency_point(i);
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
    const double exact = 2.0 * std::numbers::pi * sigma * sigma * std::exp(-0.5 * sigma * sigma * r2);
    err = std::max(err, std::abs(hat[i] - exact));
  }
  EXPECT_LT(err, 1e-12);
}

TEST(Grid, ParsevalAndRoundTrip) {
  for (int dim : {1, 2, 3}) {
    const GridSpec s = make_grid(dim, dim == 3 ? 16 : 64, 4.0);
    const GridFunction f = noise(s, 11 + dim);
    const GridFunction hat = dft_forward(f);
    EXPECT_EQ(hat.domain(), Domain::frequency);
    EXPECT_NEAR(hat.l2_norm_squared() / f.l2_norm_squared(), 1.0, 1e-12);
    const GridFunction back = dft_inverse(hat);
    EXPECT_LT((back - f).max_abs(), 1e-12);
  }
}

TEST(Grid, GaussianNorm) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const double sigma = 2.0;
  EXPECT_NEAR(gaussian(s, sigma).l2_norm_squared(), std::numbers::pi * sigma * sigma, 1e-10);
}

TEST(Grid, RawFftMatchesDirectDft) {
  const GridSpec s = make_grid(1, 16, 1.0);
  const GridFunction f = noise(s, 3);
  std::vector<cplx> v = f.data();
  fft::forward(s, v);
  for (int k = 0; k < 16; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < 16; ++j) acc += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / 16.0);
    EXPECT_LT(std::abs(acc - v[k]), 1e-12);
  }
}

// average of |x|^2 over the square [-h/2, h/2]^2 is h^2 / 6
TEST(Grid, OriginCellPower) {
  const GridSpec s = make_grid(2, 64, 8.0);
  const double h = s.spacing();
  EXPECT_NEAR(origin_cell_power(s, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(origin_cell_power(s, 2.0), h * h / 6.0, 1e-12);
  const auto& r = regularized_radii(s);
  EXPECT_DOUBLE_EQ(r[origin_index(s)], h / 2.0);
}

TEST(Grid, Annuli) {
  const GridSpec s = make_grid(2, 128, 16.0);
  const auto dec = annuli(s, 0, 2);
  EXPECT_EQ(dec.count(), 3);
  const auto& r = regularized_radii(s);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const int expect = r[i] >= 1.0 && r[i] < 8.0 ? static_cast<int>(std::floor(std::log2(r[i])))
                                                 : AnnulusDecomposition::kUncovered;
    ASSERT_EQ(dec.label[i], expect);
  }
  const auto core = annuli(s, 0, 2, true);
  EXPECT_EQ(core.label[origin_index(s)], 0);
  EXPECT_NO_THROW(annuli(s, 0, 3));
  EXPECT_THROW(annuli(s, 0, 4), ParameterError);
  EXPECT_THROW(annuli(s, 2, 1), ParameterError);
  const auto all = covering_annuli(s);
  std::size_t covered = 0;
  for (int l = all.l_min; l <= all.l_max; ++l) covered += all.points_in(l);
  std::size_t inside = 0;
  for (double v : r) inside += v < std::ldexp(1.0, all.l_max + 1);
  EXPECT_EQ(covered, inside);
}

TEST(Grid, DilationSampling) {
  const GridSpec s = make_grid(2, 64, 8.0);
  auto fn = [](const std::array<double, 3>& x) { return cplx(std::exp(-x[0] * x[0] - 2 * x[1] * x[1])); };
  const GridFunction d = sample_dilated(s, 1, fn);
  for (std::size_t i = 0; i < d.size(); i += 97) {
    const auto x = s.point(i);
    EXPECT_EQ(d[i], fn({2 * x[0], 2 * x[1], 0.0}));
  }
}

TEST(GridIo, CsvAndBinaryRoundTripExactly) {
  const GridSpec s = make_grid(2, 16, 3.0);
  const GridFunction f = noise(s, 8);
  std::stringstream csv;
  write_csv(csv, f);
  const GridFunction g = read_csv(csv);
  EXPECT_EQ(g.spec(), s);
  EXPECT_EQ(g.data(), f.data());
  std::stringstream bin;
  write_binary(bin, f);
  const GridFunction h = read_binary(bin);
  EXPECT_EQ(h.data(), f.data());
  EXPECT_EQ(h.domain(), Domain::space);
}

TEST(Grid, EdgeEnergyAndBoundary) {
  const GridSpec s = make_grid(2, 64, 16.0);
  const GridFunction g = gaussian(s, 2.0);
  EXPECT_LT(spectral_edge_fraction(g), 1e-20);
  // outermost shell includes x = L - h = 15.5
  EXPECT_NEAR(boundary_max(g) / std::exp(-15.5 * 15.5 / 8.0), 1.0, 1e-12);
  GridFunction spike(s, Domain::space);
  spike[origin_index(s)] = 1.0;
  EXPECT_GT(spectral_edge_fraction(spike), 0.1);
}
