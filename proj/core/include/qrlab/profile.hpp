#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrlab/grid.hpp"

namespace qrlab {

inline constexpr double kDefaultProfileResolution = 8192.0;

/// One-dimensional profile h sampled on the periodic window [-W, W) with a
/// power-of-two number of samples. Values outside the declared support are
/// zero; evaluation off the lattice uses the analytic formula when one is
/// attached and six-point Lagrange interpolation otherwise.
class Profile1D {
 public:
  Profile1D() = default;
  /// Samples `formula` on the window; the formula is kept for evaluation.
  Profile1D(std::function<cplx(double)> formula, double support_lo, double support_hi,
            double resolution, double window = 0.0);
  /// Adopts tabulated samples on [-window, window).
  Profile1D(std::vector<cplx> samples, double window, double support_lo, double support_hi);

  cplx operator()(double r) const;
  double window() const { return window_; }
  double resolution() const { return samples_.size() / (2.0 * window_); }
  double spacing() const { return 2.0 * window_ / samples_.size(); }
  double position(std::size_t i) const { return -window_ + i * spacing(); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<cplx>& samples() const { return samples_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  bool has_formula() const { return static_cast<bool>(formula_); }

  double sup_norm() const;
  double l2_norm() const;

  /// Free-form description carried into serialization.
  std::string kind;
  std::map<std::string, double> params;
  std::vector<double> sequence;

 private:
  std::function<cplx(double)> formula_;
  std::vector<cplx> samples_;
  double window_ = 0.0;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

Profile1D operator*(cplx c, const Profile1D& h);
Profile1D operator+(const Profile1D& a, const Profile1D& b);

/// h_{lambda,gamma}(r) = (1-r)_+^lambda (1 + log(1/(1-r)))^{-gamma} on [0, 1],
/// optionally multiplied by the cutoff chi (then supported in [1/2, 1]).
Profile1D riesz_profile(double lambda, double gamma,
                        double resolution = kDefaultProfileResolution, bool cutoff = false);
double riesz_value(double lambda, double gamma, double r);

/// exp(1 - 1/(1-u^2)) in u = (r - center)/width.
Profile1D bump_profile(double center, double width,
                       double resolution = kDefaultProfileResolution);

/// h[a](tau) = sum_j a_j 2^{-j lambda} eta(2^j (1 - tau)) with a fixed bump eta
/// on (1/4, 1/2); a[i] is the coefficient of j = i + 2.
Profile1D sequence_profile(const std::vector<double>& a, double lambda,
                           double resolution = kDefaultProfileResolution);

/// Wraps an arbitrary formula supported in [lo, hi].
Profile1D formula_profile(std::function<cplx(double)> formula, double lo, double hi,
                          double resolution = kDefaultProfileResolution);

/// Largest dyadic index j whose block fits below the profile's Nyquist
/// frequency.
int max_block_index(const Profile1D& h);

/// ||Delta_j h||_2 for j = 0..j_max, computed on the spectrum.
std::vector<double> besov_blocks(const Profile1D& h, int j_max);

/// (sum_{j=0}^{j_max} [2^{j alpha} ||Delta_j h||_2]^s)^{1/s}; s = inf takes the
/// sup. Without j_max every block below Nyquist is used.
double besov_norm(const Profile1D& h, double alpha, double s, std::optional<int> j_max = {});

struct VjDecomposition {
  int j_max = 0;
  std::vector<Profile1D> components;
  /// ||h - sum_j V_j h||_2, the mass of the blocks beyond j_max.
  double tail_l2 = 0.0;
};

VjDecomposition vj_decompose(const Profile1D& h, int j_max);

/// Spectral L2 mass of `component` outside I_j relative to its total.
double spectral_leakage(const Profile1D& component, int j);

/// (int_0^inf |V_j h(r)|^2 r^{b-1} dr)^{1/2}.
double lambda_jb(const Profile1D& component, double b);

/// h_beta(s) = h(s^beta), support [a^{1/beta}, b^{1/beta}].
Profile1D rescale_homogeneity(const Profile1D& h, double beta);

/// CSV with a "# {json}" header (support, params, resolution) and rows r,re,im.
void write_csv(std::ostream& out, const Profile1D& h);

struct Kernel1D {
  std::vector<double> r;
  std::vector<cplx> values;
  int weight_dim = 1;
  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
};

struct KernelOptions {
  /// Period of the t-side sampling relative to 2R: larger suppresses aliasing
  /// of slowly decaying kernels.
  double period_factor = 1.0;
  /// Upper bound on the t-step; 0 selects the profile's own spacing.
  double max_t_step = 0.0;
  /// Relative tolerance of the refined-quadrature aliasing check.
  double guard_tolerance = 1e-4;
  int weight_dim = 2;
};

/// K_beta(r) = (2 pi)^{-1} int h(t^beta) e^{i r t} dt on r_i = (i - n_r/2) dr,
/// dr = 2R/n_r, by a zero-padded FFT. Sixteen pseudo-random r are checked
/// against a direct sum on a twice finer t grid; a mismatch throws GuardError.
Kernel1D kernel_1d(const Profile1D& h, double beta, double R, int n_r,
                   const KernelOptions& options = {});

/// Kernel of chi * h_{lambda,gamma}.
Kernel1D kappa_lg(double lambda, double gamma, double R, int n_r,
                  const KernelOptions& options = {},
                  double resolution = kDefaultProfileResolution);

/// || (1+|r|)^{-(d-1)/2} K ||_{L^{u,s}(mu_d)} with cell masses
/// (1+|r_i|)^{d-1} dr.
double mu_lorentz_norm(const Kernel1D& K, double u, double s);

/// Lorentz norm with respect to mu_d of nonnegative samples g(r_i) on a
/// uniform r grid, without the (1+|r|)^{-(d-1)/2} factor.
double mu_lorentz_norm(const std::vector<double>& r, const std::vector<double>& g, int d, double u,
                       double s);

}  // namespace qrlab
