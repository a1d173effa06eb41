#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrlab/bank.hpp"
#include "qrlab/distance.hpp"
#include "qrlab/operator.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/report.hpp"
#include "qrlab/spaces.hpp"

namespace qrlab {

// Every check returns measured ratios; nothing here asserts a constant.
// symmetry_drift is max_m |ratio_m / ratio_0 - 1| over the declared exact
// symmetry, taken per entry.

/// Throws ParameterError unless 1/2 < alpha < d/2 (skipped when !enforce).
void require_alpha_range(double alpha, int dim, bool enforce);

struct HerzMaximalSetup {
  DistanceFunction rho;
  std::vector<Profile1D> profiles;
  TestBank bank;
  double alpha = 0.75;
  std::vector<double> qs{1.0, 2.0, kInfinity};
  /// t-grid at m = 0; dilation m uses tgrid.shifted(m).
  TGrid tgrid{-3, -1, 16};
  /// Annuli at m = 0 (innermost absorbs the core ball); dilation m uses
  /// [l_min - m, l_max - m].
  int l_min = 3;
  int l_max = 6;
  std::vector<int> dilations{-1, 0, 1};
  /// Re-run m = 0 with 2M and record the max_ratio change.
  bool refine = true;
  /// Allowed mass of the maximal function beyond the annuli.
  double output_uncovered_tolerance = 0.25;
  bool enforce_range = true;
};

/// One report per q: lhs = herz_norm(sup_t |F^{-1}[h(rho/t) f^]|, -alpha,
/// max(q, 2)), rhs = besov_norm(h, alpha, q') herz_norm(f, -alpha, q).
std::vector<RatioReport> check_herz_maximal(const HerzMaximalSetup& setup);

struct MultiplierSetup {
  GridSpec spec;
  DistanceFunction rho;
  double alpha = 0.75;
  /// Block range of m = sum_k c_k psi(2^-k s).
  int k_min = -3;
  int k_max = 0;
  int draws = 20;
  std::uint64_t seed = 1;
  TestBank bank;
  /// Radial modulations tau of the reverse probes phi(rho/t) e^{-i tau rho/t}.
  std::vector<double> taus{0.0, 2.0, 4.0, 8.0};
  /// Steps per octave of the t grid for sup_t ||phi m(t .)||.
  int t_steps = 8;
  bool enforce_range = true;
};

/// phi in C_0^infty(1/2, 2) used by the multiplier criterion.
double multiplier_phi(double s);
/// (int (1 + w^2)^alpha |g^(w)|^2 dw / 2 pi)^{1/2}.
double sobolev_norm(const Profile1D& g, double alpha);

/// Per draw: lhs = empirical norm of T on L^2(|x|^{-2 alpha}) over the bank,
/// rhs = sup_t ||phi m(t .)||_{L^2_alpha}; ratio is the forward constant.
/// Metrics: reverse constants, their bands, the duality discrepancy and the
/// single-block dilation drift.
RatioReport check_multiplier_equivalence(const MultiplierSetup& setup);

struct SquareFunctionSetup {
  DistanceFunction rho;
  TestBank bank;
  double alpha = 0.75;
  std::vector<int> dilations{-1, 0, 1};
  SquareFunctionOptions options;
  bool enforce_range = true;
};

/// ratio = ||G_alpha f||_{L^2(|x|^{-2 alpha})} / ||f||_{L^2(|x|^{-2 alpha})}.
RatioReport check_square_function(const SquareFunctionSetup& setup);

/// Thin-shell inputs f^ = bump((rho - R)/w) on `spec` for each radius R
/// (w = width_fraction R): entries carry the weighted ratio; metrics hold
/// the unweighted L^2 ratios, the Beta oracle (2 alpha (2 alpha - 1))^{-1/2}
/// and the spread of the weighted ratio across R.
RatioReport check_square_function_shells(const GridSpec& spec, const DistanceFunction& rho,
                                         double alpha, const std::vector<double>& radii,
                                         double width_fraction,
                                         const SquareFunctionOptions& options = {});

struct FluSetup {
  GridSpec spec;
  DistanceFunction rho;
  std::vector<Profile1D> profiles;
  double u = 1.5;
  double s = 1.5;
  /// Kernel window [-R, R] with n_r samples.
  double kernel_half_width = 2048.0;
  int kernel_samples = 1 << 16;
  KernelOptions kernel_options;
};

/// lhs = ||F^{-1}[h o rho]||_{L^{u,s}(R^d)}, rhs = mu_lorentz_norm of the
/// 1-d kernel; metric "spread" = max_ratio / min_ratio.
RatioReport check_flu_equivalence(const FluSetup& setup);

/// Bumps of the given widths centred at 1, times cos(R (r - 1)).
std::vector<Profile1D> flu_profile_family(const std::vector<double>& widths,
                                          const std::vector<double>& modulations,
                                          double resolution = kDefaultProfileResolution);

struct TraceSetup {
  DistanceFunction rho;
  TestBank bank;
  double b = 1.5;
  int sphere_nodes = 256;
  std::vector<int> dilations{-1, 0, 1};
};

/// lhs = int_{rho = 1} |g^|^2 d sigma by direct nonuniform evaluation,
/// rhs = int |g|^2 |x|^b.
RatioReport check_trace(const TraceSetup& setup);

struct BasicMaximalSetup {
  DistanceFunction rho;
  Profile1D h;
  TestBank bank;
  double b = 1.5;
  /// Sampling of 1 < t < 2; refinement doubles it.
  int t_steps = 16;
  std::vector<int> dilations{-1, 0, 1};
  bool refine = true;
};

/// lhs = ||sup_{1<t<2} |F^{-1}[h(rho/t) f^]| ||_{L^2(|x|^{-b})}, rhs = A ||f||_2
/// with A = (int |h(s)|^2 s^{b/beta - 1} ds)^{1/2}.
RatioReport check_basic_maximal(const BasicMaximalSetup& setup);

/// A of the basic maximal estimate by quadrature on the profile samples.
double basic_maximal_constant(const Profile1D& h, double b, double beta);

struct AtauSetup {
  DistanceFunction rho;
  TestBank bank;
  double b = 1.5;
  /// Window |tau| <= tau_max (scaled by 2^-m under dilation); the rest is the
  /// analytic tail.
  double tau_max = 2.0;
  double tau_step = 0.125;
  std::vector<int> dilations{-1, 0, 1};
};

/// lhs = int ||A_tau f||^2_{L^2(|x|^{-b})} d tau, rhs = ||f||_2^2: trapezoid on
/// the window plus 2 T^{1-b}/(b-1) sum_xi |eta f^|^2 |grad rho|^{-b} beyond it.
/// Metric tail_fraction: largest share of the analytic tail.
RatioReport check_atau(const AtauSetup& setup);

struct LpSetup {
  DistanceFunction rho;
  TestBank bank;
  double gamma = 0.5;
  double q = 2.0;
  int k_min = -6;
  int k_max = 2;
  int l_min = 2;
  int l_max = 4;
  std::vector<int> dilations{-1, 0, 1};
};

/// lhs = ||(sum_k |P_k f|^2)^{1/2}||_{K^gamma_q}, rhs = ||f||_{K^gamma_q}, with
/// the same index-shifted annuli as check_herz_maximal.
RatioReport check_littlewood_paley(const LpSetup& setup);

struct WeightConvolutionSetup {
  /// Convolution kernel on the r grid (Gaussian when empty).
  double sigma = 1.0;
  double a = 0.0;
  double u = 2.0;
  double s = 2.0;
  int d = 2;
  double half_width = 256.0;
  int samples = 1 << 14;
  int count = 8;
  std::uint64_t seed = 3;
};

/// lhs = ||M_{-a}[sigma * (M_a g)]||_{L^{u,s}(mu_d)}, rhs = ||g||_{L^{u,s}(mu_d)}
/// on random bumps g; the drift is the change under halving the r step.
RatioReport check_weight_convolution(const WeightConvolutionSetup& setup);

struct LambdaBesovSetup {
  std::vector<Profile1D> profiles;
  double alpha = 0.75;
  double s = 2.0;
  double b = 1.0;
  int j_max = 8;
};

/// lhs = (sum_j [2^{j alpha} Lambda_b^j(h)]^s)^{1/s}, rhs = besov_norm(h, alpha, s).
RatioReport check_lambda_besov(const LambdaBesovSetup& setup);

/// Profiles whose spectrum peaks in block j0: cos(w r) bump with w = 2^{j0-1},
/// windowed to (1/2, 2). The bump's own spectral width spans several blocks,
/// so the concentration is only sharp from j0 ~ 5 on.
std::vector<Profile1D> single_block_profiles(const std::vector<int>& j0s,
                                             double resolution = kDefaultProfileResolution);

struct SobembSetup {
  DistanceFunction rho;
  Profile1D h;
  TestBank bank;
  double gamma = 1.0;
  std::vector<int> js{0, 1, 2, 3};
  int t_steps = 16;
  std::vector<int> dilations{-1, 0, 1};
};

/// lhs = ||sup_{1<=t<=2} |T^{j,k}_t[h, f]| ||_2 with k = m for f(2^m .),
/// rhs = 2^{j(1/2 - gamma)} ||h||_{B_{gamma,1}} ||f||_2.
RatioReport check_sobolev_embedding(const SobembSetup& setup);

struct KernelDecaySetup {
  GridSpec spec;
  DistanceFunction rho;
  Profile1D h;
  std::vector<int> js{2, 4, 6};
  double s = 1.0;
  int c0 = 2;
};

/// Per j: lhs = inner sup 2^{4j} / ||h||_inf; metrics outer_slope_j and
/// max_outer_slope, inner_scaling = max_j lhs / lhs_{j_first}.
RatioReport check_kernel_decay(const KernelDecaySetup& setup);

struct KappaSetup {
  double lambda = 0.25;
  double gamma = 0.0;
  double r_lo = 64.0;
  double r_hi = 4096.0;
  double resolution = 65536.0;
  KernelOptions kernel_options;
};

/// Compensated magnitude |kappa(r)| r^{lambda+1} (log r)^gamma on log-spaced
/// r in [r_lo, r_hi]: entries per sample; metrics envelope_slope (least
/// squares in log-log), band = max / min.
RatioReport check_kappa_asymptotics(const KappaSetup& setup);

struct ConvergenceSetup {
  GridFunction f;
  DistanceFunction rho;
  double lambda = 0.25;
  double gamma = 1.0;
  std::vector<double> ts;
  /// Probe annulus U_R = {1/R <= |x| <= R}.
  double probe_r = 4.0;
  RieszMode mode = RieszMode::full;
};

/// sup over the probe of |S_t f - f| (full) or |S_t f| (cutoff).
ConvergenceReport convergence_experiment(const ConvergenceSetup& setup);

struct ExperimentInfo {
  std::string name;
  std::string description;
};

/// Verify operations exposed through the command line tool, in fixed order.
const std::vector<ExperimentInfo>& experiment_list();

}  // namespace qrlab
