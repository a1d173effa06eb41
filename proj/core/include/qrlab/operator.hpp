#pragma once

#include <functional>
#include <vector>

#include "qrlab/distance.hpp"
#include "qrlab/grid.hpp"
#include "qrlab/profile.hpp"

namespace qrlab {

/// Geometric dilation grid t = 2^{k + i/M}, k in [k_min, k_max], i < M.
/// Doubling M yields a superset.
struct TGrid {
  int k_min = 0;
  int k_max = 0;
  int M = 16;
  std::vector<double> values() const;
  TGrid shifted(int m) const { return {k_min + m, k_max + m, M}; }
  TGrid refined() const { return {k_min, k_max, 2 * M}; }
};

TGrid make_tgrid(int k_min, int k_max, int M);

/// Radial profile g with g(s) = 0 for s > support_hi.
struct RadialSymbol {
  std::function<cplx(double)> fn;
  double support_hi = 0.0;
};

/// rho at the frequency lattice, cached per (grid, distance).
const std::vector<double>& cached_rho(const GridSpec& spec, const DistanceFunction& rho);

/// Throws GuardError unless {rho <= rho_support} lies inside the frequency
/// box, or f carries no spectral energy near the box edge (fraction < 1e-20).
void nyquist_guard(const GridFunction& f, const DistanceFunction& rho, double rho_support);

/// F^{-1}[g(rho) F f] for a space-domain f.
GridFunction apply_symbol(const GridFunction& f, const DistanceFunction& rho, const RadialSymbol& g);

/// F^{-1}[h(rho/t) F f].
GridFunction apply_multiplier(const GridFunction& f, const DistanceFunction& rho, const Profile1D& h,
                              double t);

enum class RieszMode { full, cutoff, remainder };

/// S_t^{lambda,gamma} f. `cutoff` keeps chi * h_{lambda,gamma}, `remainder`
/// the complementary (1 - chi) part; full = cutoff + remainder.
GridFunction riesz_mean(const GridFunction& f, const DistanceFunction& rho, double lambda,
                        double gamma, double t, RieszMode mode = RieszMode::full);

/// Pointwise max over the sampled dilations of |F^{-1}[h(rho/t) F f]|, as a
/// real space field.
GridFunction maximal_function(const GridFunction& f, const DistanceFunction& rho, const Profile1D& h,
                              const std::vector<double>& ts);
GridFunction maximal_function(const GridFunction& f, const DistanceFunction& rho, const Profile1D& h,
                              const TGrid& tgrid);

struct SquareFunctionOptions {
  /// Length added to the log-rho spread of f's spectrum when choosing the
  /// Mellin period; the omega step is 2 pi / period.
  double period_margin = 36.0;
  /// Radial displacement (fraction of the half width) from which
  /// components are moved to the analytic tail.
  double window_fraction = 0.6;
  /// Weight exponent a of the tail estimate for int G^2 |x|^a.
  double weight_power = 0.0;
};

struct SquareFunctionResult {
  /// G_alpha f on the grid (real field).
  GridFunction g;
  /// Estimated int G^2 and int G^2 |x|^a carried by components displaced
  /// beyond the window.
  double tail = 0.0;
  double weighted_tail = 0.0;
  double omega_step = 0.0;
  int omega_count = 0;

  double l2_norm() const;
  double weighted_l2_norm(double a) const;
};

/// |B(1 - i w, alpha)|^2, the squared Mellin symbol of u (1-u)_+^{alpha-1}.
double mellin_symbol_sq(double alpha, double omega);

/// Stein's square function (int_0^inf |S^{alpha-1}_t f - S^alpha_t f|^2 dt/t)^{1/2}
/// through the Mellin transform in t.
SquareFunctionResult stein_square_function(const GridFunction& f, const DistanceFunction& rho,
                                           double alpha, const SquareFunctionOptions& options = {});

/// P_k f with symbol psi(2^{-k} rho), k in [k_min, k_max]; the coverage guard
/// throws when more than 1e-10 of the spectral energy is missed.
std::vector<GridFunction> lp_blocks(const GridFunction& f, const DistanceFunction& rho, int k_min,
                                    int k_max);
/// Uncovered spectral energy fraction of the P_k family on f.
double lp_uncovered_fraction(const GridFunction& f, const DistanceFunction& rho, int k_min, int k_max);

/// L_k f with symbol eta(2^{-k} rho).
GridFunction l_block(const GridFunction& f, const DistanceFunction& rho, int k);

/// A_tau f with symbol eta(rho) e^{-i tau rho}.
GridFunction a_tau(const GridFunction& f, const DistanceFunction& rho, double tau);

/// T^{j,k}_t[h, f] = F^{-1}[eta(2^{-k} rho) V_j h(2^{-k} rho / t) F f].
GridFunction t_jk(const GridFunction& f, const DistanceFunction& rho, const Profile1D& component,
                  int k, double t);

struct MPieces {
  GridFunction m1;
  GridFunction m2;
  /// sup_t |sum_j T^{j,k}_t[h, f]| without the spatial split.
  GridFunction undecomposed;
};

/// M_1^k and M_2^k: for each j, f is split at |x| = 2^{-k+j+c0+1} into the
/// annuli chi_{-k+j-n}, n >= -c0 (M_1) and chi_{-k+l}, l > j + c0 (M_2).
MPieces m_pieces(const GridFunction& f, const DistanceFunction& rho, const VjDecomposition& vj,
                 int k, int c0, const std::vector<double>& ts);

struct KernelDecay {
  double outer_slope = 0.0;
  double outer_radius = 0.0;
  double inner_radius = 0.0;
  double inner_sup = 0.0;
  double outer_sup = 0.0;
  double global_sup = 0.0;
  int fit_points = 0;
};

/// K_{j,s} = F^{-1}[eta(rho) V_j h(rho/s)] on `spec`; fits log of the radial
/// envelope of |K| against log|x| for |x| >= 2^{j+c0} (points above 1e-12 of
/// the global max), and records sup |K| on |x| <= 2^{-j-c0}.
KernelDecay kernel_decay_probe(const GridSpec& spec, const DistanceFunction& rho,
                               const Profile1D& component, int j, double s, int c0);

}  // namespace qrlab
