#pragma once

#include <limits>
#include <span>
#include <string>

#include "qrlab/bank.hpp"
#include "qrlab/grid.hpp"
#include "qrlab/report.hpp"

namespace qrlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Lorentz norm of a step function given by nonnegative values carrying the
/// given masses: (int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}, evaluated exactly
/// on the steps of the decreasing rearrangement; q = inf gives
/// sup_t t^{1/p} f*(t).
double step_lorentz_norm(std::span<const double> values, std::span<const double> masses,
                         double p, double q);

/// Lorentz L^{p,q} norm of a space-domain field, cell measure = cell volume.
double lorentz_norm(const GridFunction& f, double p, double q);

/// sup_s s^{1/p} f*(s) for a space-domain field.
double weak_lorentz_quasinorm(const GridFunction& f, double p);

struct HerzOptions {
  /// Exponent r of the annulus norms (r = 2 in every theorem test).
  double r = 2.0;
  /// Allowed fraction of the r-th power mass outside the covered annuli.
  double uncovered_tolerance = 1e-8;
};

/// (sum_l 2^{l gamma q} ||f||_{L^r(A_l)}^q)^{1/q}, sup over l for q = inf.
/// Throws GuardError when the mass outside the annuli exceeds the tolerance.
double herz_norm(const GridFunction& f, double gamma, double q, const AnnulusDecomposition& decomp,
                 const HerzOptions& options = {});

/// Per-annulus L^r masses (int_{A_l} |f|^r)^{1/r}, indexed l - l_min.
std::vector<double> annulus_norms(const GridFunction& f, const AnnulusDecomposition& decomp,
                                  double r = 2.0, double weight_power = 0.0);

/// (sum |f|^2 |x|^a cellvol)^{1/2} with the origin cell at radius spacing/2.
double weighted_l2_norm(const GridFunction& f, double a);

/// Fraction of int |f|^r lying outside the covered annuli.
double uncovered_fraction(const GridFunction& f, const AnnulusDecomposition& decomp,
                          double r = 2.0);

enum class NormKind { lorentz, herz, weighted_l2 };

struct NormSpec {
  NormKind kind = NormKind::lorentz;
  double p = 2.0;
  double q = 2.0;
  double gamma = 0.0;
  double r = 2.0;
  double a = 0.0;
  int l_min = 0;
  int l_max = 0;
};

/// Validates parameter ranges for dimension d; throws ParameterError.
void validate(const NormSpec& spec, int dim);
double evaluate(const NormSpec& spec, const GridFunction& f);

/// Annulus-sum side of the Lorentz embedding,
/// (sum_l [int_{A_l} |f|^r |x|^{-a}]^{q/r})^{1/q}.
double embedding_lhs(const GridFunction& f, double a, double r, double q,
                     const AnnulusDecomposition& decomp);

/// Ratio embedding_lhs / lorentz_norm(f, p, q) with p = r d / (d - a) over the
/// bank; symmetry_drift is measured over the dilations f(2^m .), m in
/// `dilations`, under which both sides scale alike.
RatioReport check_embedding(const TestBank& bank, double a, double r, double q,
                            const AnnulusDecomposition& decomp,
                            const std::vector<int>& dilations = {-1, 0, 1});

}  // namespace qrlab
