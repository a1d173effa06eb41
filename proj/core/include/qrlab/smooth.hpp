#pragma once

// Fixed smooth cutoff functions shared across the library. Every family used
// by the dyadic decompositions is built from the exp-bump below, so that the
// frequency blocks of besov_norm and vj_decompose are the same functions.

namespace qrlab::smooth {

/// exp(1 - 1/(1-u^2)) for |u| < 1, zero otherwise. Equals 1 at u = 0.
double bump(double u);

/// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double step(double u);

/// zeta_0: 1 on [-1/2, 1/2], supported in (-1, 1), even.
double zeta0(double r);

/// zeta_j(r) = zeta_0(2^-j r) - zeta_0(2^-j+1 r) for j >= 1, zeta_0 for j = 0.
double zeta(int j, double r);

/// Fattened cutoff: 1 on [1/4, 4], supported in (1/8, 8).
double eta(double s);

/// Cutoff on (1/2, 2) equal to 1 on [3/4, 3/2].
double chi(double s);

/// Littlewood-Paley block psi(s) = zeta0(s/2) - zeta0(s); sum_k psi(2^-k s) = 1
/// for s > 0. Supported in (1/2, 2).
double lp_block(double s);

/// Bump supported on (1/4, 1/2) used by sequence profiles.
double sequence_bump(double u);

}  // namespace qrlab::smooth
