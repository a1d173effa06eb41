#include "qrlab/smooth.hpp"

#include <cmath>

namespace qrlab::smooth {

double bump(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

double step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double zeta0(double r) {
  const double a = std::abs(r);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return step((1.0 - a) / 0.5);
}

double zeta(int j, double r) {
  if (j == 0) return zeta0(r);
  return zeta0(std::ldexp(r, -j)) - zeta0(std::ldexp(r, -j + 1));
}

double eta(double s) {
  if (s <= 0.125 || s >= 8.0) return 0.0;
  if (s >= 0.25 && s <= 4.0) return 1.0;
  if (s < 0.25) return step((s - 0.125) / 0.125);
  return step((8.0 - s) / 4.0);
}

double chi(double s) {
  if (s <= 0.5 || s >= 2.0) return 0.0;
  if (s >= 0.75 && s <= 1.5) return 1.0;
  if (s < 0.75) return step((s - 0.5) / 0.25);
  return step((2.0 - s) / 0.5);
}

double lp_block(double s) { return zeta0(0.5 * s) - zeta0(s); }

double sequence_bump(double u) { return bump((u - 0.375) / 0.125); }

}  // namespace qrlab::smooth
