#pragma once

#include <complex>

namespace nct {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Mathematical mod: result in {0,...,q-1} for any sign of v.
inline int wrap(long long v, int q) {
  long long m = v % q;
  return static_cast<int>(m < 0 ? m + q : m);
}

// exp(2*pi*i*turns), with the integer part of turns removed first.
cplx unit_phase(double turns);

// A point (lambda, l, gamma, c) of R x Z_q x R^ x Z^_q.
struct PhasePoint {
  double lambda = 0.0;
  int l = 0;
  double gamma = 0.0;
  int c = 0;
};

PhasePoint add(const PhasePoint& a, const PhasePoint& b, int q);
PhasePoint negate(const PhasePoint& a, int q);

// exp(-2 pi i (lambda1*gamma2 + l1*c2/q))
cplx cocycle(const PhasePoint& nu1, const PhasePoint& nu2, int q);

}  // namespace nct
