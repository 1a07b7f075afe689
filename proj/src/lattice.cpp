#include "nctgabor/lattice.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "nctgabor/error.hpp"

namespace nct {

const char* to_string(LatticeKind kind) {
  return kind == LatticeKind::TimeFrequency ? "time-frequency" : "adjoint";
}

void TorusParams::validate() const {
  if (q < 1) fail(ErrorCode::InvalidArgument, "q must be positive");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha == 0.0 || beta == 0.0)
    fail(ErrorCode::InvalidArgument, "alpha and beta must be finite and nonzero");
  if (q == 1) {
    if (r != 0 || s != 0) fail(ErrorCode::InvalidArgument, "q = 1 requires r = s = 0");
    return;
  }
  if (r < 0 || r >= q || s < 0 || s >= q)
    fail(ErrorCode::InvalidArgument, "r and s must lie in {0,...,q-1}");
  if (std::gcd(r, q) != 1) fail(ErrorCode::NotCoprime, "r is not coprime to q");
  if (std::gcd(s, q) != 1) fail(ErrorCode::NotCoprime, "s is not coprime to q");
}

int TorusParams::r_inverse() const { return mod_inverse(r, q); }
int TorusParams::s_inverse() const { return mod_inverse(s, q); }

double TorusParams::theta() const {
  return alpha * beta + static_cast<double>(r) * s / q;
}

double TorusParams::theta_adjoint() const {
  return static_cast<double>(r_inverse()) * s_inverse() / q - 1.0 / (alpha * beta * q * q);
}

double TorusParams::density() const { return area() * q; }

std::string TorusParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha << " beta=" << beta << " r=" << r << " s=" << s << " q=" << q;
  return os.str();
}

int mod_inverse(int r, int q) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "modulus must be positive");
  if (q == 1) {
    if (r != 0) fail(ErrorCode::InvalidArgument, "q = 1 requires r = 0");
    return 0;
  }
  if (std::gcd(wrap(r, q), q) != 1) fail(ErrorCode::NotCoprime, "not coprime");
  // extended Euclid on (r mod q, q)
  long long a = wrap(r, q), b = q, x0 = 1, x1 = 0;
  while (b != 0) {
    long long t = a / b;
    a -= t * b;
    std::swap(a, b);
    x0 -= t * x1;
    std::swap(x0, x1);
  }
  return wrap(x0, q);
}

PhasePoint LatticeBasis::point(long n1, long n2) const {
  PhasePoint nu;
  nu.lambda = time_step * static_cast<double>(n1);
  nu.l = wrap(static_cast<long long>(time_slope) * n1, q);
  nu.gamma = freq_step * static_cast<double>(n2);
  nu.c = wrap(static_cast<long long>(freq_slope) * n2, q);
  return nu;
}

LatticeBasis lattice_basis(const TorusParams& p, LatticeKind kind) {
  p.validate();
  LatticeBasis b;
  b.q = p.q;
  if (kind == LatticeKind::TimeFrequency) {
    b.time_step = p.alpha;
    b.time_slope = p.r;
    b.freq_step = p.beta;
    b.freq_slope = p.s;
  } else {
    b.time_step = 1.0 / (p.beta * p.q);
    b.time_slope = wrap(-static_cast<long long>(p.s_inverse()), p.q);
    b.freq_step = 1.0 / (p.alpha * p.q);
    b.freq_slope = wrap(-static_cast<long long>(p.r_inverse()), p.q);
  }
  return b;
}

AdjointDescriptor annihilator_params(const TorusParams& p) {
  AdjointDescriptor d;
  d.basis = lattice_basis(p, LatticeKind::Adjoint);
  d.covolume_time = p.q * std::abs(p.alpha);
  d.covolume_freq = std::abs(p.beta);
  d.covolume_time_adjoint = 1.0 / d.covolume_time;
  d.covolume_freq_adjoint = 1.0 / d.covolume_freq;
  return d;
}

IndexBox index_box(const LatticeBasis& basis, double radius) {
  if (!(radius >= 0.0)) fail(ErrorCode::InvalidArgument, "radius must be nonnegative");
  long m1 = static_cast<long>(std::floor(radius / std::abs(basis.time_step) + 1e-9));
  long m2 = static_cast<long>(std::floor(radius / std::abs(basis.freq_step) + 1e-9));
  return IndexBox{-m1, m1, -m2, m2};
}

std::vector<LatticePoint> enumerate_lattice(const TorusParams& p, LatticeKind kind, double radius) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "radius must be positive");
  LatticeBasis basis = lattice_basis(p, kind);
  IndexBox box = index_box(basis, radius);
  std::vector<LatticePoint> out;
  out.reserve(static_cast<size_t>(box.width1() * box.width2()));
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1)
    for (long n2 = box.n2_lo; n2 <= box.n2_hi; ++n2)
      out.push_back(LatticePoint{n1, n2, basis.point(n1, n2), kind});
  return out;
}

Admissibility soliton_admissible(const TorusParams& p) {
  p.validate();
  Admissibility a;
  a.integrality_value = 1.0 / (p.alpha * p.beta * p.q * p.q) +
                        static_cast<double>(p.r_inverse()) * p.s_inverse() / p.q;
  a.integral = std::abs(a.integrality_value - std::round(a.integrality_value)) < 1e-9;
  a.density = p.density();
  a.subcritical = a.density < 1.0;
  a.admissible = a.integral && a.subcritical;
  return a;
}

}  // namespace nct
