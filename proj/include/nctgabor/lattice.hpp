#pragma once

#include <string>
#include <vector>

#include "nctgabor/phase.hpp"

namespace nct {

enum class LatticeKind { TimeFrequency, Adjoint };

const char* to_string(LatticeKind kind);

// Lattice and torus parameters. r and s live in {0,...,q-1}; q = 1 forces r = s = 0.
struct TorusParams {
  double alpha = 0.5;
  double beta = 0.5;
  int r = 0;
  int s = 0;
  int q = 1;

  void validate() const;
  int r_inverse() const;
  int s_inverse() const;
  double theta() const;          // alpha*beta + r*s/q
  double theta_adjoint() const;  // r°s°/q - 1/(alpha*beta*q^2)
  double density() const;        // |alpha*beta|*q
  double area() const { return alpha * beta < 0 ? -alpha * beta : alpha * beta; }
  std::string describe() const;
};

// r° with r*r° = 1 mod q; 0 for q = 1.
int mod_inverse(int r, int q);

// Generators of one of the two lattices: n1 walks time, n2 walks frequency.
struct LatticeBasis {
  double time_step = 1.0;
  int time_slope = 0;
  double freq_step = 1.0;
  int freq_slope = 0;
  int q = 1;

  PhasePoint point(long n1, long n2) const;
};

LatticeBasis lattice_basis(const TorusParams& p, LatticeKind kind);

struct LatticePoint {
  long n1 = 0;
  long n2 = 0;
  PhasePoint nu;
  LatticeKind kind = LatticeKind::TimeFrequency;
};

struct AdjointDescriptor {
  LatticeBasis basis;
  double covolume_time = 1.0;          // mu(Lambda) = q|alpha|
  double covolume_freq = 1.0;          // mu(Gamma) = |beta|
  double covolume_time_adjoint = 1.0;  // mu(Lambda-perp) = 1/(q|alpha|)
  double covolume_freq_adjoint = 1.0;  // mu(Gamma-perp) = 1/|beta|
};

AdjointDescriptor annihilator_params(const TorusParams& p);

// Index rectangle [n1_lo, n1_hi] x [n2_lo, n2_hi].
struct IndexBox {
  long n1_lo = 0;
  long n1_hi = -1;
  long n2_lo = 0;
  long n2_hi = -1;

  bool empty() const { return n1_hi < n1_lo || n2_hi < n2_lo; }
  long width1() const { return empty() ? 0 : n1_hi - n1_lo + 1; }
  long width2() const { return empty() ? 0 : n2_hi - n2_lo + 1; }
  bool contains(long n1, long n2) const {
    return n1 >= n1_lo && n1 <= n1_hi && n2 >= n2_lo && n2 <= n2_hi;
  }
};

// Indices with max(|lambda|, |gamma|) <= radius.
IndexBox index_box(const LatticeBasis& basis, double radius);

std::vector<LatticePoint> enumerate_lattice(const TorusParams& p, LatticeKind kind, double radius);

struct Admissibility {
  bool admissible = false;
  bool integral = false;
  bool subcritical = false;
  double integrality_value = 0.0;  // 1/(alpha beta q^2) + r°s°/q
  double density = 0.0;            // |alpha beta| q
};

Admissibility soliton_admissible(const TorusParams& p);

}  // namespace nct
