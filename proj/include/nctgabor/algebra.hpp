#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nctgabor/lattice.hpp"
#include "nctgabor/signal.hpp"

namespace nct {

inline constexpr double kPruneThreshold = 1e-14;

// Finitely supported sequence on a lattice, stored densely over an index rectangle.
class LatticeSeq {
 public:
  LatticeSeq() = default;
  LatticeSeq(const TorusParams& params, LatticeKind kind, double radius);
  LatticeSeq(const TorusParams& params, LatticeKind kind, double radius, const IndexBox& box);

  static LatticeSeq delta(const TorusParams& params, LatticeKind kind, double radius, long n1 = 0, long n2 = 0);

  const TorusParams& params() const { return params_; }
  LatticeKind kind() const { return kind_; }
  double radius() const { return radius_; }
  const LatticeBasis& basis() const { return basis_; }
  const IndexBox& box() const { return box_; }
  PhasePoint point(long n1, long n2) const { return basis_.point(n1, n2); }

  cplx operator()(long n1, long n2) const;
  void set(long n1, long n2, cplx v);
  void add(long n1, long n2, cplx v);

  // Visits stored entries in lexicographic (n1, n2) order, zeros skipped.
  template <class F>
  void for_each(F&& fn) const {
    for (long n1 = box_.n1_lo; n1 <= box_.n1_hi; ++n1)
      for (long n2 = box_.n2_lo; n2 <= box_.n2_hi; ++n2) {
        const cplx& v = data_[offset(n1, n2)];
        if (v != cplx(0.0)) fn(n1, n2, v);
      }
  }

  size_t nonzeros() const;
  double l1() const;
  double weighted_l1(double s) const;
  double max_abs() const;

  // Entries with max(|lambda|, |gamma|) <= radius; the radius tag becomes `radius`.
  LatticeSeq restricted(double radius) const;
  // Zero out entries below threshold and shrink the stored rectangle.
  void prune(double threshold = kPruneThreshold);

  LatticeSeq& operator+=(const LatticeSeq& o);
  LatticeSeq& operator-=(const LatticeSeq& o);
  LatticeSeq& operator*=(cplx s);

  bool same_lattice(const LatticeSeq& o) const;

 private:
  size_t offset(long n1, long n2) const {
    return static_cast<size_t>((n1 - box_.n1_lo) * box_.width2() + (n2 - box_.n2_lo));
  }
  void grow_to(const IndexBox& box);

  TorusParams params_;
  LatticeKind kind_ = LatticeKind::TimeFrequency;
  double radius_ = 0.0;
  LatticeBasis basis_;
  IndexBox box_;
  std::vector<cplx> data_;
};

LatticeSeq operator+(LatticeSeq a, const LatticeSeq& b);
LatticeSeq operator-(LatticeSeq a, const LatticeSeq& b);
LatticeSeq operator*(cplx s, LatticeSeq a);

void require_same_lattice(const LatticeSeq& a, const LatticeSeq& b);

// cocycle between lattice points given by indices, honoring the lattice kind
// (the adjoint product carries the conjugate cocycle).
cplx lattice_cocycle(const LatticeSeq& like, long a1, long a2, long b1, long b2);

LatticeSeq twisted_conv(const LatticeSeq& a, const LatticeSeq& b);
LatticeSeq twisted_star(const LatticeSeq& a);
cplx trace_l(const LatticeSeq& a);
cplx trace_r(const LatticeSeq& b);
// tr(a ♮ b) without forming the product.
cplx trace_of_product(const LatticeSeq& a, const LatticeSeq& b);

GridSignal act_left(const LatticeSeq& a, const GridSignal& f);
GridSignal act_right(const GridSignal& f, const LatticeSeq& b);

LatticeSeq inner_left(const GridSignal& f, const GridSignal& g, const TorusParams& p, double radius);
LatticeSeq inner_right(const GridSignal& f, const GridSignal& g, const TorusParams& p, double radius);

void write_seq(std::ostream& os, const LatticeSeq& a);
LatticeSeq read_seq(std::istream& is);

}  // namespace nct
