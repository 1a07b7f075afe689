#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nctgabor/algebra.hpp"

namespace nct {

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  double section_radius = 0.0;
  int probes = 0;
  int iterations = 0;
};

struct DualDiagnostics {
  int iterations = 0;
  double algebraic_residual = 0.0;  // ||y ♮ b - delta|| on the section
  double operator_residual = 0.0;   // ||S h - g|| / ||g|| with the truncated frame operator
};

// Window, lattice and truncation radius, plus write-once caches.
class FrameSystem {
 public:
  FrameSystem(GridSignal window, const TorusParams& params, double radius);

  const GridSignal& window() const { return window_; }
  const TorusParams& params() const { return params_; }
  double radius() const { return radius_; }

  const std::optional<GridSignal>& dual() const { return dual_; }
  const std::optional<GridSignal>& tight() const { return tight_; }
  const std::optional<FrameBounds>& bounds() const { return bounds_; }
  // Coefficients y of the canonical dual h = g·y; y is the inverse of inner_right(g,g).
  const std::optional<LatticeSeq>& dual_coefficients() const { return dual_coeffs_; }
  const DualDiagnostics& dual_diagnostics() const { return dual_diag_; }

  void set_dual(GridSignal h, LatticeSeq coeffs, const DualDiagnostics& diag);
  void set_tight(GridSignal t);
  void set_bounds(const FrameBounds& b);

 private:
  GridSignal window_;
  TorusParams params_;
  double radius_;
  std::optional<GridSignal> dual_;
  std::optional<GridSignal> tight_;
  std::optional<FrameBounds> bounds_;
  std::optional<LatticeSeq> dual_coeffs_;
  DualDiagnostics dual_diag_;
};

// The map y -> y ♮ b restricted to the adjoint index box of a given radius, as a dense
// Hermitian matrix. Its spectrum on the full lattice coincides with that of S_g.
class AdjointSection {
 public:
  AdjointSection(const LatticeSeq& b, double section_radius);

  const Eigen::MatrixXcd& matrix() const { return k_; }
  int size() const { return static_cast<int>(index_.size()); }
  int origin() const { return origin_; }
  LatticeSeq to_seq(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd from_seq(const LatticeSeq& a) const;

 private:
  TorusParams params_;
  double radius_;
  std::vector<std::pair<long, long>> index_;
  int origin_ = 0;
  Eigen::MatrixXcd k_;
};

// inner_right(g, g) on the radius needed by sections of the given radius.
LatticeSeq adjoint_gram(const GridSignal& g, const TorusParams& p, double section_radius);

struct CgResult {
  Eigen::VectorXcd x;
  int iterations = 0;
  double residual = 0.0;
};

// Conjugate gradients for a Hermitian positive matrix; throws CgStagnation.
CgResult conjugate_gradient(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& rhs, double tol, int max_iter = 500);

GridSignal frame_operator(const FrameSystem& sys, const GridSignal& f);

// Extreme eigenvalues of the adjoint section: restarted block Krylov from `probes` random starts,
// inverse iteration through a Cholesky factor for the lower end (0 when the factor fails).
FrameBounds frame_bounds(FrameSystem& sys, int probes = 16, std::uint64_t seed = 1);
FrameBounds section_bounds(const AdjointSection& section, int probes, std::uint64_t seed);

struct FrameVerdict {
  double lower = 0.0;          // at the base radius
  double lower_doubled = 0.0;  // at twice the base radius
  double upper = 0.0;
  bool is_frame = false;
};

// Frame test by trend: a lower bound that keeps falling when the section doubles means no frame.
FrameVerdict frame_verdict(const GridSignal& g, const TorusParams& p, double radius, std::uint64_t seed = 1);

GridSignal canonical_dual(FrameSystem& sys, double tol = 1e-12);
GridSignal canonical_tight(FrameSystem& sys, double tol = 1e-12);
// S^{-1} f = f · inner_right(g,g)^{-1}; requires the dual to have been computed.
GridSignal inverse_frame_operator(const FrameSystem& sys, const GridSignal& f);

double wexler_raz_residual(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius);
double reconstruction_residual(const GridSignal& f, const GridSignal& g, const GridSignal& h, const TorusParams& p,
                               double radius);

struct DualPair {
  LatticeSeq projection;
  double wexler_raz = 0.0;
  double idempotence = 0.0;
  double self_adjointness = 0.0;
};

// a = inner_left(g, h) with duality and idempotence checks; self-adjointness checked when canonical.
DualPair project_dual_pair(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius,
                           bool canonical = true, double tol = 1e-6);

struct LaurentSymbol {
  int grid = 0;
  std::vector<double> values;  // real part of F(i/grid, j/grid), row-major in (i, j)
  double max_imag = 0.0;
  double min_abs = 0.0;
  double max_abs = 0.0;
  bool riesz = false;
};

LaurentSymbol laurent_symbol(const GridSignal& g, const TorusParams& p, int grid = 64, double radius = 6.0);
// F sampled from arbitrary coefficients G(n1, n2) (time index n1, frequency index n2).
LaurentSymbol symbol_from_coefficients(const LatticeSeq& coeffs, int grid);

GridSignal lift_scalar_window(const GridSignal& scalar, const TorusParams& p, double radius = 6.0);

// Relative least-squares residual of f against span{pi°(nu°) g : |nu°| <= radius}.
double adjoint_span_residual(const GridSignal& f, const GridSignal& g, const TorusParams& p, double radius);

// Random Gaussian-class test signal of unit norm: a few shifted, modulated Gaussians.
GridSignal random_probe(const GridSpec& spec, std::mt19937_64& rng, double spread = 2.5);

}  // namespace nct
