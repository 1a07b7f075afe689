#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "nctgabor/frame.hpp"
#include "nctgabor/tolerance.hpp"

namespace nct {

// j = 1: multiply entries by 2 pi i lambda; j = 2: by 2 pi i gamma.
LatticeSeq derive(const LatticeSeq& a, int j);

// j = 1: 2 pi i M; j = 2: D. Channels untouched.
GridSignal covariant(const GridSignal& f, int j);

// (2 pi i |alpha beta|)^{-1} tr(p [d1p d2p - d2p d1p]); throws NotAProjection.
cplx chern_trace(const LatticeSeq& p, double tol = 1e-6);
// Double lattice sum over samples of V_h g; independent of chern_trace.
cplx chern_sum(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius);

// (4 pi |alpha beta|)^{-1} tr((d1p)^2 + (d2p)^2); throws NotAProjection.
double energy(const LatticeSeq& p, double tol = 1e-6);
// (pi/|alpha beta|) sum (lambda^2 + gamma^2) |<g, pi(nu) h>|^2
double energy_from_window(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius);

struct SelfDuality {
  double plus = 0.0;   // ||(d1p + i d2p) p||_1
  double minus = 0.0;  // ||(d1p - i d2p) p||_1
};
SelfDuality sd_residuals(const LatticeSeq& p);

enum class WindowKind { Gaussian, LiftedGaussian, Hermite, Perturbed, File };

struct WindowSpec {
  WindowKind kind = WindowKind::Gaussian;
  std::vector<cplx> weights;  // per channel; empty means all ones
  cplx lam = 0.0;             // generalized Gaussian parameter
  int order = 1;              // Hermite order (also the perturbation order)
  double eps = 0.05;          // perturbation size relative to the base norm
  std::string path;           // File windows
  std::string describe() const;
};

GridSignal build_window(const WindowSpec& w, const GridSpec& grid, const TorusParams& p, double radius = 6.0);

struct ChernReport {
  TorusParams params;
  std::string window;
  double radius = 0.0;
  double period = 0.0;
  int samples = 0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  cplx c1 = 0.0;
  cplx c1_sum = 0.0;
  long c1_rounded = 0;
  double energy = 0.0;
  double energy_window = 0.0;
  double gap = 0.0;
  double sd_plus = 0.0;
  double sd_minus = 0.0;
  double w_residual_plus = 0.0;
  double w_residual_minus = 0.0;
  double wexler_raz = 0.0;
  double idempotence = 0.0;
  double self_adjointness = 0.0;
  double seconds = 0.0;
  double w_residual() const { return w_residual_plus < w_residual_minus ? w_residual_plus : w_residual_minus; }
};

struct ExperimentOptions {
  double radius = 6.0;
  Tolerances tol;
  std::uint64_t seed = 1;
  int probes = 16;
};

// window -> bounds -> canonical dual -> projection -> c1 (both ways) -> energy -> residuals
ChernReport soliton_experiment(const TorusParams& p, const WindowSpec& w, const GridSpec& grid,
                               const ExperimentOptions& opt = {});

}  // namespace nct
