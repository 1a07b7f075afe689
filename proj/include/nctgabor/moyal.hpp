#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nctgabor/signal.hpp"

namespace nct {

// Full phase-space quadrature nodes: every grid shift x_m (stride 1) times the
// frequencies k/L with -M/2 <= k < M/2, uniform weight dx/L (trapezoid on the circle).
struct PhaseGrid {
  GridSpec spec;
  int freq_samples = 0;
  std::vector<double> weights;  // one per frequency node; all equal

  static PhaseGrid make(const GridSpec& spec, int freq_samples);
  int shifts() const { return spec.samples; }
  double shift(int m) const;           // signed x_m
  int bin(int i) const { return i - freq_samples / 2; }
  double frequency(int i) const { return bin(i) / spec.period; }
};

// Highest occupied FFT bin over all channels (relative power threshold).
int occupied_bandwidth(const GridSignal& f, double threshold = 1e-16);
// Frequency extent of the product f * conj(T g): twice the summed bandwidths, capped at N.
PhaseGrid phase_grid_for(const GridSignal& f, const GridSignal& g);

// V(m, l, c, i) = <f, E_{w_i,c} T_{x_m,l} g>; calls fn(m, l, c, row) with row of length M.
// Shifts are split over workers; fn must be safe to call concurrently for different m.
using StftVisitor = std::function<void(int m, int l, int c, const cplx* row)>;
void stft_visit(const GridSignal& f, const GridSignal& g, const PhaseGrid& grid, const StftVisitor& fn,
                int workers = 1);

struct MoyalCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
};
// sum_{l,c} int |<f, E T g>|^2 against q ||g||^2 ||f||^2
MoyalCheck moyal_check(const GridSignal& f, const GridSignal& g, int workers = 1);

// (pi / ||g||^4) sum_{l,c} int (x^2 + w^2) |V_g g|^2
double continuous_energy(const GridSignal& g, int workers = 1);

// c1 of p = V_g g / (q ||g||^2) by the continuous twisted product on a step x step
// node set of half-width `extent`. Both must be commensurate with the grid.
cplx continuous_chern(const GridSignal& g, double step = 0.25, double extent = 5.0);

struct EigenFit {
  cplx lambda = 0.0;
  double residual = 0.0;
};
// Fit (nabla_1 + sign i nabla_2) g = lambda g in least squares.
EigenFit eigen_residual(const GridSignal& g, int sign);

struct TraceCompatibility {
  cplx left = 0.0;   // tr(<f,g>) read off the phase-space origin of V_g f
  cplx right = 0.0;  // q^{-1} * q <f,g>
  double residual = 0.0;
};
TraceCompatibility trace_compatibility(const GridSignal& f, const GridSignal& g);

// Window families used for minimizer screening.
enum class CorpusFamily { Gaussian, Dilated, Hermite, Bump, Random, Perturbed };

struct CorpusEntry {
  std::string name;
  CorpusFamily family = CorpusFamily::Gaussian;
  int q = 1;
  cplx lam = 0.0;              // Gaussian phase parameter
  std::vector<cplx> weights;   // per channel; empty means ones
  double width = 1.0;          // Dilated: Gaussian scale; Bump: B-spline half-width
  int order = 1;               // Hermite order
  double eps = 0.05;           // Perturbed size
  unsigned long long seed = 1; // Random
  bool generalized_gaussian() const { return family == CorpusFamily::Gaussian; }
};

// One "window = <family> key=value ..." line per entry.
std::vector<CorpusEntry> parse_corpus(std::istream& is);
std::vector<CorpusEntry> load_corpus(const std::string& path);
GridSignal corpus_window(const CorpusEntry& e, double period, int samples);
const char* to_string(CorpusFamily f);

}  // namespace nct
