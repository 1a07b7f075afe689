#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "nctgabor/phase.hpp"

namespace nct {

// Circle of circumference `period` sampled at x_j = -period/2 + j*step, times q channels.
struct GridSpec {
  double period = 16.0;
  int samples = 512;
  int channels = 1;

  static GridSpec make(double period, int samples, int channels);
  void validate() const;
  double step() const { return period / samples; }
  double x(int j) const { return -0.5 * period + j * step(); }
  // Angular-free frequency of FFT bin m (Nyquist bin reported as negative).
  double frequency(int m) const;
  bool operator==(const GridSpec& o) const {
    return period == o.period && samples == o.samples && channels == o.channels;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

class GridSignal {
 public:
  GridSignal() = default;
  explicit GridSignal(const GridSpec& spec);
  GridSignal(const GridSpec& spec, std::vector<cplx> values);

  const GridSpec& spec() const { return spec_; }
  int channels() const { return spec_.channels; }
  int samples() const { return spec_.samples; }

  cplx& at(int k, int j) { return values_[static_cast<size_t>(k) * spec_.samples + j]; }
  const cplx& at(int k, int j) const { return values_[static_cast<size_t>(k) * spec_.samples + j]; }
  cplx* channel(int k) { return values_.data() + static_cast<size_t>(k) * spec_.samples; }
  const cplx* channel(int k) const { return values_.data() + static_cast<size_t>(k) * spec_.samples; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  GridSignal& operator+=(const GridSignal& o);
  GridSignal& operator-=(const GridSignal& o);
  GridSignal& operator*=(cplx s);
  void add_scaled(cplx s, const GridSignal& o);

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

GridSignal operator+(GridSignal a, const GridSignal& b);
GridSignal operator-(GridSignal a, const GridSignal& b);
GridSignal operator*(cplx s, GridSignal a);

void require_same_spec(const GridSpec& a, const GridSpec& b);

enum class ShiftOrder {
  TimeFrequency,  // pi(nu) = E_{gamma,c} T_{lambda,l}
  FrequencyTime,  // pi°(nu) = T_{lambda,l} E_{gamma,c}
};

// T_{lambda,l} f(x,k) = f(x - lambda, k - l), band-limited (Fourier) interpolation.
GridSignal translate(const GridSignal& f, double lambda, int l);
// E_{gamma,c} f(x,k) = exp(2 pi i (x gamma + k c / q)) f(x,k)
GridSignal modulate(const GridSignal& f, double gamma, int c);
GridSignal tf_shift(const GridSignal& f, const PhasePoint& nu, ShiftOrder order);

// Generalized Gaussian c_k exp(-pi x^2 - i lam x). Throws PeriodTooSmall if the tail is visible.
GridSignal gaussian(const GridSpec& spec, const std::vector<cplx>& weights, cplx lam = 0.0);
GridSignal gaussian(const GridSpec& spec, cplx lam = 0.0);
// L2-normalized Hermite function of order n in every channel, times the channel weights.
GridSignal hermite(const GridSpec& spec, int n, const std::vector<cplx>& weights);

cplx inner(const GridSignal& f, const GridSignal& g);
double norm(const GridSignal& f);

GridSignal apply_D(const GridSignal& f);
GridSignal apply_M(const GridSignal& f);
// Fraction of spectral energy in the top eighth of the band.
double spectral_tail(const GridSignal& f);
// Fraction of L2 mass outside [-period/4, period/4].
double outer_mass(const GridSignal& f);

// Continuous Fourier transform sampled on the dual grid xi_k = (k - N/2)/period.
// Returns a signal whose GridSpec has period N/period.
GridSignal fourier(const GridSignal& f);

// (f+)(x,k) = conj(f(-x,-k))
GridSignal involution_dagger(const GridSignal& f);

void write_signal(std::ostream& os, const GridSignal& f);
GridSignal read_signal(std::istream& is);
void save_signal(const std::string& path, const GridSignal& f);
GridSignal load_signal(const std::string& path);

}  // namespace nct
