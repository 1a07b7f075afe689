#include "nctgabor/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "nctgabor/error.hpp"

namespace nct {

cplx unit_phase(double turns) {
  double t = turns - std::round(turns);
  return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

PhasePoint add(const PhasePoint& a, const PhasePoint& b, int q) {
  return PhasePoint{a.lambda + b.lambda, wrap(a.l + b.l, q), a.gamma + b.gamma, wrap(a.c + b.c, q)};
}

PhasePoint negate(const PhasePoint& a, int q) {
  return PhasePoint{-a.lambda, wrap(-a.l, q), -a.gamma, wrap(-a.c, q)};
}

cplx cocycle(const PhasePoint& nu1, const PhasePoint& nu2, int q) {
  double lg = nu1.lambda * nu2.gamma;
  double channel = static_cast<double>(wrap(static_cast<long long>(nu1.l) * nu2.c, q)) / q;
  return unit_phase(-(lg - std::round(lg)) - channel);
}

GridSpec GridSpec::make(double period, int samples, int channels) {
  GridSpec s{period, samples, channels};
  s.validate();
  return s;
}

void GridSpec::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) fail(ErrorCode::InvalidArgument, "period must be positive");
  if (samples < 2 || samples % 2 != 0) fail(ErrorCode::InvalidArgument, "samples must be even and >= 2");
  if (channels < 1) fail(ErrorCode::InvalidArgument, "channels must be positive");
}

double GridSpec::frequency(int m) const {
  int k = m < samples / 2 ? m : m - samples;
  return k / period;
}

GridSignal::GridSignal(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  values_.assign(static_cast<size_t>(spec.samples) * spec.channels, cplx(0.0));
}

GridSignal::GridSignal(const GridSpec& spec, std::vector<cplx> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != static_cast<size_t>(spec.samples) * spec.channels)
    fail(ErrorCode::SpecMismatch, "value count does not match grid spec");
}

void require_same_spec(const GridSpec& a, const GridSpec& b) {
  if (a != b) fail(ErrorCode::SpecMismatch, "signals live on different grids");
}

GridSignal& GridSignal::operator+=(const GridSignal& o) {
  require_same_spec(spec_, o.spec_);
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridSignal& GridSignal::operator-=(const GridSignal& o) {
  require_same_spec(spec_, o.spec_);
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridSignal& GridSignal::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

void GridSignal::add_scaled(cplx s, const GridSignal& o) {
  require_same_spec(spec_, o.spec_);
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
}

GridSignal operator+(GridSignal a, const GridSignal& b) { return a += b; }
GridSignal operator-(GridSignal a, const GridSignal& b) { return a -= b; }
GridSignal operator*(cplx s, GridSignal a) { return a *= s; }

namespace {

// Multiply the spectrum of every channel by mult(frequency); Nyquist bin dropped.
template <class Mult>
GridSignal spectral_multiply(const GridSignal& f, Mult mult) {
  const GridSpec& spec = f.spec();
  const int n = spec.samples;
  GridSignal out(spec);
  std::vector<cplx> buf(n);
  for (int k = 0; k < spec.channels; ++k) {
    fft::forward(n, f.channel(k), buf.data());
    for (int m = 0; m < n; ++m) buf[m] *= m == n / 2 ? cplx(0.0) : mult(spec.frequency(m)) / double(n);
    fft::backward(n, buf.data(), out.channel(k));
  }
  return out;
}

GridSignal roll_channels(const GridSignal& f, int l) {
  const int q = f.channels();
  GridSignal out(f.spec());
  for (int k = 0; k < q; ++k) std::copy_n(f.channel(wrap(k - l, q)), f.samples(), out.channel(k));
  return out;
}

}  // namespace

GridSignal translate(const GridSignal& f, double lambda, int l) {
  if (lambda == 0.0) return roll_channels(f, l);
  GridSignal shifted = spectral_multiply(f, [lambda](double xi) { return unit_phase(-xi * lambda); });
  return roll_channels(shifted, l);
}

GridSignal modulate(const GridSignal& f, double gamma, int c) {
  const GridSpec& spec = f.spec();
  const int q = spec.channels;
  GridSignal out(spec);
  std::vector<cplx> row(spec.samples);
  for (int j = 0; j < spec.samples; ++j) row[j] = unit_phase(spec.x(j) * gamma);
  for (int k = 0; k < q; ++k) {
    cplx ch = unit_phase(static_cast<double>(wrap(static_cast<long long>(k) * c, q)) / q);
    for (int j = 0; j < spec.samples; ++j) out.at(k, j) = ch * row[j] * f.at(k, j);
  }
  return out;
}

GridSignal tf_shift(const GridSignal& f, const PhasePoint& nu, ShiftOrder order) {
  if (order == ShiftOrder::TimeFrequency) return modulate(translate(f, nu.lambda, nu.l), nu.gamma, nu.c);
  return translate(modulate(f, nu.gamma, nu.c), nu.lambda, nu.l);
}

GridSignal gaussian(const GridSpec& spec, const std::vector<cplx>& weights, cplx lam) {
  spec.validate();
  if (static_cast<int>(weights.size()) != spec.channels)
    fail(ErrorCode::InvalidArgument, "one weight per channel required");
  // |exp(-pi x^2 - i lam x)| = exp(-pi x^2 + Im(lam) x)
  auto modulus = [&](double x) { return std::exp(-kPi * x * x + lam.imag() * x); };
  double peak_x = lam.imag() / (kTwoPi);
  double edge = std::max(modulus(-0.5 * spec.period), modulus(0.5 * spec.period));
  if (edge >= 1e-12 * modulus(peak_x) || std::abs(peak_x) > 0.25 * spec.period)
    fail(ErrorCode::PeriodTooSmall, "Gaussian tail does not vanish at the period boundary");
  GridSignal g(spec);
  for (int j = 0; j < spec.samples; ++j) {
    double x = spec.x(j);
    cplx v = std::exp(cplx(-kPi * x * x, 0.0) - cplx(0.0, 1.0) * lam * x);
    for (int k = 0; k < spec.channels; ++k) g.at(k, j) = weights[k] * v;
  }
  return g;
}

GridSignal gaussian(const GridSpec& spec, cplx lam) {
  return gaussian(spec, std::vector<cplx>(spec.channels, cplx(1.0)), lam);
}

GridSignal hermite(const GridSpec& spec, int n, const std::vector<cplx>& weights) {
  spec.validate();
  if (n < 0) fail(ErrorCode::InvalidArgument, "Hermite order must be nonnegative");
  if (static_cast<int>(weights.size()) != spec.channels)
    fail(ErrorCode::InvalidArgument, "one weight per channel required");
  GridSignal h(spec);
  const double scale = std::sqrt(kTwoPi);
  for (int j = 0; j < spec.samples; ++j) {
    double x = spec.x(j);
    double u = scale * x;
    double prev = 0.0;
    double cur = std::pow(2.0, 0.25) * std::exp(-kPi * x * x);
    for (int m = 0; m < n; ++m) {
      double next = std::sqrt(2.0 / (m + 1)) * u * cur - std::sqrt(double(m) / (m + 1)) * prev;
      prev = cur;
      cur = next;
    }
    for (int k = 0; k < spec.channels; ++k) h.at(k, j) = weights[k] * cur;
  }
  return h;
}

cplx inner(const GridSignal& f, const GridSignal& g) {
  require_same_spec(f.spec(), g.spec());
  cplx sum = 0.0;
  const auto& a = f.values();
  const auto& b = g.values();
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * std::conj(b[i]);
  return sum * f.spec().step();
}

double norm(const GridSignal& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return std::sqrt(sum * f.spec().step());
}

GridSignal apply_D(const GridSignal& f) {
  return spectral_multiply(f, [](double xi) { return cplx(0.0, kTwoPi * xi); });
}

GridSignal apply_M(const GridSignal& f) {
  GridSignal out(f.spec());
  for (int k = 0; k < f.channels(); ++k)
    for (int j = 0; j < f.samples(); ++j) out.at(k, j) = f.spec().x(j) * f.at(k, j);
  return out;
}

double spectral_tail(const GridSignal& f) {
  const int n = f.samples();
  std::vector<cplx> buf(n);
  double total = 0.0, tail = 0.0;
  for (int k = 0; k < f.channels(); ++k) {
    fft::forward(n, f.channel(k), buf.data());
    for (int m = 0; m < n; ++m) {
      double e = std::norm(buf[m]);
      total += e;
      int idx = m < n / 2 ? m : n - m;
      if (idx > 3 * n / 8) tail += e;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

double outer_mass(const GridSignal& f) {
  double total = 0.0, outer = 0.0;
  for (int k = 0; k < f.channels(); ++k)
    for (int j = 0; j < f.samples(); ++j) {
      double e = std::norm(f.at(k, j));
      total += e;
      if (std::abs(f.spec().x(j)) > 0.25 * f.spec().period) outer += e;
    }
  return total > 0.0 ? outer / total : 0.0;
}

GridSignal fourier(const GridSignal& f) {
  const GridSpec& spec = f.spec();
  const int n = spec.samples;
  GridSpec dual{n / spec.period, n, spec.channels};
  GridSignal out(dual);
  std::vector<cplx> buf(n), res(n);
  for (int k = 0; k < spec.channels; ++k) {
    for (int j = 0; j < n; ++j) buf[j] = (j % 2 == 0 ? 1.0 : -1.0) * f.at(k, j);
    fft::forward(n, buf.data(), res.data());
    for (int m = 0; m < n; ++m) {
      double sign = ((m - n / 2) % 2 == 0) ? 1.0 : -1.0;
      out.at(k, m) = spec.step() * sign * res[m];
    }
  }
  return out;
}

GridSignal involution_dagger(const GridSignal& f) {
  const int n = f.samples();
  const int q = f.channels();
  GridSignal out(f.spec());
  // x_j = -L/2 + j dx reflects to x_{N-j}; j = 0 is its own mirror on the circle.
  for (int k = 0; k < q; ++k)
    for (int j = 0; j < n; ++j) out.at(k, j) = std::conj(f.at(wrap(-k, q), (n - j) % n));
  return out;
}

void write_signal(std::ostream& os, const GridSignal& f) {
  const GridSpec& s = f.spec();
  os << std::setprecision(17);
  os << "# L N q\n" << s.period << ' ' << s.samples << ' ' << s.channels << '\n';
  os << "# k j re im\n";
  for (int k = 0; k < s.channels; ++k)
    for (int j = 0; j < s.samples; ++j)
      os << k << ' ' << j << ' ' << f.at(k, j).real() << ' ' << f.at(k, j).imag() << '\n';
}

namespace {

bool next_data_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

GridSignal read_signal(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line)) fail(ErrorCode::Io, "missing signal header");
  GridSpec spec;
  {
    std::istringstream hs(line);
    if (!(hs >> spec.period >> spec.samples >> spec.channels)) fail(ErrorCode::Io, "bad signal header");
  }
  GridSignal f(spec);
  std::vector<char> seen(f.values().size(), 0);
  while (next_data_line(is, line)) {
    std::istringstream rs(line);
    int k, j;
    double re, im;
    if (!(rs >> k >> j >> re >> im)) fail(ErrorCode::Io, "bad signal row: " + line);
    if (k < 0 || k >= spec.channels || j < 0 || j >= spec.samples) fail(ErrorCode::Io, "signal row out of range");
    f.at(k, j) = cplx(re, im);
    seen[static_cast<size_t>(k) * spec.samples + j] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) fail(ErrorCode::Io, "signal file is incomplete");
  return f;
}

void save_signal(const std::string& path, const GridSignal& f) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::Io, "cannot open " + path);
  write_signal(os, f);
}

GridSignal load_signal(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::Io, "cannot open " + path);
  return read_signal(is);
}

}  // namespace nct
