#include "nctgabor/moyal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "fft.hpp"
#include "nctgabor/config.hpp"
#include "nctgabor/error.hpp"
#include "nctgabor/frame.hpp"

namespace nct {

PhaseGrid PhaseGrid::make(const GridSpec& spec, int freq_samples) {
  spec.validate();
  if (freq_samples < 2 || freq_samples > spec.samples || freq_samples % 2 != 0)
    fail(ErrorCode::InvalidArgument, "frequency samples must be even and in [2, N]");
  PhaseGrid g;
  g.spec = spec;
  g.freq_samples = freq_samples;
  g.weights.assign(freq_samples, spec.step() / spec.period);
  return g;
}

double PhaseGrid::shift(int m) const {
  const int n = spec.samples;
  return (m < n / 2 ? m : m - n) * spec.step();
}

int occupied_bandwidth(const GridSignal& f, double threshold) {
  const int n = f.samples();
  std::vector<cplx> buf(n);
  std::vector<double> power(n, 0.0);
  for (int k = 0; k < f.channels(); ++k) {
    fft::forward(n, f.channel(k), buf.data());
    for (int m = 0; m < n; ++m) power[m] = std::max(power[m], std::norm(buf[m]));
  }
  double top = *std::max_element(power.begin(), power.end());
  int band = 0;
  for (int m = 0; m < n; ++m) {
    if (power[m] <= threshold * top) continue;
    band = std::max(band, m <= n / 2 ? m : n - m);
  }
  return band;
}

PhaseGrid phase_grid_for(const GridSignal& f, const GridSignal& g) {
  require_same_spec(f.spec(), g.spec());
  long band = occupied_bandwidth(f) + occupied_bandwidth(g);
  long m = std::min<long>(f.samples(), std::max<long>(2, 4 * band));
  return PhaseGrid::make(f.spec(), static_cast<int>(m + m % 2));
}

namespace {

struct ShiftWork {
  std::vector<cplx> prod, chan, spec;
};

// All channel pairs (l, c) for one time shift m.
void stft_shift(const GridSignal& f, const GridSignal& g, const PhaseGrid& grid, int m, ShiftWork& w,
                const StftVisitor& fn) {
  const int n = f.samples(), q = f.channels(), half = grid.freq_samples / 2;
  const double dx = f.spec().step();
  w.prod.resize(static_cast<size_t>(q) * n);
  w.chan.resize(n);
  w.spec.resize(n);
  std::vector<cplx> row(grid.freq_samples);
  for (int l = 0; l < q; ++l) {
    for (int t = 0; t < q; ++t) {
      const cplx* ft = f.channel(t);
      const cplx* gt = g.channel(wrap(t - l, q));
      cplx* out = w.prod.data() + static_cast<size_t>(t) * n;
      for (int j = 0; j < n; ++j) out[j] = ft[j] * std::conj(gt[wrap(j - m, n)]);
    }
    for (int c = 0; c < q; ++c) {
      std::fill(w.chan.begin(), w.chan.end(), cplx(0.0));
      for (int t = 0; t < q; ++t) {
        cplx ph = unit_phase(-double(t) * c / q);
        const cplx* src = w.prod.data() + static_cast<size_t>(t) * n;
        for (int j = 0; j < n; ++j) w.chan[j] += ph * src[j];
      }
      fft::forward(n, w.chan.data(), w.spec.data());
      for (int i = 0; i < grid.freq_samples; ++i) {
        int k = i - half;
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        row[i] = dx * sign * w.spec[wrap(k, n)];
      }
      fn(m, l, c, row.data());
    }
  }
}

}  // namespace

void stft_visit(const GridSignal& f, const GridSignal& g, const PhaseGrid& grid, const StftVisitor& fn,
                int workers) {
  require_same_spec(f.spec(), g.spec());
  if (grid.spec != f.spec()) fail(ErrorCode::SpecMismatch, "phase grid built for another signal grid");
  const int shifts = grid.shifts();
  workers = std::clamp(workers, 1, shifts);
  auto run = [&](int first) {
    ShiftWork w;
    for (int m = first; m < shifts; m += workers) stft_shift(f, g, grid, m, w, fn);
  };
  if (workers == 1) {
    run(0);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(run, t);
  for (auto& th : pool) th.join();
}

namespace {

// Per-shift partial sums, reduced in shift order so results do not depend on the worker count.
template <class Weight>
double weighted_mass(const GridSignal& f, const GridSignal& g, const PhaseGrid& grid, int workers, Weight weight) {
  std::vector<double> partial(grid.shifts(), 0.0);
  stft_visit(
      f, g, grid,
      [&](int m, int, int, const cplx* row) {
        double x = grid.shift(m), acc = 0.0;
        for (int i = 0; i < grid.freq_samples; ++i) acc += grid.weights[i] * weight(x, grid.frequency(i)) * std::norm(row[i]);
        partial[m] += acc;
      },
      workers);
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

MoyalCheck moyal_check(const GridSignal& f, const GridSignal& g, int workers) {
  PhaseGrid grid = phase_grid_for(f, g);
  MoyalCheck r;
  r.lhs = weighted_mass(f, g, grid, workers, [](double, double) { return 1.0; });
  double nf = norm(f), ng = norm(g);
  r.rhs = f.channels() * ng * ng * nf * nf;
  r.relative_error = std::abs(r.lhs - r.rhs) / r.rhs;
  return r;
}

double continuous_energy(const GridSignal& g, int workers) {
  PhaseGrid grid = phase_grid_for(g, g);
  double n2 = norm(g);
  n2 *= n2;
  double mass = weighted_mass(g, g, grid, workers, [](double x, double w) { return x * x + w * w; });
  return kPi * mass / (n2 * n2);
}

cplx continuous_chern(const GridSignal& g, double step, double extent) {
  const GridSpec& spec = g.spec();
  const int n = spec.samples, q = g.channels();
  double per_sample = step / spec.step(), per_bin = step * spec.period;
  long ms = std::lround(per_sample), ks = std::lround(per_bin);
  if (!(step > 0.0) || std::abs(per_sample - ms) > 1e-9 || std::abs(per_bin - ks) > 1e-9)
    fail(ErrorCode::InvalidArgument, "step must be a multiple of both dx and 1/L");
  const long K = std::lround(std::floor(extent / step + 1e-9));
  if (K < 1 || K * ms >= n / 2 || K * ks >= n / 2)
    fail(ErrorCode::InvalidArgument, "extent does not fit inside the grid");

  const long side = 2 * K + 1;
  auto at = [&](long i, int l, long k, int c) {
    return static_cast<size_t>((((i + K) * q + l) * side + (k + K)) * q + c);
  };
  std::vector<cplx> p(static_cast<size_t>(side * side) * q * q);
  double scale = 1.0 / (q * norm(g) * norm(g));
  PhaseGrid full = PhaseGrid::make(spec, n);
  ShiftWork work;
  for (long i = -K; i <= K; ++i) {
    int m = wrap(i * ms, n);
    stft_shift(g, g, full, m, work, [&](int, int l, int c, const cplx* row) {
      for (long k = -K; k <= K; ++k) p[at(i, l, k, c)] = scale * row[k * ks + n / 2];
    });
  }

  // exp(-2 pi i step^2 t) for |t| <= K^2, and exp(-2 pi i t / q)
  std::vector<cplx> lat(2 * K * K + 1);
  for (long t = -K * K; t <= K * K; ++t) lat[t + K * K] = unit_phase(-step * step * double(t));
  std::vector<cplx> chan(q);
  for (int t = 0; t < q; ++t) chan[t] = unit_phase(-double(t) / q);

  cplx total = 0.0;
  for (long i = -K; i <= K; ++i)
    for (int l = 0; l < q; ++l)
      for (long k = -K; k <= K; ++k)
        for (int c = 0; c < q; ++c) {
          cplx a = p[at(i, l, k, c)];
          if (a == cplx(0.0)) continue;
          cplx inner_sum = 0.0;
          for (long i1 = std::max(-K, -K - i); i1 <= std::min(K, K - i); ++i1) {
            long i2 = -i - i1;
            for (int l1 = 0; l1 < q; ++l1) {
              int l2 = wrap(-l - l1, q);
              for (long k1 = std::max(-K, -K - k); k1 <= std::min(K, K - k); ++k1) {
                long k2 = -k - k1;
                double w = double(i1 * k2 - k1 * i2);
                if (w == 0.0) continue;
                cplx ph = lat[i1 * k2 + K * K];
                for (int c1 = 0; c1 < q; ++c1) {
                  int c2 = wrap(-c - c1, q);
                  inner_sum += w * p[at(i1, l1, k1, c1)] * p[at(i2, l2, k2, c2)] * ph * chan[wrap(l1 * c2, q)];
                }
              }
            }
          }
          // phi(nu, -nu) = exp(+2 pi i (lambda gamma + l c / q))
          total += a * std::conj(lat[i * k + K * K] * chan[wrap(l * c, q)]) * inner_sum;
        }
  // derivatives contribute (2 pi i)^2 step^2 per weight unit; the measure adds step^4
  double h2 = step * step;
  cplx deriv = cplx(0.0, kTwoPi) * cplx(0.0, kTwoPi) * h2;
  return double(q) * q / cplx(0.0, kTwoPi) * h2 * h2 * deriv * total;
}

EigenFit eigen_residual(const GridSignal& g, int sign) {
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  double n = norm(g);
  if (n == 0.0) fail(ErrorCode::InvalidArgument, "zero window");
  GridSignal a = cplx(0.0, kTwoPi) * apply_M(g);
  a.add_scaled(cplx(0.0, sign), apply_D(g));
  EigenFit fit;
  fit.lambda = inner(a, g) / (n * n);
  a.add_scaled(-fit.lambda, g);
  fit.residual = norm(a) / n;
  return fit;
}

TraceCompatibility trace_compatibility(const GridSignal& f, const GridSignal& g) {
  require_same_spec(f.spec(), g.spec());
  TraceCompatibility t;
  PhaseGrid grid = PhaseGrid::make(f.spec(), 2);
  ShiftWork work;
  stft_shift(f, g, grid, 0, work, [&](int, int l, int c, const cplx* row) {
    if (l == 0 && c == 0) t.left = row[1];
  });
  const int q = f.channels();
  cplx right_inner = double(q) * inner(f, g);
  t.right = right_inner / double(q);
  t.residual = std::abs(t.left - t.right);
  return t;
}

const char* to_string(CorpusFamily f) {
  switch (f) {
    case CorpusFamily::Gaussian: return "gaussian";
    case CorpusFamily::Dilated: return "dilated";
    case CorpusFamily::Hermite: return "hermite";
    case CorpusFamily::Bump: return "bump";
    case CorpusFamily::Random: return "random";
    case CorpusFamily::Perturbed: return "perturbed";
  }
  return "?";
}

namespace {

CorpusFamily parse_family(const std::string& s) {
  for (CorpusFamily f : {CorpusFamily::Gaussian, CorpusFamily::Dilated, CorpusFamily::Hermite, CorpusFamily::Bump,
                         CorpusFamily::Random, CorpusFamily::Perturbed})
    if (s == to_string(f)) return f;
  fail(ErrorCode::Config, "unknown corpus family '" + s + "'");
}

double cubic_bspline(double t) {
  t = std::abs(t);
  if (t >= 2.0) return 0.0;
  if (t >= 1.0) return (2.0 - t) * (2.0 - t) * (2.0 - t) / 6.0;
  return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::istream& is) {
  KeyValues kv = parse_key_values(is, "<corpus>");
  std::vector<CorpusEntry> out;
  for (const auto& [key, value] : kv.entries()) {
    if (key != "window") fail(ErrorCode::Config, "corpus lines must be 'window = ...', got '" + key + "'");
    std::istringstream line(value);
    std::string family;
    line >> family;
    CorpusEntry e;
    e.family = parse_family(family);
    std::string tok;
    while (line >> tok) {
      size_t eq = tok.find('=');
      if (eq == std::string::npos) fail(ErrorCode::Config, "corpus token without '=': " + tok);
      std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
      if (k == "name") e.name = v;
      else if (k == "q") e.q = static_cast<int>(parse_int(v, k));
      else if (k == "lam") e.lam = parse_complex(v);
      else if (k == "width") e.width = parse_real(v, k);
      else if (k == "order") e.order = static_cast<int>(parse_int(v, k));
      else if (k == "eps") e.eps = parse_real(v, k);
      else if (k == "seed") e.seed = static_cast<unsigned long long>(parse_int(v, k));
      else if (k == "weights") {
        std::stringstream ws(v);
        std::string w;
        while (std::getline(ws, w, ',')) e.weights.push_back(parse_complex(w));
      } else {
        fail(ErrorCode::Config, "unknown corpus key '" + k + "'");
      }
    }
    if (e.q < 1) fail(ErrorCode::Config, "corpus q must be positive");
    if (!e.weights.empty() && static_cast<int>(e.weights.size()) != e.q)
      fail(ErrorCode::Config, "corpus weights must have q entries");
    if (e.name.empty()) e.name = family + std::to_string(out.size());
    out.push_back(e);
  }
  return out;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open corpus " + path);
  return parse_corpus(in);
}

GridSignal corpus_window(const CorpusEntry& e, double period, int samples) {
  GridSpec spec{period, samples, e.q};
  std::vector<cplx> w = e.weights.empty() ? std::vector<cplx>(e.q, cplx(1.0)) : e.weights;
  switch (e.family) {
    case CorpusFamily::Gaussian:
      return gaussian(spec, w, e.lam);
    case CorpusFamily::Hermite:
      return hermite(spec, e.order, w);
    case CorpusFamily::Dilated:
    case CorpusFamily::Bump: {
      GridSignal s(spec);
      for (int j = 0; j < samples; ++j) {
        double x = spec.x(j);
        double v = e.family == CorpusFamily::Dilated ? std::exp(-kPi * x * x / (e.width * e.width))
                                                     : cubic_bspline(2.0 * x / e.width);
        for (int k = 0; k < e.q; ++k) s.at(k, j) = w[k] * v;
      }
      return s;
    }
    case CorpusFamily::Random: {
      std::mt19937_64 rng(e.seed);
      return random_probe(spec, rng);
    }
    case CorpusFamily::Perturbed: {
      GridSignal g = gaussian(spec, w, e.lam);
      GridSignal bump = hermite(spec, e.order, w);
      g.add_scaled(e.eps * norm(g) / norm(bump), bump);
      return g;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown corpus family");
}

}  // namespace nct
