#include "nctgabor/frame.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "nctgabor/error.hpp"

namespace nct {

FrameSystem::FrameSystem(GridSignal window, const TorusParams& params, double radius)
    : window_(std::move(window)), params_(params), radius_(radius) {
  params_.validate();
  if (window_.channels() != params_.q) fail(ErrorCode::SpecMismatch, "window channel count differs from q");
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "radius must be positive");
}

void FrameSystem::set_dual(GridSignal h, LatticeSeq coeffs, const DualDiagnostics& diag) {
  dual_ = std::move(h);
  dual_coeffs_ = std::move(coeffs);
  dual_diag_ = diag;
}

void FrameSystem::set_tight(GridSignal t) { tight_ = std::move(t); }

void FrameSystem::set_bounds(const FrameBounds& b) {
  if (!(b.lower > 0.0) || b.lower > b.upper) fail(ErrorCode::InvalidArgument, "frame bounds must satisfy 0 < A <= B");
  bounds_ = b;
}

AdjointSection::AdjointSection(const LatticeSeq& b, double section_radius)
    : params_(b.params()), radius_(section_radius) {
  if (b.kind() != LatticeKind::Adjoint) fail(ErrorCode::LatticeMismatch, "section expects an adjoint sequence");
  IndexBox box = index_box(b.basis(), section_radius);
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1)
    for (long n2 = box.n2_lo; n2 <= box.n2_hi; ++n2) {
      if (n1 == 0 && n2 == 0) origin_ = static_cast<int>(index_.size());
      index_.emplace_back(n1, n2);
    }
  const int n = size();
  k_.resize(n, n);
  // (y ♮ b)(nu) = sum_mu y(mu) b(nu - mu) phi°(mu, nu - mu)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long d1 = index_[i].first - index_[j].first;
      long d2 = index_[i].second - index_[j].second;
      cplx v = b(d1, d2);
      k_(i, j) = v == cplx(0.0) ? cplx(0.0) : v * lattice_cocycle(b, index_[j].first, index_[j].second, d1, d2);
    }
}

LatticeSeq AdjointSection::to_seq(const Eigen::VectorXcd& v) const {
  LatticeSeq out(params_, LatticeKind::Adjoint, radius_);
  for (int i = 0; i < size(); ++i) out.set(index_[i].first, index_[i].second, v(i));
  return out;
}

Eigen::VectorXcd AdjointSection::from_seq(const LatticeSeq& a) const {
  Eigen::VectorXcd v(size());
  for (int i = 0; i < size(); ++i) v(i) = a(index_[i].first, index_[i].second);
  return v;
}

LatticeSeq adjoint_gram(const GridSignal& g, const TorusParams& p, double section_radius) {
  double r = std::max(section_radius, std::min(2.0 * section_radius, 0.5 * g.spec().period));
  return inner_right(g, g, p, r);
}

CgResult conjugate_gradient(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& rhs, double tol, int max_iter) {
  CgResult res;
  res.x = Eigen::VectorXcd::Zero(rhs.size());
  Eigen::VectorXcd r = rhs;
  Eigen::VectorXcd p = r;
  double rr = r.squaredNorm();
  const double b0 = std::sqrt(rr);
  if (b0 == 0.0) return res;
  double best = 1.0;
  int since_best = 0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd kp = k * p;
    double curv = p.dot(kp).real();
    if (!(curv > 0.0)) fail(ErrorCode::CgStagnation, "operator is not positive definite on the Krylov space");
    double a = rr / curv;
    res.x += a * p;
    r -= a * kp;
    double rn = r.squaredNorm();
    res.iterations = it;
    res.residual = std::sqrt(rn) / b0;
    if (res.residual <= tol) return res;
    if (res.residual < 0.5 * best) {
      best = res.residual;
      since_best = 0;
    } else if (++since_best > 50) {
      fail(ErrorCode::CgStagnation, "CG residual plateaued at " + std::to_string(res.residual));
    }
    p = r + (rn / rr) * p;
    rr = rn;
  }
  fail(ErrorCode::CgStagnation, "CG did not reach tolerance within " + std::to_string(max_iter) + " iterations");
}

GridSignal frame_operator(const FrameSystem& sys, const GridSignal& f) {
  return act_left(inner_left(f, sys.window(), sys.params(), sys.radius()), sys.window());
}

namespace {

Eigen::MatrixXcd random_block(int n, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd v(n, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n; ++i) v(i, j) = cplx(nd(rng), nd(rng));
  return v;
}

using BlockOp = std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>;

Eigen::MatrixXcd orthonormal(const Eigen::MatrixXcd& w) {
  const auto n = w.rows();
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(w).householderQ() * Eigen::MatrixXcd::Identity(n, w.cols());
}

// Largest eigenvalue of a Hermitian operator by restarted block Krylov iteration:
// Rayleigh-Ritz on span{V, AV, ..., A^m V}, restarted from the leading Ritz vectors.
double block_krylov(const BlockOp& apply, const Eigen::MatrixXcd& start, int& iterations) {
  const int n = static_cast<int>(start.rows());
  const int k = static_cast<int>(start.cols());
  if (2 * k >= n) {
    // the Krylov space would be the whole section
    Eigen::MatrixXcd full = apply(Eigen::MatrixXcd::Identity(n, n));
    ++iterations;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (full + full.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(n - 1);
  }
  const int blocks = std::min(8, n / k - 1);
  Eigen::MatrixXcd v = orthonormal(start);
  double rho = 0.0, prev = 0.0;
  int quiet = 0;
  for (int restart = 0; restart < 400; ++restart) {
    Eigen::MatrixXcd q(n, (blocks + 1) * k), aq(n, (blocks + 1) * k);
    int cols = 0;
    Eigen::MatrixXcd block = v;
    for (int j = 0; j <= blocks; ++j) {
      if (j > 0) {
        for (int pass = 0; pass < 2; ++pass) block -= q.leftCols(cols) * (q.leftCols(cols).adjoint() * block);
        block = orthonormal(block);
        block -= q.leftCols(cols) * (q.leftCols(cols).adjoint() * block);
        block = orthonormal(block);
      }
      q.middleCols(cols, k) = block;
      aq.middleCols(cols, k) = apply(block);
      ++iterations;
      block = aq.middleCols(cols, k);
      cols += k;
    }
    Eigen::MatrixXcd h = q.adjoint() * aq;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(0.5 * (h + h.adjoint()));
    const auto m = ritz.eigenvalues().size();
    rho = ritz.eigenvalues()(m - 1);
    if (!std::isfinite(rho)) break;
    quiet = std::abs(rho - prev) <= 1e-14 * std::abs(rho) ? quiet + 1 : 0;
    if (quiet >= 2 || cols >= n) break;
    prev = rho;
    v = orthonormal(q * ritz.eigenvectors().rightCols(k));
  }
  return rho;
}

}  // namespace

FrameBounds section_bounds(const AdjointSection& section, int probes, std::uint64_t seed) {
  if (probes < 16) fail(ErrorCode::InvalidArgument, "frame_bounds needs at least 16 probes");
  std::mt19937_64 rng(seed);
  const auto& k = section.matrix();
  FrameBounds fb;
  fb.probes = probes;
  Eigen::MatrixXcd start = random_block(section.size(), std::min(probes, section.size()), rng);
  double upper = block_krylov([&](const Eigen::MatrixXcd& v) -> Eigen::MatrixXcd { return k * v; }, start,
                              fb.iterations);
  double lower = 0.0;
  Eigen::LLT<Eigen::MatrixXcd> llt(k);
  if (llt.info() == Eigen::Success && upper > 0.0) {
    // smallest eigenvalue: dominant eigenvalue of K^{-1}
    double inv = block_krylov([&](const Eigen::MatrixXcd& v) -> Eigen::MatrixXcd { return llt.solve(v); }, start,
                              fb.iterations);
    lower = inv > 0.0 ? 1.0 / inv : 0.0;
  }
  fb.lower = lower;
  fb.upper = upper;
  return fb;
}

FrameBounds frame_bounds(FrameSystem& sys, int probes, std::uint64_t seed) {
  LatticeSeq b = adjoint_gram(sys.window(), sys.params(), sys.radius());
  AdjointSection section(b, sys.radius());
  FrameBounds fb = section_bounds(section, probes, seed);
  fb.section_radius = sys.radius();
  if (!(fb.lower >= 1e-6 * fb.upper) || !(fb.upper > 0.0))
    fail(ErrorCode::NotAFrame, "lower frame bound estimate " + std::to_string(fb.lower) + " vs upper " +
                                   std::to_string(fb.upper));
  sys.set_bounds(fb);
  return fb;
}

FrameVerdict frame_verdict(const GridSignal& g, const TorusParams& p, double radius, std::uint64_t seed) {
  FrameVerdict v;
  LatticeSeq b = adjoint_gram(g, p, 2.0 * radius);
  FrameBounds base = section_bounds(AdjointSection(b, radius), 16, seed);
  FrameBounds doubled = section_bounds(AdjointSection(b, 2.0 * radius), 16, seed);
  v.lower = base.lower;
  v.lower_doubled = doubled.lower;
  v.upper = doubled.upper;
  v.is_frame = v.upper > 0.0 && v.lower_doubled >= 1e-6 * v.upper && v.lower_doubled > 0.5 * v.lower;
  return v;
}

GridSignal canonical_dual(FrameSystem& sys, double tol) {
  if (sys.dual()) return *sys.dual();
  if (!sys.bounds()) frame_bounds(sys);
  LatticeSeq b = adjoint_gram(sys.window(), sys.params(), sys.radius());
  AdjointSection section(b, sys.radius());
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(section.size());
  e(section.origin()) = 1.0;
  CgResult cg = conjugate_gradient(section.matrix(), e, tol);
  LatticeSeq y = section.to_seq(cg.x);
  GridSignal h = act_right(sys.window(), y);
  DualDiagnostics diag;
  diag.iterations = cg.iterations;
  diag.algebraic_residual = (section.matrix() * cg.x - e).norm();
  GridSignal sh = frame_operator(sys, h);
  sh -= sys.window();
  diag.operator_residual = norm(sh) / norm(sys.window());
  sys.set_dual(h, y, diag);
  return h;
}

GridSignal canonical_tight(FrameSystem& sys, double tol) {
  if (sys.tight()) return *sys.tight();
  if (!sys.bounds()) frame_bounds(sys);
  LatticeSeq b = adjoint_gram(sys.window(), sys.params(), sys.radius());
  AdjointSection section(b, sys.radius());
  const int n = section.size();
  // coupled Newton-Schulz: Y -> (K/c)^{1/2}, Z -> (K/c)^{-1/2}
  const double c = 0.5 * (sys.bounds()->lower + sys.bounds()->upper);
  Eigen::MatrixXcd y = section.matrix() / c;
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    Eigen::MatrixXcd t = 0.5 * (3.0 * id - z * y);
    y = (y * t).eval();
    z = (t * z).eval();
    if ((id - z * y).norm() <= tol * std::sqrt(double(n))) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorCode::CgStagnation, "Newton-Schulz iteration did not converge");
  Eigen::VectorXcd coeffs = z.col(section.origin()) / std::sqrt(c);
  GridSignal t = act_right(sys.window(), section.to_seq(coeffs));
  sys.set_tight(t);
  return t;
}

GridSignal inverse_frame_operator(const FrameSystem& sys, const GridSignal& f) {
  if (!sys.dual_coefficients()) fail(ErrorCode::InvalidArgument, "canonical dual has not been computed");
  return act_right(f, *sys.dual_coefficients());
}

double wexler_raz_residual(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius) {
  LatticeSeq wr = inner_right(g, h, p, radius);
  wr.add(0, 0, -1.0);
  return wr.l1();
}

double reconstruction_residual(const GridSignal& f, const GridSignal& g, const GridSignal& h, const TorusParams& p,
                               double radius) {
  GridSignal rec = act_left(inner_left(f, g, p, radius), h);
  rec -= f;
  return norm(rec) / norm(f);
}

DualPair project_dual_pair(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius,
                           bool canonical, double tol) {
  DualPair out;
  out.wexler_raz = wexler_raz_residual(g, h, p, radius);
  if (!(out.wexler_raz < tol))
    fail(ErrorCode::NotDual, "Wexler-Raz residual " + std::to_string(out.wexler_raz) + " exceeds tolerance");
  out.projection = inner_left(g, h, p, radius);
  out.idempotence = (twisted_conv(out.projection, out.projection) - out.projection).l1();
  out.self_adjointness = (twisted_star(out.projection) - out.projection).l1();
  if (!(out.idempotence < tol))
    fail(ErrorCode::NotAProjection, "idempotence residual " + std::to_string(out.idempotence));
  if (canonical && !(out.self_adjointness < tol))
    fail(ErrorCode::NotAProjection, "self-adjointness residual " + std::to_string(out.self_adjointness));
  return out;
}

LaurentSymbol symbol_from_coefficients(const LatticeSeq& coeffs, int grid) {
  if (grid < 1) fail(ErrorCode::InvalidArgument, "symbol grid must be positive");
  LaurentSymbol s;
  s.grid = grid;
  s.values.assign(static_cast<size_t>(grid) * grid, 0.0);
  s.min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double t1 = double(i) / grid, t2 = double(j) / grid;
      cplx f = 0.0;
      coeffs.for_each([&](long n1, long n2, cplx v) { f += v * unit_phase(n2 * t1 + n1 * t2); });
      s.values[static_cast<size_t>(i) * grid + j] = f.real();
      s.max_imag = std::max(s.max_imag, std::abs(f.imag()));
      s.min_abs = std::min(s.min_abs, std::abs(f));
      s.max_abs = std::max(s.max_abs, std::abs(f));
    }
  s.riesz = s.min_abs > 1e-6 * s.max_abs;
  return s;
}

LaurentSymbol laurent_symbol(const GridSignal& g, const TorusParams& p, int grid, double radius) {
  if (!soliton_admissible(p).integral)
    fail(ErrorCode::LaurentUnavailable, "1/(alpha beta q^2) + r°s°/q is not an integer");
  LatticeSeq coeffs = inner_right(g, g, p, radius);
  coeffs *= p.density();
  return symbol_from_coefficients(coeffs, grid);
}

GridSignal lift_scalar_window(const GridSignal& scalar, const TorusParams& p, double radius) {
  p.validate();
  if (scalar.channels() != 1) fail(ErrorCode::InvalidArgument, "scalar window must have one channel");
  if (p.q == 1) return scalar;
  if (!soliton_admissible(p).integral)
    fail(ErrorCode::LaurentUnavailable, "lifting needs 1/(alpha beta q^2) + r°s°/q to be an integer");
  TorusParams sp{p.alpha, p.q * p.beta, 0, 0, 1};
  if (!laurent_symbol(scalar, sp, 64, radius).riesz)
    fail(ErrorCode::NotAFrame, "scalar window is not a frame for the lattice alpha Z x q beta Z");
  GridSpec spec = scalar.spec();
  spec.channels = p.q;
  GridSignal out(spec);
  for (int k = 0; k < p.q; ++k) std::copy_n(scalar.channel(0), scalar.samples(), out.channel(k));
  return out;
}

double adjoint_span_residual(const GridSignal& f, const GridSignal& g, const TorusParams& p, double radius) {
  require_same_spec(f.spec(), g.spec());
  std::vector<LatticePoint> pts = enumerate_lattice(p, LatticeKind::Adjoint, radius);
  const int rows = static_cast<int>(f.values().size());
  Eigen::MatrixXcd a(rows, static_cast<int>(pts.size()));
  for (size_t c = 0; c < pts.size(); ++c) {
    GridSignal atom = tf_shift(g, pts[c].nu, ShiftOrder::FrequencyTime);
    for (int i = 0; i < rows; ++i) a(i, static_cast<int>(c)) = atom.values()[i];
  }
  Eigen::VectorXcd rhs(rows);
  for (int i = 0; i < rows; ++i) rhs(i) = f.values()[i];
  Eigen::VectorXcd coef = a.colPivHouseholderQr().solve(rhs);
  double res = (rhs - a * coef).norm() * std::sqrt(f.spec().step());
  return res / std::max(norm(f), norm(g));
}

GridSignal random_probe(const GridSpec& spec, std::mt19937_64& rng, double spread) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> center(-spread, spread);
  std::uniform_real_distribution<double> width(0.7, 1.3);
  GridSignal f(spec);
  for (int term = 0; term < 3; ++term) {
    cplx amp(nd(rng), nd(rng));
    double x0 = center(rng), w0 = center(rng), sigma = width(rng);
    std::vector<cplx> weights(spec.channels);
    for (auto& w : weights) w = cplx(nd(rng), nd(rng));
    for (int j = 0; j < spec.samples; ++j) {
      double x = spec.x(j);
      double u = (x - x0) / sigma;
      cplx v = amp * std::exp(-kPi * u * u) * unit_phase(w0 * x);
      for (int k = 0; k < spec.channels; ++k) f.at(k, j) += weights[k] * v;
    }
  }
  f *= 1.0 / norm(f);
  return f;
}

}  // namespace nct
