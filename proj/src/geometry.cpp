#include "nctgabor/geometry.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "nctgabor/error.hpp"

namespace nct {

LatticeSeq derive(const LatticeSeq& a, int j) {
  if (j != 1 && j != 2) fail(ErrorCode::InvalidArgument, "derivation index must be 1 or 2");
  LatticeSeq out(a.params(), a.kind(), a.radius(), a.box());
  a.for_each([&](long n1, long n2, cplx v) {
    PhasePoint nu = a.point(n1, n2);
    double w = j == 1 ? nu.lambda : nu.gamma;
    out.set(n1, n2, cplx(0.0, kTwoPi * w) * v);
  });
  return out;
}

GridSignal covariant(const GridSignal& f, int j) {
  if (j == 1) return cplx(0.0, kTwoPi) * apply_M(f);
  if (j == 2) return apply_D(f);
  fail(ErrorCode::InvalidArgument, "covariant derivative index must be 1 or 2");
}

namespace {

void require_projection(const LatticeSeq& p, double tol) {
  if (p.kind() != LatticeKind::TimeFrequency) fail(ErrorCode::LatticeMismatch, "expected a time-frequency sequence");
  if (p.l1() == 0.0) fail(ErrorCode::NotAProjection, "zero sequence");
  double idem = (twisted_conv(p, p) - p).l1();
  if (!(idem < tol)) fail(ErrorCode::NotAProjection, "idempotence residual " + std::to_string(idem));
}

}  // namespace

cplx chern_trace(const LatticeSeq& p, double tol) {
  require_projection(p, tol);
  LatticeSeq d1 = derive(p, 1), d2 = derive(p, 2);
  LatticeSeq commutator = twisted_conv(d1, d2) - twisted_conv(d2, d1);
  return trace_of_product(p, commutator) / cplx(0.0, kTwoPi * p.params().area());
}

cplx chern_sum(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius) {
  LatticeSeq v = inner_left(g, h, p, radius);
  const int q = p.q;
  struct Node {
    long n1, n2;
    PhasePoint nu;
    cplx val;
  };
  std::vector<Node> nodes;
  v.for_each([&](long n1, long n2, cplx val) { nodes.push_back({n1, n2, v.point(n1, n2), val}); });
  cplx sum = 0.0;
  for (const Node& a : nodes) {
    cplx outer = a.val * std::conj(cocycle(a.nu, a.nu, q));
    cplx acc = 0.0;
    for (const Node& b : nodes) {
      double weight = b.nu.lambda * a.nu.gamma - a.nu.lambda * b.nu.gamma;
      if (weight == 0.0) continue;
      cplx third = v(-a.n1 - b.n1, -a.n2 - b.n2);
      if (third == cplx(0.0)) continue;
      acc += weight * b.val * third * std::conj(cocycle(b.nu, add(b.nu, a.nu, q), q));
    }
    sum += outer * acc;
  }
  return sum * kTwoPi / cplx(0.0, p.area());
}

double energy(const LatticeSeq& p, double tol) {
  require_projection(p, tol);
  LatticeSeq d1 = derive(p, 1), d2 = derive(p, 2);
  cplx t = trace_of_product(d1, d1) + trace_of_product(d2, d2);
  return t.real() / (4.0 * kPi * p.params().area());
}

double energy_from_window(const GridSignal& g, const GridSignal& h, const TorusParams& p, double radius) {
  LatticeSeq v = inner_left(g, h, p, radius);
  double sum = 0.0;
  v.for_each([&](long n1, long n2, cplx val) {
    PhasePoint nu = v.point(n1, n2);
    sum += (nu.lambda * nu.lambda + nu.gamma * nu.gamma) * std::norm(val);
  });
  return kPi / p.area() * sum;
}

SelfDuality sd_residuals(const LatticeSeq& p) {
  LatticeSeq d1 = derive(p, 1), d2 = derive(p, 2);
  SelfDuality sd;
  sd.plus = twisted_conv(d1 + cplx(0.0, 1.0) * d2, p).l1();
  sd.minus = twisted_conv(d1 - cplx(0.0, 1.0) * d2, p).l1();
  return sd;
}

std::string WindowSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case WindowKind::Gaussian: os << "gaussian(lam=" << lam.real() << (lam.imag() < 0 ? "" : "+") << lam.imag() << "i)"; break;
    case WindowKind::LiftedGaussian: os << "lifted_gaussian"; break;
    case WindowKind::Hermite: os << "hermite(" << order << ")"; break;
    case WindowKind::Perturbed: os << "perturbed(hermite " << order << ", eps=" << eps << ")"; break;
    case WindowKind::File: os << "file(" << path << ")"; break;
  }
  return os.str();
}

GridSignal build_window(const WindowSpec& w, const GridSpec& grid, const TorusParams& p, double radius) {
  GridSpec spec = grid;
  spec.channels = p.q;
  std::vector<cplx> weights = w.weights.empty() ? std::vector<cplx>(p.q, cplx(1.0)) : w.weights;
  if (static_cast<int>(weights.size()) != p.q) fail(ErrorCode::InvalidArgument, "window weights must have q entries");
  switch (w.kind) {
    case WindowKind::Gaussian:
      return gaussian(spec, weights, w.lam);
    case WindowKind::LiftedGaussian: {
      GridSpec scalar = spec;
      scalar.channels = 1;
      return lift_scalar_window(gaussian(scalar, w.lam), p, radius);
    }
    case WindowKind::Hermite:
      return hermite(spec, w.order, weights);
    case WindowKind::Perturbed: {
      GridSignal g = gaussian(spec, weights, w.lam);
      GridSignal bump = hermite(spec, w.order, weights);
      g.add_scaled(w.eps * norm(g) / norm(bump), bump);
      return g;
    }
    case WindowKind::File: {
      GridSignal g = load_signal(w.path);
      if (g.spec() != spec) fail(ErrorCode::SpecMismatch, "window file grid differs from the configured grid");
      return g;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown window kind");
}

ChernReport soliton_experiment(const TorusParams& p, const WindowSpec& w, const GridSpec& grid,
                               const ExperimentOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  ChernReport rep;
  rep.params = p;
  rep.window = w.describe();
  rep.radius = opt.radius;
  rep.period = grid.period;
  rep.samples = grid.samples;

  GridSignal g = build_window(w, grid, p, opt.radius);
  FrameSystem sys(g, p, opt.radius);
  FrameBounds fb = frame_bounds(sys, opt.probes, opt.seed);
  rep.lower_bound = fb.lower;
  rep.upper_bound = fb.upper;
  GridSignal h = canonical_dual(sys, opt.tol.solver());

  DualPair pair = project_dual_pair(g, h, p, opt.radius, true, opt.tol.frame());
  rep.wexler_raz = pair.wexler_raz;
  rep.idempotence = pair.idempotence;
  rep.self_adjointness = pair.self_adjointness;

  rep.c1 = chern_trace(pair.projection, opt.tol.frame());
  rep.c1_rounded = std::lround(rep.c1.real());
  rep.c1_sum = chern_sum(g, h, p, opt.radius);
  rep.energy = energy(pair.projection, opt.tol.frame());
  rep.energy_window = energy_from_window(g, h, p, opt.radius);
  rep.gap = rep.energy - std::abs(rep.c1);
  SelfDuality sd = sd_residuals(pair.projection);
  rep.sd_plus = sd.plus;
  rep.sd_minus = sd.minus;

  GridSignal n1 = covariant(g, 1), n2 = covariant(g, 2);
  rep.w_residual_plus = adjoint_span_residual(n1 + cplx(0.0, 1.0) * n2, g, p, opt.radius);
  rep.w_residual_minus = adjoint_span_residual(n1 - cplx(0.0, 1.0) * n2, g, p, opt.radius);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace nct
