#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "nctgabor/error.hpp"
#include "nctgabor/frame.hpp"
#include "nctgabor/run.hpp"

using namespace nct;

namespace {

const TorusParams kScalar{0.5, 0.5, 0, 0, 1};
const TorusParams kTwo{0.5, 1.0 / 3, 1, 1, 2};

GridSpec grid(int q) { return GridSpec{16.0, 512, q}; }

double rel(const GridSignal& a, const GridSignal& b) { return norm(a - b) / norm(b); }

// Theta-function closed forms for the Gaussian at alpha = beta = 1/2.
double theta_sum(bool alternating) {
  double s = 0.0;
  for (int n = -20; n <= 20; ++n) s += (alternating && (n % 2 != 0) ? -1.0 : 1.0) * std::exp(-2.0 * kPi * n * n);
  return s;
}

struct ScalarDual : ::testing::Test {
  static void SetUpTestSuite() {
    sys = new FrameSystem(gaussian(grid(1)), kScalar, 6.0);
    canonical_dual(*sys);
  }
  static void TearDownTestSuite() {
    delete sys;
    sys = nullptr;
  }
  static FrameSystem* sys;
};
FrameSystem* ScalarDual::sys = nullptr;

}  // namespace

TEST(Section, HermitianPositive) {
  LatticeSeq b = adjoint_gram(gaussian(grid(2)), kTwo, 4.0);
  AdjointSection sec(b, 4.0);
  const Eigen::MatrixXcd& k = sec.matrix();
  EXPECT_LT((k - k.adjoint()).norm(), 1e-14 * k.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  Eigen::VectorXcd v = sec.from_seq(sec.to_seq(Eigen::VectorXcd::Ones(sec.size())));
  EXPECT_NEAR((v - Eigen::VectorXcd::Ones(sec.size())).norm(), 0.0, 1e-15);
}

TEST(Section, IterativeBoundsMatchDenseSpectrum) {
  // sections of 21 and 35 points sit below and just above twice the probe block
  for (const TorusParams& p : {kScalar, kTwo, TorusParams{0.25, 0.5, 0, 0, 1}, TorusParams{0.35, 0.5, 0, 0, 1}}) {
    LatticeSeq b = adjoint_gram(gaussian(grid(p.q)), p, 6.0);
    AdjointSection sec(b, 6.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sec.matrix(), Eigen::EigenvaluesOnly);
    FrameBounds fb = section_bounds(sec, 16, 1);
    EXPECT_NEAR(fb.lower, es.eigenvalues().minCoeff(), 1e-10 * es.eigenvalues().maxCoeff());
    EXPECT_NEAR(fb.upper, es.eigenvalues().maxCoeff(), 1e-10 * es.eigenvalues().maxCoeff());
  }
}

TEST(Bounds, InsideTheExactInterval) {
  const double A = 4.0 / std::sqrt(2.0) * std::pow(theta_sum(true), 2);
  const double B = 4.0 / std::sqrt(2.0) * std::pow(theta_sum(false), 2);
  FrameSystem sys(gaussian(grid(1)), kScalar, 6.0);
  FrameBounds fb = frame_bounds(sys);
  EXPECT_GE(fb.lower, A - 1e-9);
  EXPECT_LE(fb.upper, B + 1e-9);
  EXPECT_LT((fb.lower - A) / A, 2e-3);
  EXPECT_LT((B - fb.upper) / B, 2e-3);
  ASSERT_TRUE(sys.bounds().has_value());
}

TEST(Bounds, NotAFrameAboveCriticalDensity) {
  FrameSystem sys(gaussian(grid(1)), TorusParams{2.0, 2.0, 0, 0, 1}, 6.0);
  try {
    frame_bounds(sys);
    FAIL() << "expected NotAFrame";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAFrame);
  }
}

TEST(Verdict, CriticalDensityIsDetected) {
  FrameVerdict crit = frame_verdict(gaussian(grid(1)), TorusParams{1.0, 1.0, 0, 0, 1}, 4.0);
  EXPECT_FALSE(crit.is_frame);
  EXPECT_LT(crit.lower_doubled, 0.5 * crit.lower);
  FrameVerdict ok = frame_verdict(gaussian(grid(1)), kScalar, 4.0);
  EXPECT_TRUE(ok.is_frame);
}

TEST(Verdict, AgreesWithLaurentSymbol) {
  for (double a : {1.0 / 3, 0.5, 1.0})
    for (double b : {1.0 / 3, 0.5, 1.0}) {
      TorusParams p{a, b, 0, 0, 1};
      GridSignal g = gaussian(grid(1));
      FrameVerdict v = frame_verdict(g, p, 4.0);
      LaurentSymbol s = laurent_symbol(g, p, 64, 6.0);
      EXPECT_EQ(v.is_frame, s.riesz) << a << " " << b;
    }
}

TEST(Laurent, GaussianAndZeroWindow) {
  LaurentSymbol s = laurent_symbol(gaussian(grid(1)), kScalar);
  EXPECT_TRUE(s.riesz);
  EXPECT_GT(s.min_abs, 0.0);
  EXPECT_LT(s.max_imag, 1e-10);
  LaurentSymbol z = laurent_symbol(GridSignal(grid(1)), kScalar);
  EXPECT_FALSE(z.riesz);
  EXPECT_EQ(z.max_abs, 0.0);
  EXPECT_THROW(laurent_symbol(gaussian(grid(1)), TorusParams{0.49, 0.49, 0, 0, 1}), Error);
}

TEST(Laurent, ChannelConstantReducesToScalarSum) {
  GridSignal scalar = gaussian(grid(1));
  LaurentSymbol F = laurent_symbol(gaussian(grid(2)), kTwo, 64, 6.0);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {5, 17}, {32, 32}, {40, 3}}) {
    double t1 = i / 64.0, t2 = j / 64.0;
    cplx sum = 0.0;
    for (int m = -8; m <= 8; ++m)
      for (int n = -8; n <= 8; ++n) {
        PhasePoint nu{n / (kTwo.beta * kTwo.q), 0, m / kTwo.alpha, 0};
        sum += inner(scalar, tf_shift(scalar, nu, ShiftOrder::TimeFrequency)) * unit_phase(kTwo.q * m * t1 + n * t2);
      }
    sum *= double(kTwo.q);
    EXPECT_NEAR(F.values[i * 64 + j], sum.real(), 1e-10);
    EXPECT_NEAR(sum.imag(), 0.0, 1e-10);
  }
}

TEST(Laurent, Lift) {
  GridSignal scalar = gaussian(grid(1));
  EXPECT_EQ(norm(lift_scalar_window(scalar, kScalar) - scalar), 0.0);
  GridSignal lifted = lift_scalar_window(scalar, kTwo);
  EXPECT_EQ(lifted.channels(), 2);
  FrameSystem sys(lifted, kTwo, 6.0);
  EXPECT_GT(frame_bounds(sys).lower, 0.0);
  EXPECT_THROW(lift_scalar_window(scalar, TorusParams{0.49, 0.49, 1, 1, 2}), Error);
}

TEST(Cg, FailurePaths) {
  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Identity(4, 4);
  indefinite(2, 2) = -1.0;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Ones(4);
  try {
    conjugate_gradient(indefinite, rhs, 1e-12);
    FAIL() << "expected CgStagnation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CgStagnation);
  }
  Eigen::MatrixXcd spd = Eigen::MatrixXcd::Identity(50, 50);
  for (int i = 0; i < 50; ++i) spd(i, i) = 1.0 + i * i;
  EXPECT_THROW(conjugate_gradient(spd, Eigen::VectorXcd::Ones(50), 1e-14, 3), Error);
  CgResult ok = conjugate_gradient(spd, Eigen::VectorXcd::Ones(50), 1e-12);
  EXPECT_LT((spd * ok.x - Eigen::VectorXcd::Ones(50)).norm(), 1e-10);
}

TEST(FrameOperator, CommutesWithLatticeShifts) {
  std::mt19937_64 rng(1);
  FrameSystem sys(gaussian(grid(2)), kTwo, 6.0);
  GridSignal f = random_probe(grid(2), rng, 1.0);
  PhasePoint nu = lattice_basis(kTwo, LatticeKind::TimeFrequency).point(1, -2);
  GridSignal lhs = frame_operator(sys, tf_shift(f, nu, ShiftOrder::TimeFrequency));
  GridSignal rhs = tf_shift(frame_operator(sys, f), nu, ShiftOrder::TimeFrequency);
  EXPECT_LT(rel(lhs, rhs), 1e-7);
}

TEST(FrameOperator, QuadraticFormIsCoefficientEnergy) {
  std::mt19937_64 rng(2);
  GridSignal g = gaussian(grid(1));
  FrameSystem sys(g, kScalar, 6.0);
  GridSignal f = random_probe(grid(1), rng, 1.0);
  double energy = 0.0;
  inner_left(f, g, kScalar, 6.0).for_each([&](long, long, cplx v) { energy += std::norm(v); });
  cplx form = inner(frame_operator(sys, f), f);
  EXPECT_NEAR(form.real(), energy, 1e-10 * energy);
  EXPECT_NEAR(form.imag(), 0.0, 1e-10 * energy);
}

TEST_F(ScalarDual, WexlerRazAndReconstruction) {
  const GridSignal& g = sys->window();
  const GridSignal& h = *sys->dual();
  EXPECT_LT(wexler_raz_residual(g, h, kScalar, 6.0), 1e-6);
  EXPECT_LT(sys->dual_diagnostics().algebraic_residual, 1e-10);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    GridSignal f = random_probe(grid(1), rng);
    EXPECT_LT(reconstruction_residual(f, g, h, kScalar, 6.0), 1e-6);
    GridSignal c = random_probe(grid(1), rng, 1.0);
    EXPECT_LT(rel(frame_operator(*sys, inverse_frame_operator(*sys, c)), c), 1e-6);
  }
}

TEST(Reconstruction, ImprovesWithRadius) {
  GridSpec spec{32.0, 1024, 1};
  TorusParams p{1.0, 0.5, 0, 0, 1};
  GridSignal g = gaussian(spec);
  std::mt19937_64 rng(9);
  GridSignal f = random_probe(spec, rng);
  double prev = 1e300;
  for (double radius : {4.0, 6.0, 8.0}) {
    FrameSystem sys(g, p, radius);
    GridSignal h = canonical_dual(sys);
    double r = reconstruction_residual(f, g, h, p, radius);
    EXPECT_LT(r, prev) << radius;
    prev = r;
  }
}

TEST(Lift, CrossChannelTermsVanish) {
  GridSignal lifted = lift_scalar_window(gaussian(grid(1)), kTwo);
  double self = std::norm(norm(lifted));
  for (int c = 0; c < kTwo.q; ++c) {
    cplx v = inner(lifted, modulate(lifted, 0.0, c));
    EXPECT_NEAR(std::abs(v), c == 0 ? self : 0.0, 1e-12) << c;
  }
  // a channel shift leaves a channel-constant window unchanged
  EXPECT_LT(norm(translate(lifted, 0.0, 1) - lifted), 1e-14);
}

TEST_F(ScalarDual, DetunedDualFailsBoth) {
  const GridSignal& g = sys->window();
  GridSignal bad = 1.01 * *sys->dual();
  std::mt19937_64 rng(4);
  GridSignal f = random_probe(grid(1), rng);
  EXPECT_GT(wexler_raz_residual(g, bad, kScalar, 6.0), 1e-3);
  EXPECT_GT(reconstruction_residual(f, g, bad, kScalar, 6.0), 1e-3);
}

TEST_F(ScalarDual, ProjectionProperties) {
  const GridSignal& g = sys->window();
  const GridSignal& h = *sys->dual();
  DualPair pair = project_dual_pair(g, h, kScalar, 6.0);
  EXPECT_LT(pair.idempotence, 1e-6);
  EXPECT_LT(pair.self_adjointness, 1e-6);
  EXPECT_NEAR(std::abs(trace_l(pair.projection) - kScalar.density()), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(inner(g, h) - kScalar.density()), 0.0, 1e-8);
}

TEST_F(ScalarDual, NonCanonicalDualIsIdempotentButNotSelfAdjoint) {
  const GridSignal& g = sys->window();
  const GridSignal& h = *sys->dual();
  std::mt19937_64 rng(5);
  GridSignal f = random_probe(grid(1), rng, 1.0);
  // remove the part of f in the adjoint span of g
  GridSignal w = f - act_right(g, inner_right(h, f, kScalar, 6.0));
  EXPECT_LT(inner_right(g, w, kScalar, 6.0).l1(), 1e-8);
  GridSignal h2 = h + 0.1 * w;
  DualPair pair = project_dual_pair(g, h2, kScalar, 6.0, false);
  EXPECT_LT(pair.idempotence, 1e-6);
  LatticeSeq a = pair.projection;
  EXPECT_GT((twisted_star(a) - a).l1(), 1e-3);
  EXPECT_THROW(project_dual_pair(g, h2, kScalar, 6.0, true), Error);
  EXPECT_THROW(project_dual_pair(g, 1.01 * h, kScalar, 6.0), Error);
}

TEST_F(ScalarDual, AdjointSpanReconstruction) {
  const GridSignal& g = sys->window();
  const GridSignal& h = *sys->dual();
  std::mt19937_64 rng(6);
  LatticeSeq b = random_sequence(kScalar, LatticeKind::Adjoint, 2.0, rng);
  GridSignal f = act_right(g, b);
  EXPECT_LT(rel(act_right(g, inner_right(h, f, kScalar, 6.0)), f), 1e-6);
  EXPECT_LT(adjoint_span_residual(f, g, kScalar, 6.0), 1e-8);
  GridSignal off = random_probe(grid(1), rng);
  EXPECT_GT(adjoint_span_residual(off, g, kScalar, 6.0), 1e-3);
}

TEST(Tight, BoundsGaugeAndProjection) {
  GridSignal g = gaussian(grid(2));
  FrameSystem sys(g, kTwo, 6.0);
  GridSignal h = canonical_dual(sys);
  GridSignal t = canonical_tight(sys);
  EXPECT_LT((inner_left(g, h, kTwo, 6.0) - inner_left(t, t, kTwo, 6.0)).l1(), 1e-6);
  FrameSystem tight(t, kTwo, 6.0);
  FrameBounds fb = frame_bounds(tight);
  EXPECT_NEAR(fb.lower, 1.0, 1e-6);
  EXPECT_NEAR(fb.upper, 1.0, 1e-6);
  EXPECT_LT(wexler_raz_residual(t, t, kTwo, 6.0), 1e-6);
  DualPair pair = project_dual_pair(t, t, kTwo, 6.0);
  EXPECT_LT(pair.idempotence, 1e-6);
  EXPECT_LT(pair.self_adjointness, 1e-6);
}

TEST(Gauge, AdjointMultiplierInvariance) {
  GridSignal g = gaussian(grid(2));
  FrameSystem sys(g, kTwo, 6.0);
  canonical_dual(sys);
  std::mt19937_64 rng(7);
  GridSignal f1 = random_probe(grid(2), rng, 1.0), f2 = random_probe(grid(2), rng, 1.0);
  LatticeSeq T = LatticeSeq::delta(kTwo, LatticeKind::Adjoint, 1.0);
  T.set(1, 0, 0.02);
  T.set(0, -1, cplx(0.0, 0.01));
  FrameSystem moved(act_right(g, T), kTwo, 6.0);
  canonical_dual(moved);
  LatticeSeq before = inner_left(f1, inverse_frame_operator(sys, f2), kTwo, 6.0);
  LatticeSeq after = inner_left(act_right(f1, T), inverse_frame_operator(moved, act_right(f2, T)), kTwo, 6.0);
  EXPECT_LT((before - after).l1(), 1e-6);
}

TEST(FrameSystem, CachesAndErrors) {
  FrameSystem sys(gaussian(grid(1)), kScalar, 6.0);
  EXPECT_FALSE(sys.dual().has_value());
  EXPECT_THROW(inverse_frame_operator(sys, gaussian(grid(1))), Error);
  EXPECT_THROW(FrameSystem(gaussian(grid(2)), kScalar, 6.0), Error);
  canonical_dual(sys);
  EXPECT_TRUE(sys.dual().has_value());
  EXPECT_TRUE(sys.dual_coefficients().has_value());
  EXPECT_TRUE(sys.bounds().has_value());
}
