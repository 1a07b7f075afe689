#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nctgabor/error.hpp"
#include "nctgabor/geometry.hpp"
#include "nctgabor/run.hpp"

using namespace nct;

namespace {

const TorusParams kScalar{0.5, 0.5, 0, 0, 1};
const TorusParams kTwo{0.5, 1.0 / 3, 1, 1, 2};

GridSpec grid(int q) { return GridSpec{16.0, 512, q}; }

double rel(const GridSignal& a, const GridSignal& b) { return norm(a - b) / norm(b); }

}  // namespace

TEST(Connection, CurvatureIsConstant) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    GridSignal f = random_probe(grid(2), rng, 1.0);
    GridSignal f12 = covariant(covariant(f, 2), 1) - covariant(covariant(f, 1), 2);
    EXPECT_LT(rel(f12, cplx(0.0, -kTwoPi) * f), 1e-9);
  }
}

TEST(Connection, IntertwinesShifts) {
  std::mt19937_64 rng(12);
  GridSignal f = random_probe(grid(2), rng, 1.0);
  PhasePoint nu{0.75, 1, -0.5, 1};
  GridSignal shifted = tf_shift(f, nu, ShiftOrder::TimeFrequency);
  for (int j : {1, 2}) {
    double coord = j == 1 ? nu.lambda : nu.gamma;
    GridSignal lhs = covariant(shifted, j);
    GridSignal rhs = tf_shift(covariant(f, j), nu, ShiftOrder::TimeFrequency) + cplx(0.0, kTwoPi * coord) * shifted;
    EXPECT_LT(rel(lhs, rhs), 1e-9) << j;
  }
}

TEST(Connection, GaussianIsAnnihilatedByHolomorphicPart) {
  GridSignal g = gaussian(grid(3));
  GridSignal z = covariant(g, 1) + cplx(0.0, 1.0) * covariant(g, 2);
  EXPECT_LT(norm(z), 1e-10 * norm(covariant(g, 1)));
  GridSignal anti = covariant(g, 1) - cplx(0.0, 1.0) * covariant(g, 2);
  EXPECT_GT(norm(anti), 1.0);
}

TEST(Connection, SkewAdjoint) {
  std::mt19937_64 rng(13);
  GridSignal f = random_probe(grid(2), rng, 1.0), g = random_probe(grid(2), rng, 1.0);
  for (int j : {1, 2}) EXPECT_LT(std::abs(inner(covariant(f, j), g) + inner(f, covariant(g, j))), 1e-10);
  EXPECT_THROW(covariant(f, 3), Error);
}

TEST(Derivation, LeibnizAndTrace) {
  std::mt19937_64 rng(14);
  for (const TorusParams& p : {kScalar, kTwo}) {
    LatticeSeq a = random_sequence(p, LatticeKind::TimeFrequency, 2.0, rng);
    LatticeSeq b = random_sequence(p, LatticeKind::TimeFrequency, 2.0, rng);
    for (int j : {1, 2}) {
      LatticeSeq lhs = derive(twisted_conv(a, b), j);
      LatticeSeq rhs = twisted_conv(derive(a, j), b) + twisted_conv(a, derive(b, j));
      EXPECT_LT((lhs - rhs).l1(), 1e-12 * lhs.l1());
      EXPECT_EQ(trace_l(derive(a, j)), cplx(0.0));
      LatticeSeq star = derive(twisted_star(a), j);
      EXPECT_LT((star - twisted_star(derive(a, j))).l1(), 1e-12 * star.l1());
    }
  }
  EXPECT_THROW(derive(LatticeSeq::delta(kScalar, LatticeKind::TimeFrequency, 1.0), 0), Error);
}

TEST(Derivation, InnerProductLeibniz) {
  std::mt19937_64 rng(15);
  GridSignal f = random_probe(grid(2), rng, 1.0), g = gaussian(grid(2));
  for (int j : {1, 2}) {
    LatticeSeq lhs = derive(inner_left(f, g, kTwo, 6.0), j);
    LatticeSeq rhs = inner_left(covariant(f, j), g, kTwo, 6.0) + inner_left(f, covariant(g, j), kTwo, 6.0);
    EXPECT_LT((lhs - rhs).l1(), 1e-7 * lhs.l1()) << j;
  }
}

TEST(Derivation, DualPairProjectionDerivative) {
  GridSignal g = gaussian(grid(1));
  FrameSystem sys(g, kScalar, 6.0);
  GridSignal h = canonical_dual(sys);
  LatticeSeq proj = inner_left(g, h, kScalar, 6.0);
  for (int j : {1, 2}) {
    LatticeSeq lhs = derive(proj, j);
    LatticeSeq rhs = inner_left(covariant(g, j), h, kScalar, 6.0) + inner_left(g, covariant(h, j), kScalar, 6.0);
    EXPECT_LT((lhs - rhs).l1(), 1e-6 * lhs.l1()) << j;
  }
}

TEST(Derivation, DualPairIdentity) {
  GridSignal g = gaussian(grid(2));
  FrameSystem sys(g, kTwo, 6.0);
  GridSignal h = canonical_dual(sys);
  std::mt19937_64 rng(16);
  GridSignal f1 = random_probe(grid(2), rng, 1.0), f2 = random_probe(grid(2), rng, 1.0);
  for (int j : {1, 2}) {
    LatticeSeq sum = twisted_conv(inner_left(f1, covariant(g, j), kTwo, 6.0), inner_left(h, f2, kTwo, 6.0)) +
                     twisted_conv(inner_left(f1, g, kTwo, 6.0), inner_left(covariant(h, j), f2, kTwo, 6.0));
    // products of truncated sequences are only complete away from the edge
    EXPECT_LT(sum.restricted(4.0).l1(), 1e-6) << j;
    LatticeSeq adjoint = inner_right(covariant(g, j), h, kTwo, 6.0) + inner_right(g, covariant(h, j), kTwo, 6.0);
    EXPECT_LT(adjoint.l1(), 1e-6) << j;
  }
}

TEST(Derivation, TraceAntisymmetry) {
  std::mt19937_64 rng(17);
  for (const TorusParams& p : {kScalar, kTwo}) {
    GridSignal f1 = random_probe(grid(p.q), rng, 1.0), f2 = random_probe(grid(p.q), rng, 1.0);
    for (int j : {1, 2}) {
      cplx lhs = trace_l(inner_left(covariant(f1, j), f2, p, 6.0));
      cplx rhs = trace_l(inner_left(f1, covariant(f2, j), p, 6.0));
      EXPECT_LT(std::abs(lhs + rhs), 1e-8) << j;
      EXPECT_GT(std::abs(lhs), 1e-3);
    }
  }
}

TEST(Invariants, RejectBadInput) {
  LatticeSeq zero(kScalar, LatticeKind::TimeFrequency, 2.0);
  EXPECT_THROW(chern_trace(zero), Error);
  EXPECT_THROW(energy(zero), Error);
  LatticeSeq twice = 2.0 * LatticeSeq::delta(kScalar, LatticeKind::TimeFrequency, 2.0);
  try {
    chern_trace(twice);
    FAIL() << "expected NotAProjection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAProjection);
  }
  LatticeSeq adj = LatticeSeq::delta(kScalar, LatticeKind::Adjoint, 2.0);
  EXPECT_THROW(chern_trace(adj), Error);
}

TEST(Invariants, IdentityHasZeroChernAndEnergy) {
  LatticeSeq one = LatticeSeq::delta(kTwo, LatticeKind::TimeFrequency, 2.0);
  EXPECT_EQ(chern_trace(one), cplx(0.0));
  EXPECT_EQ(energy(one), 0.0);
}

TEST(Pipeline, ScalarGaussianIsASoliton) {
  WindowSpec w;
  ChernReport r = soliton_experiment(kScalar, w, grid(1));
  EXPECT_NEAR(r.c1.real(), 1.0, 1e-6);
  EXPECT_NEAR(r.c1.imag(), 0.0, 1e-6);
  EXPECT_NEAR(r.c1_sum.real(), r.c1.real(), 1e-6);
  EXPECT_EQ(r.c1_rounded, 1);
  EXPECT_NEAR(r.energy, 1.0, 1e-6);
  EXPECT_NEAR(r.energy_window, r.energy, 1e-6);
  EXPECT_LT(std::abs(r.gap), 1e-6);
  EXPECT_LT(r.sd_plus, 1e-5);
  EXPECT_GT(r.sd_minus, 1e-2);
  EXPECT_LT(r.w_residual_plus, 1e-6);
  EXPECT_LT(r.wexler_raz, 1e-6);
  EXPECT_LT(r.idempotence, 1e-6);
  EXPECT_LT(r.self_adjointness, 1e-6);
  EXPECT_GT(r.lower_bound, 0.0);
}

TEST(Pipeline, PerturbedWindowLeavesTheMinimum) {
  WindowSpec w;
  w.kind = WindowKind::Perturbed;
  w.order = 2;
  w.eps = 0.05;
  ChernReport r = soliton_experiment(kScalar, w, grid(1));
  EXPECT_EQ(r.c1_rounded, 1);
  EXPECT_NEAR(r.c1.real(), 1.0, 1e-6);
  // g + eps h2 with unit-norm parts: E = (1 + 5 eps^2) / (1 + eps^2)
  EXPECT_NEAR(r.gap, 4 * w.eps * w.eps / (1 + w.eps * w.eps), 1e-6);
  EXPECT_GT(r.sd_plus, 1e-3);
}

TEST(Pipeline, NonIntegralDensityStillObeysTheBound) {
  WindowSpec w;
  ChernReport r = soliton_experiment(TorusParams{0.49, 0.49, 0, 0, 1}, w, grid(1));
  EXPECT_GE(r.energy, std::abs(r.c1) - 1e-4);
  EXPECT_LT(std::abs(r.c1.imag()), 1e-6);
}

TEST(Windows, Builders) {
  WindowSpec w;
  w.kind = WindowKind::LiftedGaussian;
  GridSignal lifted = build_window(w, grid(2), kTwo);
  EXPECT_EQ(lifted.channels(), 2);
  w.kind = WindowKind::Hermite;
  w.order = 3;
  GridSignal h3 = build_window(w, grid(1), kScalar);
  EXPECT_LT(std::abs(inner(h3, gaussian(grid(1)))), 1e-12);
  w.kind = WindowKind::Gaussian;
  w.weights = {1.0};
  EXPECT_THROW(build_window(w, grid(2), kTwo), Error);
  w.weights.clear();
  w.kind = WindowKind::File;
  w.path = "/nonexistent/window.txt";
  EXPECT_THROW(build_window(w, grid(1), kScalar), Error);
  EXPECT_FALSE(w.describe().empty());
}
