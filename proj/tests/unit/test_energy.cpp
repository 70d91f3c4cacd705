#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dcone/energy.hpp"
#include "dcone/folds.hpp"

using namespace dcone;

namespace {

PeriodicField random_trig(const PeriodicGrid& g, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> a(degree + 1), b(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    a[m] = nd(rng);
    b[m] = nd(rng);
  }
  return PeriodicField::sample(g, [&](double t) {
    double s = 0.0;
    for (int m = 0; m <= degree; ++m) s += a[m] * std::cos(m * t) + b[m] * std::sin(m * t);
    return s;
  });
}

PeriodicField cosine(int n) { return PeriodicField::sample(make_grid(n), [](double t) { return std::cos(t); }); }

}  // namespace

TEST(Energy, KernelOfOperator) { EXPECT_LE(energy(cosine(2048)), 1e-12); }

TEST(Energy, Constant) { EXPECT_NEAR(energy(PeriodicField::constant(make_grid(256), 1.0)), kTwoPi, 1e-13); }

TEST(Energy, OnePlusCos2t) {
  const PeriodicField w = PeriodicField::sample(make_grid(2048), [](double t) { return 1.0 + std::cos(2 * t); });
  EXPECT_NEAR(energy(w) / (11.0 * kPi), 1.0, 1e-8);
}

TEST(Constraint, Examples) {
  EXPECT_NEAR(constraint(PeriodicField::constant(make_grid(256), 1.0)), kTwoPi, 1e-13);
  EXPECT_LE(std::abs(constraint(cosine(8192))), 1e-12);
  const PeriodicField w = PeriodicField::sample(make_grid(2048), [](double t) { return 1.0 + 0.5 * std::sin(t); });
  EXPECT_NEAR(constraint(w), kTwoPi, 1e-10);
}

TEST(Evaluate, ReportsObstacleViolation) {
  const EnergyReport r = evaluate(cosine(256));
  EXPECT_NEAR(r.obstacle_violation, 2.0, 1e-12);
  EXPECT_GE(r.energy, 0.0);
  EXPECT_EQ(evaluate(PeriodicField::constant(make_grid(64), 1.5)).obstacle_violation, 0.0);
}

TEST(Gradients, VanishOnCosine) {
  const Gradients g = gradients(cosine(2048));
  EXPECT_LE(g.energy.max_abs(), 1e-6);
  EXPECT_LE(g.constraint.max_abs(), 1e-6);
}

TEST(Gradients, ConstantField) {
  const Gradients g = gradients(PeriodicField::constant(make_grid(64), 1.0));
  for (int j = 0; j < 64; ++j) {
    EXPECT_NEAR(g.energy[j], 2.0, 1e-13);
    EXPECT_NEAR(g.constraint[j], 2.0, 1e-13);
  }
}

// Directional central differences of the discrete functionals, step 1e-5.
TEST(Gradients, MatchCentralDifferences) {
  for (int n : {512, 2048}) {
    std::mt19937_64 rng(42 + n);
    const PeriodicGrid grid = make_grid(n);
    const PeriodicField w = random_trig(grid, 5, rng);
    const Gradients g = gradients(w);
    const double eps = 1e-5;
    for (int dir = 0; dir < 20; ++dir) {
      const PeriodicField df = random_trig(grid, 12, rng);
      const PeriodicField wp = w + eps * df, wm = w + (-eps) * df;
      const double fd_e = (energy(wp) - energy(wm)) / (2 * eps);
      const double fd_c = (constraint(wp) - constraint(wm)) / (2 * eps);
      EXPECT_LE(std::abs(inner(g.energy, df) - fd_e), 1e-6 * std::abs(fd_e)) << "n=" << n << " dir " << dir;
      EXPECT_LE(std::abs(inner(g.constraint, df) - fd_c), 1e-6 * std::abs(fd_c)) << "n=" << n << " dir " << dir;
    }
  }
}

TEST(ElResidual, CosineAnyLambda) {
  for (double lam : {-3.0, 0.5, 13.0}) EXPECT_LE(el_residual(cosine(256), lam).max_abs(), 1e-6);
}

TEST(ElResidual, ConstantAtMinusOne) {
  EXPECT_LE(el_residual(PeriodicField::constant(make_grid(128), 1.0), -1.0).max_abs(), 1e-14);
}

TEST(ElResidual, IsHalfTheLagrangianGradient) {
  std::mt19937_64 rng(7);
  const PeriodicField w = random_trig(make_grid(256), 6, rng);
  const Gradients g = gradients(w);
  const double lam = 2.5;
  const PeriodicField r = el_residual(w, lam);
  const PeriodicField half = 0.5 * (g.energy + lam * g.constraint);
  EXPECT_LE((r - half).max_abs(), 1e-12 * (1.0 + r.max_abs()));
}

TEST(ElResidual, FoldProfileSolvesItsEquation) {
  const SingleFoldSolution s = solve_single_fold(make_grid(1024));
  const PeriodicField r = el_residual(s.candidate.w, s.lambda);
  const PeriodicGrid& g = s.candidate.w.grid();
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double d = std::abs(g.node(j) - kPi);
    if (d < s.z - 4 * g.spacing()) worst = std::max(worst, std::abs(r[j]));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(EnergyProperties, RotationInvariance) {
  std::mt19937_64 rng(9);
  const PeriodicField w = random_trig(make_grid(512), 8, rng);
  for (int m : {1, 17, 300}) {
    EXPECT_NEAR(energy(shift(w, m)), energy(w), 1e-12 * energy(w));
    EXPECT_NEAR(constraint(shift(w, m)), constraint(w), 1e-12 * (1.0 + std::abs(constraint(w))));
  }
}

TEST(EnergyProperties, ZeroEnergyIffZeroConstraintGradient) {
  const PeriodicField c = PeriodicField::sample(make_grid(512), [](double t) { return 0.3 * std::cos(t) - 2.0 * std::sin(t); });
  EXPECT_LE(energy(c), 1e-12);
  EXPECT_LE(gradients(c).constraint.max_abs(), 1e-6);
  std::mt19937_64 rng(5);
  const PeriodicField w = random_trig(make_grid(512), 4, rng);
  EXPECT_GT(energy(w), 1e-3);
  EXPECT_GT(gradients(w).constraint.max_abs(), 1e-3);
}
