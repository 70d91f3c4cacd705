#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/sin_pi.hpp>

#include "dcone/error.hpp"
#include "dcone/grid.hpp"

using namespace dcone;

namespace {

PeriodicField random_trig(const PeriodicGrid& g, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
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

double max_err(const PeriodicField& f, double (*ref)(double)) {
  double e = 0.0;
  for (int j = 0; j < f.size(); ++j) e = std::max(e, std::abs(f[j] - ref(f.grid().node(j))));
  return e;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no dcone::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Grid, SpacingMatchesDefinition) {
  EXPECT_DOUBLE_EQ(make_grid(16).spacing(), kPi / 8.0);
  EXPECT_DOUBLE_EQ(make_grid(2048).spacing(), kTwoPi / 2048.0);
}

TEST(Grid, RejectsOddAndSmall) {
  EXPECT_EQ(code_of([] { make_grid(15); }), ErrorCode::OddN);
  EXPECT_EQ(code_of([] { make_grid(14); }), ErrorCode::GridTooSmall);
  EXPECT_EQ(code_of([] { make_grid(0); }), ErrorCode::GridTooSmall);
}

TEST(Grid, NodesIncreasingFromZero) {
  const PeriodicGrid g = make_grid(64);
  EXPECT_EQ(g.node(0), 0.0);
  for (int j = 1; j < g.size(); ++j) EXPECT_GT(g.node(j), g.node(j - 1));
  EXPECT_LT(g.node(g.size() - 1), kTwoPi);
}

TEST(Field, RejectsNonFiniteAndWrongSize) {
  const PeriodicGrid g = make_grid(16);
  std::vector<double> v(16, 1.0);
  v[3] = std::nan("");
  EXPECT_EQ(code_of([&] { PeriodicField(g, v); }), ErrorCode::NonFinite);
  EXPECT_EQ(code_of([&] { PeriodicField(g, std::vector<double>(15, 1.0)); }), ErrorCode::IncompatibleGrids);
}

TEST(Field, ArithmeticNeedsSameGrid) {
  const PeriodicField a = PeriodicField::constant(make_grid(16), 1.0);
  const PeriodicField b = PeriodicField::constant(make_grid(32), 1.0);
  EXPECT_EQ(code_of([&] { (void)(a + b); }), ErrorCode::IncompatibleGrids);
}

TEST(Deriv, SecondDerivativeOfCosine) {
  const PeriodicField f = PeriodicField::sample(make_grid(2048), [](double t) { return std::cos(t); });
  EXPECT_LE(max_err(deriv(f, 2), [](double t) { return -std::cos(t); }), 1e-8);
}

TEST(Deriv, ConstantHasZeroDerivative) {
  const PeriodicField f = PeriodicField::constant(make_grid(64), 1.0);
  for (int k = 1; k <= 4; ++k) {
    const PeriodicField d = deriv(f, k);
    for (double x : d.values()) EXPECT_EQ(x, 0.0);
  }
}

// Samples are taken from the exact dyadic argument so that the input carries
// only half an ulp of noise.
TEST(Deriv, FourthDerivativeOfSin3t) {
  const int n = 2048;
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = boost::math::sin_pi(2.0 * ((3 * j) % n) / n);
  const PeriodicField d = deriv(PeriodicField(make_grid(n), v), 4);
  double e = 0.0;
  for (int j = 0; j < n; ++j) e = std::max(e, std::abs(d[j] - 81.0 * v[j]));
  EXPECT_LE(e, 1e-5);
}

TEST(Deriv, RejectsInvalidOrder) {
  const PeriodicField f = PeriodicField::constant(make_grid(16), 1.0);
  EXPECT_EQ(code_of([&] { deriv(f, 0); }), ErrorCode::InvalidOrder);
  EXPECT_EQ(code_of([&] { deriv(f, 5); }), ErrorCode::InvalidOrder);
}

// Orders 1..3 are fitted over n = 128..2048. For order 4 the rounding floor
// (~eps / spacing^4) overtakes the truncation error above n = 512.
TEST(Deriv, FourthOrderConvergenceOnSin5t) {
  // Analytic derivatives of sin 5t: 5 cos, -25 sin, -125 cos, 625 sin.
  auto exact = [](int k, double t) {
    const double s = std::pow(5.0, k);
    switch (k) {
      case 1: return s * std::cos(5 * t);
      case 2: return -s * std::sin(5 * t);
      case 3: return -s * std::cos(5 * t);
      default: return s * std::sin(5 * t);
    }
  };
  for (int k = 1; k <= 4; ++k) {
    std::vector<double> lx, ly;
    for (int n = 128; n <= (k == 4 ? 512 : 2048); n *= 2) {
      const PeriodicField f = PeriodicField::sample(make_grid(n), [](double t) { return std::sin(5 * t); });
      const PeriodicField d = deriv(f, k);
      double e = 0.0;
      for (int j = 0; j < n; ++j) e = std::max(e, std::abs(d[j] - exact(k, f.grid().node(j))));
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(e));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i] / lx.size();
      my += ly[i] / ly.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = -sxy / sxx;
    EXPECT_NEAR(slope, 4.0, 0.3) << "order " << k;
  }
}

TEST(Integrate, Examples) {
  for (int n : {16, 64, 1024}) {
    const PeriodicGrid g = make_grid(n);
    EXPECT_NEAR(integrate(PeriodicField::sample(g, [](double t) { return std::cos(t) * std::cos(t); })), kPi, 1e-14);
    EXPECT_NEAR(integrate(PeriodicField::constant(g, 1.0)), kTwoPi, 1e-14);
    EXPECT_NEAR(integrate(PeriodicField::sample(g, [](double t) { return std::sin(t); })), 0.0, 1e-14);
  }
}

TEST(Integrate, InnerIsWeightedDot) {
  const PeriodicGrid g = make_grid(32);
  const PeriodicField a = random_trig(g, 4, 1), b = random_trig(g, 4, 2);
  double s = 0.0;
  for (int j = 0; j < 32; ++j) s += a[j] * b[j];
  EXPECT_NEAR(inner(a, b), s * g.spacing(), 1e-13);
}

TEST(DerivProperties, Linearity) {
  const PeriodicGrid g = make_grid(256);
  const PeriodicField f = random_trig(g, 7, 3), h = random_trig(g, 7, 4);
  const double a = 1.7, b = -0.3;
  for (int k = 1; k <= 4; ++k) {
    const PeriodicField lhs = deriv(a * f + b * h, k);
    const PeriodicField rhs = a * deriv(f, k) + b * deriv(h, k);
    const double bound = 64.0 * 2.2e-16 * (std::abs(a) * f.max_abs() + std::abs(b) * h.max_abs()) /
                         std::pow(g.spacing(), k);
    EXPECT_LE((lhs - rhs).max_abs(), bound) << "order " << k;
  }
}

TEST(DerivProperties, IntegralOfDerivativeVanishes) {
  const PeriodicGrid g = make_grid(128);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PeriodicField f = random_trig(g, 20, seed);
    const PeriodicField d = deriv(f, 1);
    EXPECT_LE(std::abs(integrate(d)), 1e-12 * (1.0 + d.max_abs()));
  }
}

TEST(DerivProperties, ShiftEquivarianceIsExact) {
  const PeriodicGrid g = make_grid(64);
  const PeriodicField f = random_trig(g, 9, 11);
  for (int m : {1, 5, -3, 63, 200}) {
    for (int k = 1; k <= 4; ++k) {
      const PeriodicField a = deriv(shift(f, m), k);
      const PeriodicField b = shift(deriv(f, k), m);
      for (int j = 0; j < g.size(); ++j) ASSERT_EQ(a[j], b[j]) << "m=" << m << " k=" << k << " j=" << j;
    }
  }
}

TEST(Field, ShiftMovesProfileForward) {
  const PeriodicGrid g = make_grid(16);
  std::vector<double> v(16, 0.0);
  v[2] = 1.0;
  const PeriodicField s = PeriodicField(g, v).shifted(3);
  EXPECT_EQ(s[5], 1.0);
  EXPECT_EQ(PeriodicField(g, v).shifted(-3)[15], 1.0);
}
