#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "si_euler/kernel.hpp"

using namespace si_euler;
using namespace si_euler::kernel;

namespace {

ScalarField sample_modes(const SymmetryFold& f, std::size_t n, const oracle::RandomModes& r) {
  return ScalarField::sample(f, n, [&](double t) { return r(t); });
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST(InvertHelmholtz, SineMode) {
  for (int m : {3, 4, 5, 8}) {
    const SymmetryFold f(m);
    const ScalarField g = ScalarField::sample(f, 64, [&](double t) { return std::sin(m * t); });
    const ScalarField G = invert_helmholtz(g);
    for (std::size_t k = 0; k < G.size(); ++k) {
      EXPECT_NEAR(G[k], std::sin(m * G.node(k)) / (4.0 - m * m), 1e-15);
    }
  }
}

TEST(InvertHelmholtz, ConstantsAndZero) {
  const SymmetryFold f(4);
  const ScalarField one = ScalarField::sample(f, 16, [](double) { return 1.0; });
  for (double v : invert_helmholtz(one).values()) EXPECT_NEAR(v, 0.25, 1e-15);
  const ScalarField zero = ScalarField::sample(f, 16, [](double) { return 0.0; });
  for (double v : invert_helmholtz(zero).values()) EXPECT_EQ(v, 0.0);
}

TEST(InvertHelmholtz, RoundTripWithForwardOperator) {
  std::mt19937_64 rng(42);
  for (int m : {3, 4, 5, 6}) {
    const SymmetryFold f(m);
    const auto r = oracle::random_modes(rng, m, 20);
    const ScalarField g = sample_modes(f, 128, r);
    const ScalarField G = invert_helmholtz(g);
    const ScalarField Gpp = derivative(derivative(G));
    double gmax = 0.0, err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      gmax = std::max(gmax, std::abs(g[k]));
      err = std::max(err, std::abs(4.0 * G[k] + Gpp[k] - g[k]));
    }
    EXPECT_LE(err, 1e-10 * gmax) << m;
  }
}

TEST(InvertHelmholtz, MatchesModeByModeOracle) {
  std::mt19937_64 rng(1);
  const SymmetryFold f(5);
  const auto r = oracle::random_modes(rng, 5, 12);
  const ScalarField G = invert_helmholtz(sample_modes(f, 64, r));
  for (std::size_t k = 0; k < G.size(); ++k) EXPECT_NEAR(G[k], r.helmholtz(G.node(k)), 1e-14);
}

TEST(KernelEvalFull, ClosedFormValues) {
  EXPECT_NEAR(kernel_eval_full(pi / 2.0), 0.125, 1e-15);
  EXPECT_NEAR(kernel_eval_full(pi / 4.0), 3.0 * pi / 8.0, 1e-15);
  EXPECT_NEAR(kernel_eval_full(1e-12), -0.125, 1e-11);
  EXPECT_NEAR(kernel_eval_full(0.0), -0.125, 1e-15);
  for (double t : {-3.0, -1.1, 0.4, 2.9}) EXPECT_NEAR(kernel_eval_full(t), oracle::full_kernel(t), 1e-14);
  EXPECT_NEAR(kernel_eval_full(0.3 + 2.0 * pi), kernel_eval_full(0.3), 1e-13);
}

TEST(KernelEvalFull, ConvolutionWithConstantIsQuarter) {
  EXPECT_NEAR(oracle::full_convolution([](double) { return 1.0; }, 0.37), 0.25, 1e-12);
}

TEST(KernelEvalM, Values) {
  const SymmetryFold f(4);
  EXPECT_NEAR(kernel_eval_m(0.0, f), 0.0, 1e-15);
  EXPECT_NEAR(kernel_eval_m(pi / 4.0, f), pi / 8.0, 1e-15);
  for (int m : {3, 5, 8}) {
    const SymmetryFold fm(m);
    EXPECT_NEAR(kernel_eval_m(0.3, fm), kernel_eval_m(0.3 + fm.period(), fm), 1e-14);
  }
}

TEST(KernelEvalM, RotationAverageAtFour) {
  const SymmetryFold f(4);
  double worst = 0.0;
  for (int q = 0; q < 1000; ++q) {
    const double t = -pi + 2.0 * pi * (q + 0.5) / 1000.0;
    double avg = 0.0;
    for (int j = 0; j < 4; ++j) avg += kernel_eval_full(t + 2.0 * pi * j / 4.0);
    worst = std::max(worst, std::abs(avg / 4.0 - kernel_eval_m(t, f)));
  }
  EXPECT_LE(worst, 1e-10);
}

// The abs-sine closed form is the rotation average only for m = 4; the exact
// m-fold Green's function is the rotation average for every m.
TEST(KernelEvalM, AbsSineFormDiffersAwayFromFour) {
  for (int m : {3, 5, 8}) {
    const SymmetryFold f(m);
    double literal = 0.0, green = 0.0;
    for (int q = 0; q < 1000; ++q) {
      const double t = -pi + 2.0 * pi * (q + 0.5) / 1000.0;
      double avg = 0.0;
      for (int j = 0; j < m; ++j) avg += kernel_eval_full(t + 2.0 * pi * j / m);
      avg /= m;
      literal = std::max(literal, std::abs(avg - kernel_eval_m(t, f)));
      green = std::max(green, std::abs(avg - kernel_eval_green(t, f)));
    }
    EXPECT_GT(literal, 1e-3) << m;
    EXPECT_LE(green, 1e-13) << m;
  }
}

TEST(KernelEvalGreen, SolvesTheOperatorAwayFromKinks) {
  // (4 + d²/dθ²) K = 0 between lattice points (finite differences), and
  // (m/2π)·∫K over a period is 1/4.
  for (int m : {3, 4, 6}) {
    const SymmetryFold f(m);
    const double h = 1e-4;
    for (double t : {0.1, 0.3, f.half_period() + 0.05}) {
      const double k2 = (kernel_eval_green(t + h, f) - 2.0 * kernel_eval_green(t, f) +
                         kernel_eval_green(t - h, f)) / (h * h);
      EXPECT_NEAR(4.0 * kernel_eval_green(t, f) + k2, 0.0, 1e-6) << m << " " << t;
    }
    EXPECT_NEAR(green_antiderivative(f.period(), f) * m / (2.0 * pi), 0.25, 1e-15);
    EXPECT_NEAR(green_antiderivative(0.0, f), 0.0, 1e-16);
    // Antiderivative by quadrature.
    const double x = 0.8 * f.period() + 0.3;
    double q = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) q += kernel_eval_green((i + 0.5) * x / n, f) * x / n;
    EXPECT_NEAR(green_antiderivative(x, f), q, 1e-9) << m;
  }
}

TEST(ConvolveKernel, SineAndConstant) {
  for (int m : {3, 4, 5}) {
    const SymmetryFold f(m);
    const ScalarField g = ScalarField::sample(f, 64, [&](double t) { return std::sin(m * t); });
    const ScalarField G = convolve_kernel(g);
    for (std::size_t k = 0; k < G.size(); ++k) {
      EXPECT_NEAR(G[k], std::sin(m * G.node(k)) / (4.0 - m * m), 1e-12) << m;
    }
    const ScalarField c = ScalarField::sample(f, 64, [](double) { return 3.0; });
    for (double v : convolve_kernel(c).values()) EXPECT_NEAR(v, 0.75, 1e-12);
  }
}

TEST(ConvolveKernel, MatchesSpectralInverseOnRandomFields) {
  std::mt19937_64 rng(2024);
  for (int m : {3, 4, 5, 6}) {
    const SymmetryFold f(m);
    for (int trial = 0; trial < 3; ++trial) {
      const auto r = oracle::random_modes(rng, m, 60);
      const ScalarField g = sample_modes(f, 256, r);
      EXPECT_LE(sup_diff(convolve_kernel(g), invert_helmholtz(g)), 1e-8) << m;
    }
  }
}

TEST(ConvolveKernel, AbsSineFormAgreesAtFourOnly) {
  std::mt19937_64 rng(9);
  const SymmetryFold f4(4);
  const ScalarField g4 = sample_modes(f4, 128, oracle::random_modes(rng, 4, 20));
  EXPECT_LE(sup_diff(convolve_kernel(g4, KernelForm::literal), invert_helmholtz(g4)), 1e-8);
  const SymmetryFold f5(5);
  const ScalarField g5 = sample_modes(f5, 128, oracle::random_modes(rng, 5, 20));
  EXPECT_GT(sup_diff(convolve_kernel(g5, KernelForm::literal), invert_helmholtz(g5)), 1e-6);
}

TEST(ConvolveKernel, MatchesFullCircleQuadrature) {
  std::mt19937_64 rng(77);
  const SymmetryFold f(5);
  const auto r = oracle::random_modes(rng, 5, 6);
  const ScalarField G = convolve_kernel(sample_modes(f, 32, r));
  for (std::size_t k = 0; k < G.size(); k += 5) {
    const double ref = oracle::full_convolution([&](double w) { return r(w); }, G.node(k));
    EXPECT_NEAR(G[k], ref, 1e-10);
  }
}

TEST(Derivative, Examples) {
  const SymmetryFold f(4);
  const ScalarField s = derivative(ScalarField::sample(f, 32, [](double t) { return std::sin(4.0 * t); }));
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s[k], 4.0 * std::cos(4.0 * s.node(k)), 1e-13);
  const ScalarField c = derivative(ScalarField::sample(f, 32, [](double t) { return std::cos(8.0 * t); }));
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(c[k], -8.0 * std::sin(8.0 * c.node(k)), 1e-13);
  const ScalarField z = derivative(ScalarField::sample(f, 32, [](double) { return 2.5; }));
  for (double v : z.values()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ForcingC, ConstantDataGivesZero) {
  const SymmetryFold f(4);
  for (double v : forcing_c(ScalarField::sample(f, 32, [](double) { return 1.7; })).values()) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(ForcingC, MatchesOracleForSingleMode) {
  // g = sin 4θ: ∂θG = -(1/3) cos 4θ, (∂θG)² = (1 + cos 8θ)/18,
  // c = 12·[1/72 + cos 8θ/(18·(4 - 64))].
  const SymmetryFold f(4);
  const ScalarField c = forcing_c(ScalarField::sample(f, 64, [](double t) { return std::sin(4.0 * t); }));
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double t = c.node(k);
    EXPECT_NEAR(c[k], 12.0 * (1.0 / 72.0 - std::cos(8.0 * t) / (18.0 * 60.0)), 1e-14);
    EXPECT_GT(c[k], 0.0);
  }
}

TEST(ForcingC, PositiveOnRandomNonconstantData) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + trial % 4;
    const SymmetryFold f(m);
    const ScalarField c = forcing_c(sample_modes(f, 128, oracle::random_modes(rng, m, 8)));
    EXPECT_GT(*std::min_element(c.values().begin(), c.values().end()), 0.0) << trial;
  }
}

TEST(ForcingC, LowerBoundWithOffsetConstant) {
  std::mt19937_64 rng(321);
  for (int m : {4, 5, 6, 8}) {
    const SymmetryFold f(m);
    for (int trial = 0; trial < 5; ++trial) {
      const ScalarField g = sample_modes(f, 128, oracle::random_modes(rng, m, 8));
      const ScalarField c = forcing_c(g);
      const double mean_sq = derivative(to_spectral(invert_helmholtz(g))).mean_square();
      for (double v : c.values()) EXPECT_GE(v / 12.0, f.offset() * mean_sq - 1e-14) << m;
    }
  }
  // m = 5 single mode: min c against (3/28)·mean((∂θG)²).
  const SymmetryFold f5(5);
  const ScalarField g = ScalarField::sample(f5, 64, [](double t) { return std::sin(5.0 * t); });
  const ScalarField c = forcing_c(g);
  const double mean_sq = 25.0 / (21.0 * 21.0) / 2.0;
  EXPECT_GE(*std::min_element(c.values().begin(), c.values().end()) / 12.0, 3.0 / 28.0 * mean_sq);
}

// The sharp pointwise constant is min K^m = π/(2m tan(2π/m)), which sits
// slightly below C̃_m for m >= 5; the bound holds with either.
TEST(ForcingC, SharpKernelMinimum) {
  for (int m : {5, 6, 8}) {
    const SymmetryFold f(m);
    double kmin = 1e300;
    for (int q = 0; q < 20000; ++q) kmin = std::min(kmin, kernel_eval_green(f.period() * q / 20000.0, f));
    EXPECT_NEAR(kmin, pi / (2.0 * m * std::tan(2.0 * pi / m)), 1e-12);
    EXPECT_LT(kmin, f.offset());
    EXPECT_GT(kmin, 0.0);
  }
}
