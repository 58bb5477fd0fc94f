#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "si_euler/core/fft.hpp"
#include "si_euler/core/field.hpp"
#include "si_euler/core/interp.hpp"
#include "si_euler/core/parallel.hpp"

using namespace si_euler;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(Fft, ForwardMatchesNaiveDft) {
  for (std::size_t n : {8u, 32u, 128u}) {
    const auto x = random_vector(n, 7 + n);
    const auto a = fft::forward(x);
    const auto b = oracle::naive_dft(x);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LT(std::abs(a[j] - b[j]), 1e-14) << n << " " << j;
  }
}

TEST(Fft, RoundTrip) {
  const auto x = random_vector(256, 3);
  const auto y = fft::inverse(fft::forward(x), 256);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(x[k], y[k], 1e-14);
}

TEST(Fft, InverseRejectsLongSpectrum) {
  std::vector<fft::complex> half(20);
  EXPECT_THROW(fft::inverse(half, 16), NumericalError);
}

TEST(ScalarField, RejectsBadSizes) {
  const SymmetryFold f(4);
  EXPECT_THROW(ScalarField(f, std::vector<double>(4)), ConfigError);
  EXPECT_THROW(ScalarField(f, std::vector<double>(24)), ConfigError);
  EXPECT_NO_THROW(ScalarField(f, std::vector<double>(8)));
}

TEST(ScalarField, NodesCoverFundamentalDomain) {
  const SymmetryFold f(5);
  const ScalarField s = ScalarField::sample(f, 16, [](double t) { return t; });
  EXPECT_DOUBLE_EQ(s.node(0), -pi / 5.0);
  EXPECT_NEAR(s.node(15) + s.spacing(), pi / 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(s[3], s.node(3));
}

TEST(SpectralField, WavenumbersAreMultiplesOfM) {
  const SymmetryFold f(6);
  const ScalarField s = ScalarField::sample(f, 32, [](double t) { return std::sin(12.0 * t); });
  const SpectralField sp = to_spectral(s);
  EXPECT_DOUBLE_EQ(sp.wavenumber(2), 12.0);
  for (std::size_t j = 0; j < sp.size(); ++j) {
    if (j != 2) {
      EXPECT_LT(std::abs(sp[j]), 1e-14) << j;
    }
  }
  EXPECT_NEAR(std::abs(sp[2]), 0.5, 1e-14);
}

TEST(SpectralField, EvaluateReproducesBandLimitedFunction) {
  const SymmetryFold f(4);
  auto fn = [](double t) { return 0.3 + std::sin(4.0 * t) - 0.2 * std::cos(12.0 * t) + 0.1 * std::sin(28.0 * t); };
  const SpectralField sp = to_spectral(ScalarField::sample(f, 64, fn));
  for (double t : {-0.7, -0.1, 0.0, 0.33, 1.9, 5.0}) EXPECT_NEAR(evaluate(sp, t), fn(t), 1e-13) << t;
}

TEST(SpectralField, NyquistIsACosine) {
  const SymmetryFold f(4);
  const std::size_t n = 16;
  // cos(8·m·(θ + π/m)) alternates on the nodes; its interpolant is that cosine.
  const ScalarField s = ScalarField::sample(f, n, [&](double t) { return std::cos(8.0 * 4.0 * (t + pi / 4.0)); });
  const SpectralField sp = to_spectral(s);
  EXPECT_NEAR(sp[8].real(), 1.0, 1e-14);
  EXPECT_NEAR(evaluate(sp, 0.05), std::cos(32.0 * (0.05 + pi / 4.0)), 1e-13);
  EXPECT_NEAR(sp.mean_square(), 0.5, 1e-14);
}

TEST(SpectralField, ResizePreservesInterpolant) {
  const SymmetryFold f(5);
  const ScalarField s(f, random_vector(32, 11));
  const SpectralField sp = to_spectral(s);
  const SpectralField up = resize(sp, 128);
  for (double t : {-0.5, 0.01, 0.4}) EXPECT_NEAR(evaluate(up, t), evaluate(sp, t), 1e-13);
  const ScalarField back = to_physical(resize(up, 32));
  for (std::size_t k = 0; k < 32; ++k) EXPECT_NEAR(back[k], s[k], 1e-14);
}

TEST(SpectralInterpolant, AgreesWithDirectEvaluation) {
  const SymmetryFold f(4);
  auto fn = [](double t) {
    double v = 0.0;
    for (int j = 1; j <= 40; ++j) v += std::sin(4.0 * j * t + j) / (j * j);
    return v;
  };
  const SpectralField sp = to_spectral(ScalarField::sample(f, 256, fn));
  const SpectralInterpolant ip(sp, 4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int q = 0; q < 200; ++q) {
    const double t = u(rng);
    EXPECT_NEAR(ip(t), evaluate(sp, t), 1e-12) << t;
  }
}

TEST(SpectralInterpolant, ExactOnFineNodes) {
  const SymmetryFold f(4);
  const SpectralField sp = to_spectral(ScalarField::sample(f, 16, [](double t) { return std::cos(4.0 * t); }));
  const SpectralInterpolant ip(sp, 4);
  const double h = f.period() / 64.0;
  for (int k = 0; k < 64; k += 7) {
    const double t = f.domain_start() + k * h;
    EXPECT_NEAR(ip(t), std::cos(4.0 * t), 1e-14);
  }
}

TEST(MonotoneCircleMap, InvertsSmoothCircleMap) {
  const double L = pi / 2.0;
  auto phi = [&](double x) { return x + 0.1 * std::sin(4.0 * x); };  // increasing, degree one
  auto dphi = [&](double x) { return 1.0 + 0.4 * std::cos(4.0 * x); };
  const std::size_t n = 512;
  std::vector<double> labels(n), pos(n), slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = -L / 2.0 + (i + 0.5) * L / n;
    pos[i] = phi(labels[i]);
    slope[i] = 1.0 / dphi(labels[i]);
  }
  const MonotoneCircleMap inv(pos, labels, slope, L);
  for (double x : {-0.9, -0.3, 0.0, 0.5, 2.2}) {
    const double y = inv(x);
    EXPECT_NEAR(phi(y), x, 1e-9) << x;
  }
  std::vector<double> q{-0.7, -0.2, 0.1, 0.6, 0.9, 1.4};
  const auto ys = inv.evaluate_sorted(q);
  for (std::size_t k = 0; k < q.size(); ++k) EXPECT_NEAR(ys[k], inv(q[k]), 1e-15);
}

TEST(MonotoneCircleMap, RejectsCrossedMarkers) {
  EXPECT_THROW(MonotoneCircleMap({0.0, 0.2, 0.1}, {0.0, 0.1, 0.2}, {1.0, 1.0, 1.0}, 1.0), NumericalError);
  EXPECT_THROW(MonotoneCircleMap({0.0, 0.5, 1.2}, {0.0, 0.1, 0.2}, {1.0, 1.0, 1.0}, 1.0), NumericalError);
}

TEST(MonotoneCircleMap, StaysMonotoneForSteepData) {
  std::vector<double> x{0.0, 0.01, 0.02, 0.5, 0.98}, y{0.0, 0.3, 0.6, 0.61, 0.62}, s{30.0, 30.0, 30.0, 0.02, 0.02};
  const MonotoneCircleMap inv(x, y, s, 1.0);
  double prev = inv(-0.01);
  for (int k = 0; k <= 2000; ++k) {
    const double v = inv(-0.01 + k * 0.0005);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Parallel, CoversRangeOnceAndPropagatesErrors) {
  std::vector<int> hits(10000, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  }, 100);
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10000, [](std::size_t, std::size_t e) {
    if (e == 10000) throw NumericalError("boom");
  }, 100), NumericalError);
}
