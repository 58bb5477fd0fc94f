#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "si_euler/diagnostics.hpp"
#include "si_euler/flow.hpp"

using namespace si_euler;
using namespace si_euler::diagnostics;

namespace {

const SymmetryFold kFour(4);

InitialData homoclinic() { return InitialData::fourier(kFour, 0.0, {{1, 0.0, 1.0}}); }

}  // namespace

TEST(Entropy, ConstantDataIsZero) {
  flow::RunParams p;
  p.markers = p.grid = 64;
  p.dt = 0.05;
  p.T = 1.0;
  const auto tr = flow::run(InitialData::fourier(kFour, 1.0, {}), kFour, p);
  for (double s : tr.trace.entropy) EXPECT_EQ(s, 0.0);
  for (double h : tr.trace.h1dual) EXPECT_EQ(h, 0.0);
}

TEST(Entropy, HomoclinicInitialValueIsPi) {
  const auto s = flow::init_state(homoclinic(), kFour, 1024, 256);
  EXPECT_NEAR(entropy(s), pi, 1e-15);
}

TEST(Entropy, NondecreasingAndGrowing) {
  flow::RunParams p;
  p.markers = p.grid = 256;
  p.dt = 1e-2;
  p.T = 5.0;
  const auto tr = flow::run(homoclinic(), kFour, p);
  for (std::size_t k = 1; k < tr.trace.size(); ++k) EXPECT_GE(tr.trace.entropy[k], tr.trace.entropy[k - 1]);
  EXPECT_GE(tr.trace.entropy.back() - tr.trace.entropy.front(), tr.trace.quantum);
}

TEST(WeakConvergenceProxy, ClosedForms) {
  for (int m : {3, 4, 5, 7}) {
    const SymmetryFold f(m);
    const ScalarField g = ScalarField::sample(f, 64, [&](double t) { return std::sin(m * t); });
    EXPECT_NEAR(weak_convergence_proxy(g), m / (m * m - 4.0) * std::sqrt(pi), 1e-14) << m;
  }
  const ScalarField c = ScalarField::sample(kFour, 16, [](double) { return 3.0; });
  EXPECT_EQ(weak_convergence_proxy(c), 0.0);
}

TEST(FieldExtrema, InitialDataExtrema) {
  const auto s = flow::init_state(homoclinic(), kFour, 256, 64);
  const Extrema e = field_extrema(s);
  EXPECT_NEAR(e.max, 1.0, 1e-10);
  EXPECT_NEAR(e.min, -1.0, 1e-10);
}

TEST(ExpandingSet, ConstantDataIsDegenerate) {
  DiagnosticsTrace tr;
  tr.quantum = 2.0 * pi / 8.0;
  tr.labels.assign(8, 0.0);
  tr.crossing_time.assign(8, std::numeric_limits<double>::infinity());
  const auto e = expanding_set_estimate(tr, 10.0);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.markers.size(), 8u);
  EXPECT_EQ(e.components, 1u);
}

TEST(ExpandingSet, ComponentsAreCyclic) {
  DiagnosticsTrace tr;
  const double inf = std::numeric_limits<double>::infinity();
  tr.quantum = 2.0 * pi / 8.0;
  tr.labels = {0, 1, 2, 3, 4, 5, 6, 7};
  tr.crossing_time = {inf, 1.0, 2.0, inf, inf, 3.0, 4.0, inf};
  const auto e = expanding_set_estimate(tr, 5.0);
  EXPECT_EQ(e.markers.size(), 4u);
  EXPECT_EQ(e.components, 2u);  // {7, 0} and {3, 4}
  EXPECT_NEAR(e.measure, 4.0 * tr.quantum, 1e-15);
  const auto later = expanding_set_estimate(tr, 3.5);
  EXPECT_EQ(later.markers.size(), 5u);
  const auto earlier = expanding_set_estimate(tr, 1.5);
  EXPECT_EQ(earlier.markers.size(), 7u);
  // Backward runs use |t|.
  tr.crossing_time = {inf, -1.0, -2.0, inf, inf, -3.0, -4.0, inf};
  EXPECT_EQ(expanding_set_estimate(tr, -5.0).markers.size(), 4u);
}

TEST(ClassifyRun, OutcomesAreExclusive) {
  DiagnosticsTrace tr;
  const double inf = std::numeric_limits<double>::infinity();
  tr.quantum = 2.0 * pi / 8.0;
  tr.labels = {0, 1, 2, 3, 4, 5, 6, 7};
  tr.crossing_time = {inf, 1.0, 2.0, inf, 0.5, 3.0, 0.1, 0.2};
  tr.times = {0.0, 5.0, 10.0};
  tr.entropy = {1.0, 2.0, 2.0};
  tr.h1dual = {1.0, 0.5, 0.05};
  EXPECT_EQ(classify_run(tr), RunOutcome::weak_convergence_to_mean);
  tr.h1dual = {1.0, 0.9, 0.8};
  EXPECT_EQ(classify_run(tr), RunOutcome::finite_expanding_set);
  tr.crossing_time = {inf, 1.0, 2.0, inf, 0.5, 9.0, 0.1, inf};
  EXPECT_EQ(classify_run(tr), RunOutcome::undecided);
}

TEST(ExtractProfile, ConstantData) {
  flow::RunParams p;
  p.markers = p.grid = 64;
  p.dt = 0.05;
  p.T = 0.5;
  const auto tr = flow::run(InitialData::fourier(kFour, 0.3, {}), kFour, p);
  const auto prof = extract_profile(tr.final_state(), tr.trace);
  EXPECT_EQ(prof.kind, AsymptoticProfile::Kind::constant);
  EXPECT_DOUBLE_EQ(prof.value, 0.3);
}

TEST(ExtractProfile, JumpDataGivesJumpProfileWithSameLevels) {
  const JumpProfile two(kFour, {-pi / 4.0, 0.1, pi / 4.0}, {1.0, -1.0});
  const auto s = flow::init_state(InitialData::piecewise(two), kFour, 512, 512);
  DiagnosticsTrace tr;
  record(tr, s);
  record(tr, s);
  tr.times.back() = 1.0;
  const auto prof = extract_profile(s, tr);
  ASSERT_EQ(prof.kind, AsymptoticProfile::Kind::jumps) << prof.note;
  ASSERT_TRUE(prof.profile.has_value());
  EXPECT_EQ(prof.profile->jumps(), 2u);
  std::vector<double> lv = prof.profile->levels();
  std::sort(lv.begin(), lv.end());
  EXPECT_NEAR(lv[0], -1.0, 1e-12);
  EXPECT_NEAR(lv[1], 1.0, 1e-12);
  const double h = s.g_grid().spacing();
  std::vector<double> a = prof.profile->breakpoints();
  bool found = false;
  for (double x : a) found = found || std::abs(kFour.wrap(x) - 0.1) < h;
  EXPECT_TRUE(found);
  for (double x : prof.levels) {
    EXPECT_GE(x, -1.0 - 0.05);
    EXPECT_LE(x, 1.0 + 0.05);
  }
}

TEST(ExtractProfile, UndecidedWithoutPlateau) {
  const auto s = flow::init_state(homoclinic(), kFour, 64, 64);
  DiagnosticsTrace tr;
  record(tr, s);
  tr.times = {0.0, 1.0};
  tr.entropy = {0.0, 1.0};
  const auto prof = extract_profile(s, tr);
  EXPECT_EQ(prof.kind, AsymptoticProfile::Kind::undecided);
}
