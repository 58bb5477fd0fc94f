#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/fold.hpp"

namespace si_euler {

/**
 * @brief Piecewise-constant m-fold profile: value levels[i] on
 * (breakpoints[i], breakpoints[i+1]), with breakpoints spanning exactly one
 * fundamental period.
 *
 * The first breakpoint may sit anywhere (a moving profile carries it along);
 * the last is always the first plus 2π/m. A single level on the whole
 * domain is admitted as the degenerate constant profile.
 */
class JumpProfile {
 public:
  JumpProfile(SymmetryFold fold, std::vector<double> breakpoints, std::vector<double> levels)
      : fold_(fold), a_(std::move(breakpoints)), g_(std::move(levels)) {
    validate();
  }

  /// Constant profile with value q.
  static JumpProfile constant(SymmetryFold fold, double q) {
    return JumpProfile(fold, {fold.domain_start(), fold.domain_start() + fold.period()}, {q});
  }

  /// Breakpoints from the first one and the interval widths.
  static JumpProfile from_widths(SymmetryFold fold, double a0, const std::vector<double>& widths,
                                 std::vector<double> levels) {
    std::vector<double> a{a0};
    for (double d : widths) a.push_back(a.back() + d);
    if (!a.empty()) a.back() = a0 + fold.period();
    return JumpProfile(fold, std::move(a), std::move(levels));
  }

  const SymmetryFold& fold() const noexcept { return fold_; }
  const std::vector<double>& breakpoints() const noexcept { return a_; }
  const std::vector<double>& levels() const noexcept { return g_; }
  std::size_t intervals() const noexcept { return g_.size(); }
  /// Number of jumps per fundamental domain (0 for the constant profile).
  std::size_t jumps() const noexcept { return g_.size() == 1 ? 0 : g_.size(); }
  bool degenerate() const noexcept { return g_.size() == 1; }

  double width(std::size_t i) const { return a_[i + 1] - a_[i]; }

  /// Level on the right of jump j (cyclic), i.e. levels[j], and on its left.
  double right_level(std::size_t j) const { return g_[j % g_.size()]; }
  double left_level(std::size_t j) const { return g_[(j + g_.size() - 1) % g_.size()]; }

  /// (1/L) Σ g_i (a_i - a_{i-1}).
  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < g_.size(); ++i) s += g_[i] * width(i);
    return s / fold_.period();
  }

  /// Profile value at θ (right-continuous at breakpoints).
  double operator()(double theta) const {
    const double p = fold_.period();
    double r = std::fmod(theta - a_[0], p);
    if (r < 0.0) r += p;
    const double x = a_[0] + r;
    for (std::size_t i = 0; i < g_.size(); ++i) {
      if (x < a_[i + 1]) return g_[i];
    }
    return g_.back();
  }

 private:
  void validate() {
    if (g_.empty()) throw ConfigError("jump profile: at least one level required");
    if (a_.size() != g_.size() + 1) {
      throw ConfigError("jump profile: need exactly one more breakpoint than levels (got " +
                        std::to_string(a_.size()) + " breakpoints, " +
                        std::to_string(g_.size()) + " levels)");
    }
    if (g_.size() > 1 && g_.size() % 2 != 0) {
      throw ConfigError("jump profile: the number of intervals must be even");
    }
    for (std::size_t i = 0; i + 1 < a_.size(); ++i) {
      if (!(a_[i + 1] > a_[i])) {
        throw ConfigError("jump profile: breakpoints must be strictly increasing (index " +
                          std::to_string(i) + ")");
      }
    }
    const double span = a_.back() - a_.front();
    if (std::abs(span - fold_.period()) > 1e-9) {
      throw ConfigError("jump profile: breakpoints must span exactly 2π/m");
    }
    a_.back() = a_.front() + fold_.period();
    if (g_.size() > 1) {
      for (std::size_t i = 0; i < g_.size(); ++i) {
        if (g_[i] == g_[(i + 1) % g_.size()]) {
          throw ConfigError("jump profile: adjacent levels must differ (index " +
                            std::to_string(i) + ")");
        }
      }
    }
  }

  SymmetryFold fold_;
  std::vector<double> a_;
  std::vector<double> g_;
};

}  // namespace si_euler
