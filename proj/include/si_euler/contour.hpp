#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/rk4.hpp"
#include "si_euler/flow.hpp"
#include "si_euler/jump_profile.hpp"
#include "si_euler/kernel.hpp"

namespace si_euler::contour {

using kernel::KernelForm;

namespace detail {

inline double antiderivative(double x, const SymmetryFold& fold, KernelForm form) {
  return form == KernelForm::green ? kernel::green_antiderivative(x, fold)
                                   : kernel::literal_antiderivative(x, fold);
}

// G(θ) = (m/2π) Σ g_i ∫_{a_{i-1}}^{a_i} K(θ - ω) dω, each interval in closed form.
inline double G_from(const std::vector<double>& a, const std::vector<double>& g,
                     const SymmetryFold& fold, double theta, KernelForm form) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s += g[i] * (antiderivative(theta - a[i], fold, form) -
                 antiderivative(theta - a[i + 1], fold, form));
  }
  return s * fold.m() / (2.0 * pi);
}

inline double dG_from(const std::vector<double>& a, const std::vector<double>& g,
                      const SymmetryFold& fold, double theta, KernelForm form) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s += g[i] * (kernel::kernel_value(theta - a[i], fold, form) -
                 kernel::kernel_value(theta - a[i + 1], fold, form));
  }
  return s * fold.m() / (2.0 * pi);
}

inline bool ordered(const std::vector<double>& a, double period) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    if (!(a[i + 1] > a[i])) return false;
  }
  return a.back() < a.front() + period;
}

}  // namespace detail

/// G = (4 + d²/dθ²)⁻¹ g of a jump profile at θ.
inline double G_at(const JumpProfile& p, double theta, KernelForm form = KernelForm::green) {
  return detail::G_from(p.breakpoints(), p.levels(), p.fold(), theta, form);
}

/// ∂θG of a jump profile at θ (continuous, also at the jumps).
inline double dG_at(const JumpProfile& p, double theta, KernelForm form = KernelForm::green) {
  return detail::dG_from(p.breakpoints(), p.levels(), p.fold(), theta, form);
}

/// G at breakpoint a_j, j = 0..intervals()-1.
inline double G_at_jump(const JumpProfile& p, std::size_t j, KernelForm form = KernelForm::green) {
  if (j >= p.intervals()) throw ConfigError("jump index out of range");
  for (std::size_t i = 0; i < p.intervals(); ++i) {
    if (!(p.width(i) > 0.0)) throw ConfigError("degenerate interval in jump profile");
  }
  return G_at(p, p.breakpoints()[j], form);
}

/// a_j' = 2 G(a_j) for every jump (a single entry q/2 for the constant profile).
inline std::vector<double> contour_velocity(const JumpProfile& p,
                                            KernelForm form = KernelForm::green) {
  std::vector<double> v(p.intervals());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = 2.0 * G_at_jump(p, j, form);
  return v;
}

enum class ContourStatus { completed, jump_merger };

inline const char* to_string(ContourStatus s) {
  return s == ContourStatus::completed ? "completed" : "jump_merger";
}

struct ContourTrajectory {
  std::vector<double> times;
  std::vector<JumpProfile> profiles;
  ContourStatus status = ContourStatus::completed;
  std::string message;
};

/**
 * @brief RK4 on the breakpoints a_0..a_{n-1}; a_n = a_0 + 2π/m is implied,
 * so the total measure is conserved exactly. Snapshots every `cadence`
 * (<= 0: end points only). |dt| is adjusted down so |T| is a whole number of steps.
 */
inline ContourTrajectory contour_run(const JumpProfile& p0, double dt, double T,
                                     double cadence = 0.0, KernelForm form = KernelForm::green) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive (the sign of T sets the direction)");
  if (!std::isfinite(T)) throw ConfigError("T must be finite");
  const SymmetryFold fold = p0.fold();
  const std::vector<double> levels = p0.levels();
  const double L = fold.period();
  const std::size_t n = levels.size();

  ContourTrajectory tr;
  tr.times.push_back(0.0);
  tr.profiles.push_back(p0);
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(T) / dt - 1e-9));
  if (steps == 0) return tr;
  const double h = std::copysign(std::abs(T) / static_cast<double>(steps), T);
  const std::size_t every =
      cadence > 0.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cadence / std::abs(h))))
          : steps;

  std::vector<double> a(p0.breakpoints().begin(), p0.breakpoints().end() - 1);
  std::vector<double> full(n + 1);
  bool merged = false;
  auto rhs = [&](double, const std::vector<double>& x) {
    std::copy(x.begin(), x.end(), full.begin());
    full[n] = x[0] + L;
    if (!detail::ordered(x, L)) merged = true;
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = 2.0 * detail::G_from(full, levels, fold, x[j], form);
    return v;
  };

  double t = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    std::vector<double> next = rk4_step(a, t, h, rhs);
    if (merged || !detail::ordered(next, L)) {
      tr.status = ContourStatus::jump_merger;
      tr.message = "breakpoints collided near t = " + std::to_string(t);
      return tr;
    }
    a = std::move(next);
    t = h * static_cast<double>(k);
    if (k % every == 0 || k == steps) {
      std::vector<double> b(a);
      b.push_back(a[0] + L);
      tr.times.push_back(t);
      tr.profiles.emplace_back(fold, std::move(b), levels);
    }
  }
  return tr;
}

/**
 * @brief Positions of the `count` steepest jumps of the reconstructed field.
 *
 * Brackets come from the largest local maxima of |Δg| between grid nodes;
 * inside each bracket the crossing of the mid level (snapped to the nearest
 * levels of the initial jump profile when available) is found by bisection
 * on the off-grid reconstruction. Result sorted, in [start, start + 2π/m).
 */
inline std::vector<double> locate_grid_jumps(const flow::FlowState& s, std::size_t count) {
  const ScalarField& g = s.g_grid();
  const std::size_t N = g.size();
  const double h = g.spacing();
  std::vector<double> dg(N);
  for (std::size_t k = 0; k < N; ++k) dg[k] = g[(k + 1) % N] - g[k];
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < N; ++k) {
    const double c = std::abs(dg[k]);
    if (c > std::abs(dg[(k + N - 1) % N]) && c >= std::abs(dg[(k + 1) % N])) peaks.push_back(k);
  }
  if (peaks.size() < count) throw NumericalError("fewer grid jumps than requested");
  std::partial_sort(peaks.begin(), peaks.begin() + static_cast<long>(count), peaks.end(),
                    [&](std::size_t x, std::size_t y) { return std::abs(dg[x]) > std::abs(dg[y]); });
  peaks.resize(count);

  const auto& data = *s.data;
  auto snap = [&](double v) {
    if (!data.profile()) return v;
    double best = v;
    double dist = std::numeric_limits<double>::infinity();
    for (double q : data.profile()->levels()) {
      if (std::abs(q - v) < dist) {
        dist = std::abs(q - v);
        best = q;
      }
    }
    return best;
  };

  std::vector<double> out;
  const long long n = static_cast<long long>(N);
  auto at = [&](long long k) { return g[static_cast<std::size_t>(((k % n) + n) % n)]; };
  for (std::size_t k : peaks) {
    const long long kk = static_cast<long long>(k);
    const double mid = 0.5 * (snap(at(kk - 4)) + snap(at(kk + 5)));
    double lo = g.node(0) + h * static_cast<double>(kk - 2);
    double hi = g.node(0) + h * static_cast<double>(kk + 3);
    const double sign = dg[k] > 0.0 ? 1.0 : -1.0;
    auto f = [&](double th) { return sign * (flow::reconstruct_at(s, {th})[0] - mid); };
    if (!(f(lo) < 0.0 && f(hi) > 0.0)) {
      // Fall back to the steepest cell itself.
      lo = g.node(0) + h * static_cast<double>(kk);
      hi = lo + h;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
      const double c = 0.5 * (lo + hi);
      (f(c) < 0.0 ? lo : hi) = c;
    }
    double x = 0.5 * (lo + hi);
    x = s.fold.domain_start() + std::fmod(x - s.fold.domain_start() + 2.0 * s.fold.period(),
                                          s.fold.period());
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct GridComparison {
  std::vector<double> times;
  std::vector<double> discrepancies;  ///< max over jumps of circular distance at each time
  double max = 0.0;
};

/// Compares contour breakpoints with jumps tracked on grid snapshots taken
/// at the same times (matched to within half a grid step in t).
inline GridComparison compare_with_grid(const ContourTrajectory& contour,
                                        const flow::Trajectory& grid) {
  GridComparison rep;
  if (contour.profiles.empty()) return rep;
  const SymmetryFold fold = contour.profiles.front().fold();
  const double L = fold.period();
  for (std::size_t q = 0; q < contour.times.size(); ++q) {
    const JumpProfile& p = contour.profiles[q];
    const flow::FlowState* match = nullptr;
    for (const auto& s : grid.snapshots) {
      if (std::abs(s.t - contour.times[q]) <= 1e-9 * std::max(1.0, std::abs(s.t))) match = &s;
    }
    if (match == nullptr) continue;
    double worst = 0.0;
    if (!p.degenerate()) {
      const std::vector<double> jumps = locate_grid_jumps(*match, p.jumps());
      for (std::size_t j = 0; j < p.jumps(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (double x : jumps) {
          double d = std::fmod(std::abs(x - p.breakpoints()[j]), L);
          best = std::min(best, std::min(d, L - d));
        }
        worst = std::max(worst, best);
      }
    }
    rep.times.push_back(contour.times[q]);
    rep.discrepancies.push_back(worst);
    rep.max = std::max(rep.max, worst);
  }
  return rep;
}

}  // namespace si_euler::contour
