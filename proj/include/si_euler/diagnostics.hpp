#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "si_euler/core/field.hpp"
#include "si_euler/flow_state.hpp"
#include "si_euler/jump_profile.hpp"
#include "si_euler/kernel.hpp"

namespace si_euler::diagnostics {

/// Time series recorded along a flow run.
struct DiagnosticsTrace {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> h1dual;
  std::vector<double> mean_g;
  std::vector<double> l2_g;
  std::vector<double> min_g;
  std::vector<double> max_g;
  /// Marker labels and their first F < 0 times (+inf if never), as of the last record.
  std::vector<double> labels;
  std::vector<double> crossing_time;
  std::size_t relapses = 0;
  double quantum = 0.0;  ///< 2π/M

  std::size_t size() const noexcept { return times.size(); }
};

/// (2π/M) · #{markers whose F has been negative at some time up to s.t}.
inline double entropy(const flow::FlowState& s) {
  const auto n = std::count_if(s.crossing_time.begin(), s.crossing_time.end(),
                               [](double c) { return std::isfinite(c); });
  return 2.0 * pi * static_cast<double>(n) / static_cast<double>(s.marker_count());
}

/// ‖∂θG‖ in L²(S¹) over the full circle, with G = (4 + d²/dθ²)⁻¹ g.
inline double weak_convergence_proxy(const SpectralField& g) {
  const SpectralField dG = kernel::derivative(kernel::invert_helmholtz(g));
  return std::sqrt(2.0 * pi * dG.mean_square());
}

inline double weak_convergence_proxy(const ScalarField& g) {
  return weak_convergence_proxy(to_spectral(g));
}

struct Extrema {
  double min = 0.0;
  double max = 0.0;
};

/**
 * @brief Extrema of the transported field g₀ ∘ χ⁻¹.
 *
 * Starts from the grid extrema and refines each on a 64x finer local
 * lattice (±2 cells) of the same reconstruction, so narrow compressed
 * peaks between grid nodes are not missed.
 */
inline Extrema field_extrema(const flow::FlowState& s) {
  const auto& v = s.g_grid().values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double h = s.g_grid().spacing();
  constexpr int sub = 64;
  auto lattice = [&](std::size_t k) {
    std::vector<double> th;
    const double c = s.g_grid().node(k);
    for (int q = -2 * sub; q <= 2 * sub; ++q) th.push_back(c + h * q / sub);
    return th;
  };
  const auto vmin = flow::reconstruct_at(s, lattice(static_cast<std::size_t>(lo - v.begin())));
  const auto vmax = flow::reconstruct_at(s, lattice(static_cast<std::size_t>(hi - v.begin())));
  return {std::min(*lo, *std::min_element(vmin.begin(), vmin.end())),
          std::max(*hi, *std::max_element(vmax.begin(), vmax.end()))};
}

inline void record(DiagnosticsTrace& tr, const flow::FlowState& s) {
  const ScalarField& g = s.g_grid();
  double sq = 0.0;
  for (double x : g.values()) sq += x * x;
  sq /= static_cast<double>(g.size());
  const Extrema ex = field_extrema(s);
  tr.times.push_back(s.t);
  tr.entropy.push_back(entropy(s));
  tr.h1dual.push_back(std::sqrt(2.0 * pi * s.fields->dG_hat.mean_square()));
  tr.mean_g.push_back(s.fields->g_hat.mean());
  tr.l2_g.push_back(std::sqrt(2.0 * pi * sq));
  tr.min_g.push_back(ex.min);
  tr.max_g.push_back(ex.max);
  tr.labels = s.labels;
  tr.crossing_time = s.crossing_time;
  tr.relapses = s.relapses;
  tr.quantum = 2.0 * pi / static_cast<double>(s.marker_count());
}

// ---------------------------------------------------------------------------
// Expanding set
// ---------------------------------------------------------------------------

struct ExpandingSetEstimate {
  double horizon = 0.0;
  std::vector<std::size_t> markers;  ///< indices never crossed by the horizon
  std::vector<double> labels;
  std::size_t components = 0;        ///< connected runs, cyclically
  double measure = 0.0;              ///< (2π/M) · count
  bool degenerate = false;           ///< every label expanding (constant data)
};

/// Labels with crossing time beyond the horizon (in |t|, so backward runs
/// work too): a superset of E that shrinks as the horizon grows.
inline ExpandingSetEstimate expanding_set_estimate(const DiagnosticsTrace& tr, double horizon) {
  ExpandingSetEstimate est;
  est.horizon = horizon;
  const std::size_t M = tr.crossing_time.size();
  std::vector<bool> in(M, false);
  for (std::size_t i = 0; i < M; ++i) {
    if (!(std::abs(tr.crossing_time[i]) <= std::abs(horizon))) {
      in[i] = true;
      est.markers.push_back(i);
      est.labels.push_back(tr.labels[i]);
    }
  }
  est.measure = tr.quantum * static_cast<double>(est.markers.size());
  est.degenerate = M > 0 && est.markers.size() == M;
  if (est.markers.empty()) return est;
  if (est.degenerate) {
    est.components = 1;
    return est;
  }
  for (std::size_t i = 0; i < M; ++i) {
    if (in[i] && !in[(i + M - 1) % M]) ++est.components;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Run classification
// ---------------------------------------------------------------------------

enum class RunOutcome {
  weak_convergence_to_mean,  ///< ‖∂θG‖ fell below the threshold fraction of its initial value
  finite_expanding_set,      ///< expanding estimate stable in measure and component count
  undecided,
};

inline const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::weak_convergence_to_mean:
      return "weak_convergence_to_mean";
    case RunOutcome::finite_expanding_set:
      return "finite_expanding_set";
    case RunOutcome::undecided:
      return "undecided";
  }
  return "undecided";
}

/// True when S changed by less than one quantum over the trailing fraction of the run.
inline bool entropy_plateau(const DiagnosticsTrace& tr, double trailing = 0.2) {
  if (tr.size() < 2) return false;
  const double t_end = tr.times.back();
  const double t_from = t_end - trailing * (t_end - tr.times.front());
  // Last sample at or before the start of the trailing window.
  std::size_t k = 0;
  while (k + 1 < tr.size() && std::abs(tr.times[k + 1] - tr.times.front()) <=
                                  std::abs(t_from - tr.times.front())) {
    ++k;
  }
  return std::abs(tr.entropy.back() - tr.entropy[k]) < tr.quantum * (1.0 - 1e-12);
}

/**
 * @brief Assigns exactly one outcome to a run: weak convergence when the
 * proxy ratio is at most `threshold`; otherwise a finite expanding set when
 * the estimate over the trailing 20% keeps its component count and gains or
 * loses less than one quantum per component; otherwise undecided.
 */
inline RunOutcome classify_run(const DiagnosticsTrace& tr, double threshold = 0.1) {
  if (tr.size() < 2) return RunOutcome::undecided;
  const double h0 = tr.h1dual.front();
  if (h0 == 0.0 || tr.h1dual.back() <= threshold * h0) return RunOutcome::weak_convergence_to_mean;
  const double t_end = tr.times.back();
  const double t_mid = tr.times.front() + 0.8 * (t_end - tr.times.front());
  const auto late = expanding_set_estimate(tr, t_end);
  const auto early = expanding_set_estimate(tr, t_mid);
  if (late.components > 0 && late.components == early.components &&
      early.measure - late.measure < tr.quantum * static_cast<double>(late.components)) {
    return RunOutcome::finite_expanding_set;
  }
  return RunOutcome::undecided;
}

// ---------------------------------------------------------------------------
// Asymptotic profile
// ---------------------------------------------------------------------------

struct AsymptoticProfile {
  enum class Kind { constant, jumps, undecided };
  Kind kind = Kind::undecided;
  double value = 0.0;                 ///< constant kind: mean of g₀
  std::optional<JumpProfile> profile;  ///< jumps kind
  std::vector<double> levels;          ///< cluster levels found
  double residual = 0.0;  ///< max |g - profile| away from transition zones
  std::string note;
};

inline const char* to_string(AsymptoticProfile::Kind k) {
  switch (k) {
    case AsymptoticProfile::Kind::constant:
      return "constant";
    case AsymptoticProfile::Kind::jumps:
      return "jumps";
    case AsymptoticProfile::Kind::undecided:
      return "undecided";
  }
  return "undecided";
}

/**
 * @brief Piecewise-constant limit profile read off the final field.
 *
 * Sorted grid values are split into clusters at gaps wider than
 * tol·(max - min) of g₀; clusters holding less than `min_weight` of the
 * nodes are transition layers. One surviving cluster gives the constant
 * profile (value = mean of g₀); several give a jump profile with jumps at
 * the centres of the transitions between them. A run whose entropy has not
 * plateaued is undecided.
 */
inline AsymptoticProfile extract_profile(const flow::FlowState& final_state,
                                         const DiagnosticsTrace& trace, double tol = 0.05,
                                         double min_weight = 0.02) {
  AsymptoticProfile out;
  const InitialData& data = *final_state.data;
  const ScalarField& g = final_state.g_grid();
  const std::size_t N = g.size();
  const ScalarField g0 = data.sample(N);
  const auto [lo0, hi0] = std::minmax_element(g0.values().begin(), g0.values().end());
  const double range = *hi0 - *lo0;

  if (!data.nonconstant() || range == 0.0) {
    out.kind = AsymptoticProfile::Kind::constant;
    out.value = data.mean();
    out.levels = {out.value};
    double r = 0.0;
    for (double v : g.values()) r = std::max(r, std::abs(v - out.value));
    out.residual = r;
    return out;
  }
  if (!entropy_plateau(trace)) {
    out.note = "entropy has not plateaued over the trailing 20% of the run";
    return out;
  }

  std::vector<std::size_t> order(N);
  for (std::size_t k = 0; k < N; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
  std::vector<int> cluster_of(N, -1);
  std::vector<std::vector<std::size_t>> clusters(1);
  clusters[0].push_back(order[0]);
  for (std::size_t q = 1; q < N; ++q) {
    if (g[order[q]] - g[order[q - 1]] > tol * range) clusters.emplace_back();
    clusters.back().push_back(order[q]);
  }
  std::vector<double> levels;
  for (const auto& c : clusters) {
    if (static_cast<double>(c.size()) < min_weight * static_cast<double>(N)) continue;
    std::vector<double> vals;
    for (std::size_t k : c) vals.push_back(g[k]);
    std::nth_element(vals.begin(), vals.begin() + static_cast<long>(vals.size() / 2), vals.end());
    const double level = vals[vals.size() / 2];
    for (std::size_t k : c) cluster_of[k] = static_cast<int>(levels.size());
    levels.push_back(level);
  }
  out.levels = levels;
  if (levels.empty()) {
    out.note = "no cluster carries enough weight";
    return out;
  }

  double residual = 0.0;
  if (levels.size() == 1) {
    out.kind = AsymptoticProfile::Kind::constant;
    out.value = data.mean();
    for (std::size_t k = 0; k < N; ++k) {
      if (cluster_of[k] == 0) residual = std::max(residual, std::abs(g[k] - out.value));
    }
    out.residual = residual;
    return out;
  }

  // Walk the circle from a clustered node; record a jump at the centre of
  // each transition between different clusters.
  std::size_t start = 0;
  while (cluster_of[start] < 0) ++start;
  std::vector<double> jumps;
  int current = cluster_of[start];
  std::size_t last_in = start;
  const double h = g.spacing();
  for (std::size_t step = 1; step <= N; ++step) {
    const std::size_t k = (start + step) % N;
    const int c = cluster_of[k];
    if (c < 0) continue;
    if (c != current) {
      const double a = g.node(last_in);
      double b = g.node(k);
      if (b <= a) b += g.fold().period();
      jumps.push_back(0.5 * (a + b));
      current = c;
    }
    last_in = k;
    residual = std::max(residual, std::abs(g[k] - levels[static_cast<std::size_t>(c)]));
  }
  out.residual = residual;
  if (jumps.size() < 2 || jumps.size() % 2 != 0) {
    out.note = "odd or missing jump count";
    return out;
  }
  // Intervals run from each jump to the next; the level on (jumps[i], jumps[i+1])
  // is the cluster entered at jumps[i].
  std::vector<double> a(jumps.begin(), jumps.end());
  std::sort(a.begin(), a.end());
  std::vector<double> lv;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double mid = 0.5 * (a[i] + (i + 1 < a.size() ? a[i + 1] : a[0] + g.fold().period()));
    const double wrapped = g.fold().wrap(mid);
    const double x = (wrapped - g.fold().domain_start()) / h;
    const std::size_t k = static_cast<std::size_t>(std::llround(x)) % N;
    std::size_t kk = k;
    for (std::size_t d = 0; d < N && cluster_of[kk] < 0; ++d) kk = (k + d) % N;
    lv.push_back(levels[static_cast<std::size_t>(cluster_of[kk])]);
  }
  a.push_back(a.front() + g.fold().period());
  try {
    out.profile = JumpProfile(g.fold(), a, lv);
    out.kind = AsymptoticProfile::Kind::jumps;
  } catch (const ConfigError& e) {
    out.note = std::string("jump profile rejected: ") + e.what();
  }
  return out;
}

}  // namespace si_euler::diagnostics
