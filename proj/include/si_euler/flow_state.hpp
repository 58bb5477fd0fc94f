#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/field.hpp"
#include "si_euler/core/interp.hpp"
#include "si_euler/core/parallel.hpp"
#include "si_euler/initial_data.hpp"
#include "si_euler/kernel.hpp"

namespace si_euler::flow {

/// Where G and c are rebuilt inside one RK4 step.
enum class RefreshSchedule {
  every_stage,  ///< all four stages see fields built from their own stage state
  stages_1_3,   ///< stages 2 and 4 reuse the fields of stages 1 and 3
};

struct FlowOptions {
  double cfl = 0.5;
  /// Largest admissible spacing between neighbouring markers (radians).
  double gap_threshold = 0.25;
  RefreshSchedule refresh = RefreshSchedule::every_stage;
  /// Fine-grid factor for off-grid evaluation of G and c at the markers.
  std::size_t oversample = 4;
};

/**
 * @brief Eulerian fields derived from one reconstruction of g.
 */
struct EulerianFields {
  ScalarField g;
  SpectralField g_hat;
  SpectralField G_hat;
  SpectralField dG_hat;
  SpectralField c_hat;  ///< on the 2N grid, exact for the band-limited G
  SpectralInterpolant G_at;
  SpectralInterpolant c_at;
  double max_speed;  ///< max |2G| over the grid

  ScalarField G() const { return to_physical(G_hat); }
  ScalarField dG() const { return to_physical(dG_hat); }
  ScalarField c() const {
    const ScalarField fine = to_physical(c_hat);
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fine[2 * k];
    return ScalarField(g.fold(), std::move(v));
  }
};

inline std::shared_ptr<const EulerianFields> build_fields(ScalarField g, std::size_t oversample) {
  SpectralField gh = to_spectral(g);
  SpectralField Gh = kernel::invert_helmholtz(gh);
  SpectralField dGh = kernel::derivative(Gh);
  SpectralField ch = kernel::forcing_c(gh);
  SpectralInterpolant G_at(Gh, oversample);
  SpectralInterpolant c_at(ch, std::max<std::size_t>(1, oversample / 2));
  const std::vector<double> Gv = fft::inverse(Gh.coefficients(), Gh.grid_size());
  double vmax = 0.0;
  for (double v : Gv) vmax = std::max(vmax, std::abs(2.0 * v));
  return std::make_shared<const EulerianFields>(EulerianFields{
      std::move(g), std::move(gh), std::move(Gh), std::move(dGh), std::move(ch),
      std::move(G_at), std::move(c_at), vmax});
}

/// Per-marker Lagrangian/Riccati variables.
struct MarkerArrays {
  std::vector<double> chi;
  std::vector<double> dchi;
  std::vector<double> F;
  std::vector<double> y;
  std::vector<double> dy;

  std::size_t size() const noexcept { return chi.size(); }

  void resize(std::size_t n) {
    chi.resize(n);
    dchi.resize(n);
    F.resize(n);
    y.resize(n);
    dy.resize(n);
  }
};

/**
 * @brief Time-t snapshot: markers at cell-centred labels θ_i plus the
 * Eulerian fields reconstructed from them. Treated as immutable.
 */
struct FlowState {
  double t = 0.0;
  SymmetryFold fold{4};
  std::shared_ptr<const InitialData> data;
  std::vector<double> labels;
  MarkerArrays markers;
  /// First time F < 0 was observed per marker (+inf if never).
  std::vector<double> crossing_time;
  /// Latched markers later seen with F >= 0 (always 0 for a correct run).
  std::size_t relapses = 0;
  std::shared_ptr<const EulerianFields> fields;

  std::size_t marker_count() const noexcept { return labels.size(); }
  std::size_t grid_size() const noexcept { return fields->g.size(); }
  const std::vector<double>& chi() const noexcept { return markers.chi; }
  const std::vector<double>& dchi() const noexcept { return markers.dchi; }
  const std::vector<double>& F() const noexcept { return markers.F; }
  const std::vector<double>& y() const noexcept { return markers.y; }
  const std::vector<double>& dy() const noexcept { return markers.dy; }

  const ScalarField& g_grid() const { return fields->g; }
  ScalarField G_grid() const { return fields->G(); }
  ScalarField dG_grid() const { return fields->dG(); }
  ScalarField c_grid() const { return fields->c(); }
};

inline std::vector<double> cell_centred_labels(const SymmetryFold& fold, std::size_t M) {
  std::vector<double> labels(M);
  const double w = fold.period() / static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) {
    labels[i] = fold.domain_start() + (static_cast<double>(i) + 0.5) * w;
  }
  return labels;
}

/// Inverse flow map θ -> χ⁻¹(θ) as a monotone cubic through the markers.
inline MonotoneCircleMap inverse_map(const std::vector<double>& labels,
                                     const MarkerArrays& mk, const SymmetryFold& fold) {
  std::vector<double> slope(mk.size());
  for (std::size_t i = 0; i < mk.size(); ++i) {
    if (!(mk.dchi[i] > 0.0)) {
      throw NumericalError("flow map lost orientation: dchi <= 0 at marker " + std::to_string(i));
    }
    slope[i] = 1.0 / mk.dchi[i];
  }
  try {
    return MonotoneCircleMap(mk.chi, labels, std::move(slope), fold.period());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("crossing characteristics: ") + e.what());
  }
}

inline ScalarField reconstruct_on_grid(const InitialData& data, const std::vector<double>& labels,
                                       const MarkerArrays& mk, std::size_t N) {
  const SymmetryFold& fold = data.fold();
  const MonotoneCircleMap inv = inverse_map(labels, mk, fold);
  const double h = fold.period() / static_cast<double>(N);
  std::vector<double> nodes(N);
  for (std::size_t k = 0; k < N; ++k) nodes[k] = fold.domain_start() + h * static_cast<double>(k);
  const std::vector<double> pre = inv.evaluate_sorted(nodes);
  std::vector<double> g(N);
  for (std::size_t k = 0; k < N; ++k) g[k] = data.value(pre[k], h);
  return ScalarField(fold, std::move(g));
}

/// g(t) = g₀ ∘ χ⁻¹(t) sampled on the grid of the state.
inline ScalarField reconstruct_g(const FlowState& state) {
  return reconstruct_on_grid(*state.data, state.labels, state.markers, state.grid_size());
}

/// g(t, θ) at arbitrary angles, with the same inverse map as reconstruct_g.
inline std::vector<double> reconstruct_at(const FlowState& state,
                                          const std::vector<double>& thetas) {
  const MonotoneCircleMap inv = inverse_map(state.labels, state.markers, state.fold);
  const double h = state.fold.period() / static_cast<double>(state.grid_size());
  std::vector<double> out(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) out[i] = state.data->value(inv(thetas[i]), h);
  return out;
}

/// 2G at arbitrary positions by direct evaluation of the trigonometric interpolant.
inline std::vector<double> velocity_at(const ScalarField& G, const std::vector<double>& positions) {
  const SpectralField Gh = to_spectral(G);
  std::vector<double> v(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) v[i] = 2.0 * evaluate(Gh, positions[i]);
  return v;
}

inline void update_latch(FlowState& s) {
  for (std::size_t i = 0; i < s.marker_count(); ++i) {
    const bool negative = s.markers.F[i] < 0.0;
    if (std::isinf(s.crossing_time[i])) {
      if (negative) s.crossing_time[i] = s.t;
    } else if (!negative) {
      ++s.relapses;
    }
  }
}

inline FlowState init_state(const InitialData& data, const SymmetryFold& fold, std::size_t M,
                            std::size_t N, const FlowOptions& opt = {}) {
  if (!(data.fold() == fold)) {
    throw ConfigError("initial data has fold m = " + std::to_string(data.fold().m()) +
                      " but the run uses m = " + std::to_string(fold.m()));
  }
  if (M < 8) throw ConfigError("marker count must be >= 8");
  if (N < 8 || !is_power_of_two(N)) throw ConfigError("grid size must be a power of two >= 8");
  FlowState s;
  s.t = 0.0;
  s.fold = fold;
  s.data = std::make_shared<const InitialData>(data);
  s.labels = cell_centred_labels(fold, M);
  s.markers.resize(M);
  s.fields = build_fields(data.sample(N), opt.oversample);
  for (std::size_t i = 0; i < M; ++i) {
    const double f = evaluate(s.fields->dG_hat, s.labels[i]);
    s.markers.chi[i] = s.labels[i];
    s.markers.dchi[i] = 1.0;
    s.markers.F[i] = f;
    s.markers.y[i] = 1.0;
    s.markers.dy[i] = -f;
  }
  s.crossing_time.assign(M, std::numeric_limits<double>::infinity());
  update_latch(s);
  return s;
}

namespace detail {

inline void rhs(const MarkerArrays& s, const EulerianFields& f, MarkerArrays& out) {
  out.resize(s.size());
  parallel_for(s.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double Gc[2];
      SpectralInterpolant::evaluate_many(s.chi[i], {&f.G_at, &f.c_at}, Gc);
      const double G = Gc[0];
      const double c = Gc[1];
      out.chi[i] = 2.0 * G;
      out.dchi[i] = 2.0 * s.F[i] * s.dchi[i];
      out.F[i] = s.F[i] * s.F[i] - c;
      out.y[i] = s.dy[i];
      out.dy[i] = c * s.y[i];
    }
  });
}

inline void axpy(const MarkerArrays& s, double a, const MarkerArrays& k, MarkerArrays& out) {
  out.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.chi[i] = s.chi[i] + a * k.chi[i];
    out.dchi[i] = s.dchi[i] + a * k.dchi[i];
    out.F[i] = s.F[i] + a * k.F[i];
    out.y[i] = s.y[i] + a * k.y[i];
    out.dy[i] = s.dy[i] + a * k.dy[i];
  }
}

}  // namespace detail

/// Largest admissible |dt| for the state under the CFL-type bound.
inline double max_stable_dt(const FlowState& s, double cfl) {
  const double v = s.fields->max_speed;
  return v > 0.0 ? cfl * s.fold.period() / v : std::numeric_limits<double>::infinity();
}

/**
 * @brief One RK4 step of the coupled marker system, with G and c rebuilt
 * from the reconstructed field according to the refresh schedule.
 */
inline FlowState step(const FlowState& state, double dt, const FlowOptions& opt = {}) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be finite and nonzero");
  if (std::abs(dt) > max_stable_dt(state, opt.cfl) * (1.0 + 1e-12)) {
    throw ConfigError("time step violates the CFL bound: |dt| = " + std::to_string(std::abs(dt)) +
                      " > " + std::to_string(max_stable_dt(state, opt.cfl)));
  }
  const std::size_t N = state.grid_size();
  const InitialData& data = *state.data;
  auto rebuild = [&](const MarkerArrays& mk) {
    return build_fields(reconstruct_on_grid(data, state.labels, mk, N), opt.oversample);
  };
  const bool every = opt.refresh == RefreshSchedule::every_stage;
  const MarkerArrays& s0 = state.markers;
  MarkerArrays k1, k2, k3, k4, tmp;

  detail::rhs(s0, *state.fields, k1);
  detail::axpy(s0, 0.5 * dt, k1, tmp);
  auto f2 = every ? rebuild(tmp) : state.fields;
  detail::rhs(tmp, *f2, k2);
  detail::axpy(s0, 0.5 * dt, k2, tmp);
  auto f3 = rebuild(tmp);
  detail::rhs(tmp, *f3, k3);
  detail::axpy(s0, dt, k3, tmp);
  auto f4 = every ? rebuild(tmp) : f3;
  detail::rhs(tmp, *f4, k4);

  FlowState next;
  next.t = state.t + dt;
  next.fold = state.fold;
  next.data = state.data;
  next.labels = state.labels;
  next.crossing_time = state.crossing_time;
  next.relapses = state.relapses;
  MarkerArrays& s1 = next.markers;
  s1.resize(s0.size());
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < s0.size(); ++i) {
    s1.chi[i] = s0.chi[i] + w * (k1.chi[i] + 2.0 * k2.chi[i] + 2.0 * k3.chi[i] + k4.chi[i]);
    s1.dchi[i] = s0.dchi[i] + w * (k1.dchi[i] + 2.0 * k2.dchi[i] + 2.0 * k3.dchi[i] + k4.dchi[i]);
    s1.F[i] = s0.F[i] + w * (k1.F[i] + 2.0 * k2.F[i] + 2.0 * k3.F[i] + k4.F[i]);
    s1.y[i] = s0.y[i] + w * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]);
    s1.dy[i] = s0.dy[i] + w * (k1.dy[i] + 2.0 * k2.dy[i] + 2.0 * k3.dy[i] + k4.dy[i]);
  }
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (!(s1.y[i] > 0.0)) {
      throw NumericalError("y lost positivity at marker " + std::to_string(i) +
                           ", t = " + std::to_string(next.t));
    }
  }
  next.fields = rebuild(s1);
  update_latch(next);
  return next;
}

/// Largest spacing between neighbouring markers, including the wrap-around pair.
inline double max_marker_gap(const FlowState& s) {
  const auto& chi = s.markers.chi;
  double gap = chi.front() + s.fold.period() - chi.back();
  for (std::size_t i = 0; i + 1 < chi.size(); ++i) gap = std::max(gap, chi[i + 1] - chi[i]);
  return gap;
}

/// max_i |F_i - ∂θG(χ_i)| with ∂θG evaluated exactly from the current spectrum.
inline double f_consistency(const FlowState& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.marker_count(); ++i) {
    worst = std::max(worst, std::abs(s.markers.F[i] - evaluate(s.fields->dG_hat, s.markers.chi[i])));
  }
  return worst;
}

/// max_i |∂θχ_i y_i^2 - 1|.
inline double riccati_consistency(const FlowState& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.marker_count(); ++i) {
    const double y = s.markers.y[i];
    worst = std::max(worst, std::abs(s.markers.dchi[i] * y * y - 1.0));
  }
  return worst;
}

/// |(1/M) Σ ∂θχ_i - 1|.
inline double measure_defect(const FlowState& s) {
  double sum = 0.0;
  for (double d : s.markers.dchi) sum += d;
  return std::abs(sum / static_cast<double>(s.marker_count()) - 1.0);
}

}  // namespace si_euler::flow
