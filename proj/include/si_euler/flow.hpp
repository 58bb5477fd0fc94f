#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/diagnostics.hpp"
#include "si_euler/flow_state.hpp"
#include "si_euler/initial_data.hpp"

namespace si_euler::flow {

enum class RunStatus { completed, resolution_exhausted };

inline const char* to_string(RunStatus s) {
  return s == RunStatus::completed ? "completed" : "resolution_exhausted";
}

struct Trajectory {
  std::vector<FlowState> snapshots;
  diagnostics::DiagnosticsTrace trace;
  RunStatus status = RunStatus::completed;
  std::string message;

  const FlowState& final_state() const { return snapshots.back(); }
};

struct RunParams {
  std::size_t markers = 1024;
  std::size_t grid = 1024;
  double dt = 1e-3;
  double T = 1.0;       ///< signed; negative integrates backward
  double cadence = 1.0;  ///< snapshot spacing in time; <= 0 keeps only the end points
};

/// Optional per-step hook, e.g. for progress reporting.
using StepObserver = std::function<void(const FlowState&)>;

/**
 * @brief Integrates from t = 0 to t = T with |dt| adjusted down so that
 * |T| is an integer number of steps. Diagnostics are recorded every step.
 * Stops early with RunStatus::resolution_exhausted once neighbouring
 * markers drift further apart than opt.gap_threshold.
 */
inline Trajectory run(const InitialData& data, const SymmetryFold& fold, const RunParams& p,
                      const FlowOptions& opt = {}, const StepObserver& observer = {}) {
  if (!(p.dt > 0.0)) throw ConfigError("dt must be positive (the sign of T sets the direction)");
  if (!std::isfinite(p.T)) throw ConfigError("T must be finite");
  Trajectory tr;
  FlowState s = init_state(data, fold, p.markers, p.grid, opt);
  diagnostics::record(tr.trace, s);
  tr.snapshots.push_back(s);
  const double span = std::abs(p.T);
  const auto steps = static_cast<std::size_t>(std::ceil(span / p.dt - 1e-9));
  if (steps == 0) return tr;
  const double dt = std::copysign(span / static_cast<double>(steps), p.T);
  const std::size_t every =
      p.cadence > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(
                                                     std::llround(p.cadence / std::abs(dt))))
                      : steps;
  for (std::size_t n = 1; n <= steps; ++n) {
    s = step(s, dt, opt);
    diagnostics::record(tr.trace, s);
    if (observer) observer(s);
    const double gap = max_marker_gap(s);
    if (gap > opt.gap_threshold) {
      tr.status = RunStatus::resolution_exhausted;
      tr.message = "marker spacing " + std::to_string(gap) + " exceeds the gap threshold " +
                   std::to_string(opt.gap_threshold) + " at t = " + std::to_string(s.t);
      tr.snapshots.push_back(s);
      return tr;
    }
    if (n % every == 0 || n == steps) tr.snapshots.push_back(s);
  }
  return tr;
}

}  // namespace si_euler::flow
