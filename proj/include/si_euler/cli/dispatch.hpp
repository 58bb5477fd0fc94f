#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "si_euler/cli/config.hpp"
#include "si_euler/cli/output.hpp"
#include "si_euler/cli/selfcheck.hpp"
#include "si_euler/contour.hpp"
#include "si_euler/diagnostics.hpp"
#include "si_euler/flow.hpp"
#include "si_euler/ode_oracle.hpp"
#include "si_euler/steady.hpp"

namespace si_euler::cli {

using Json = nlohmann::ordered_json;

struct DispatchResult {
  int exit_code = 0;
  std::string status;
  std::string summary;
  Bundle bundle;
};

namespace detail {

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json profile_json(const JumpProfile& p) {
  return {{"m", p.fold().m()}, {"breakpoints", p.breakpoints()}, {"levels", p.levels()}};
}

inline void write_json(DispatchResult& r, const Json& j) {
  r.bundle.add("profile.json", j.dump(2) + "\n");
}

inline DispatchResult simulate(const RunConfig& c) {
  const SymmetryFold fold(c.m);
  const InitialData data = config_data(c);
  flow::RunParams rp;
  rp.markers = c.markers;
  rp.grid = c.grid;
  rp.dt = c.dt;
  rp.T = c.T;
  rp.cadence = c.cadence;
  flow::FlowOptions opt;
  opt.cfl = c.cfl;
  opt.gap_threshold = c.gap_threshold;
  opt.oversample = c.oversample;
  opt.refresh = c.refresh == "stages_1_3" ? flow::RefreshSchedule::stages_1_3
                                          : flow::RefreshSchedule::every_stage;
  const flow::Trajectory tr = flow::run(data, fold, rp, opt);

  DispatchResult r;
  const auto& d = tr.trace;
  CsvWriter diag(kDiagnosticsHeader);
  for (std::size_t k = 0; k < d.size(); ++k) {
    diag.row({d.times[k], d.entropy[k], d.h1dual[k], d.mean_g[k], d.l2_g[k], d.min_g[k], d.max_g[k]});
  }
  CsvWriter snaps(kSnapshotsHeader);
  CsvWriter marks(kMarkersHeader);
  for (const auto& s : tr.snapshots) {
    const ScalarField& g = s.g_grid();
    const ScalarField G = s.G_grid();
    for (std::size_t k = 0; k < g.size(); ++k) snaps.row({s.t, g.node(k), g[k], G[k]});
    for (std::size_t i = 0; i < s.marker_count(); ++i) {
      marks.row({s.t, s.labels[i], s.chi()[i], s.dchi()[i], s.F()[i], s.y()[i]});
    }
  }
  r.bundle.add("diagnostics.csv", diag.text());
  r.bundle.add("snapshots.csv", snaps.text());
  r.bundle.add("markers.csv", marks.text());

  const flow::FlowState& last = tr.final_state();
  const auto prof = diagnostics::extract_profile(last, d, c.profile_tol);
  const auto est = diagnostics::expanding_set_estimate(d, std::abs(last.t));
  Json j;
  j["schema"] = kJsonSchema;
  j["kind"] = "asymptotic_profile";
  j["run_status"] = flow::to_string(tr.status);
  j["t_final"] = last.t;
  j["outcome"] = diagnostics::to_string(diagnostics::classify_run(d));
  j["profile_kind"] = diagnostics::to_string(prof.kind);
  j["value"] = prof.value;
  j["levels"] = prof.levels;
  j["profile"] = prof.profile ? profile_json(*prof.profile) : Json(nullptr);
  j["residual"] = prof.residual;
  j["note"] = prof.note;
  j["expanding_set"] = {{"horizon", est.horizon},
                        {"count", est.markers.size()},
                        {"components", est.components},
                        {"measure", est.measure},
                        {"degenerate", est.degenerate}};
  j["entropy"] = {{"initial", d.entropy.front()}, {"final", d.entropy.back()},
                  {"quantum", d.quantum}, {"relapses", d.relapses}};
  j["h1dual"] = {{"initial", d.h1dual.front()}, {"final", d.h1dual.back()}};
  write_json(r, j);

  r.status = flow::to_string(tr.status);
  if (tr.status == flow::RunStatus::resolution_exhausted) {
    r.exit_code = static_cast<int>(ErrorCategory::resolution_exhausted);
    r.summary = tr.message;
  } else {
    r.summary = "simulate: t = " + num(last.t) + ", S = " + num(d.entropy.back()) +
                ", h1dual = " + num(d.h1dual.back());
  }
  return r;
}

inline DispatchResult contour(const RunConfig& c) {
  if (c.data != "piecewise") throw ConfigError("the contour command needs piecewise data");
  const JumpProfile p = config_profile(c);
  const auto form = c.kernel == "literal" ? kernel::KernelForm::literal : kernel::KernelForm::green;
  const auto tr = contour::contour_run(p, c.dt, c.T, c.cadence, form);
  DispatchResult r;
  CsvWriter csv(kContourHeader);
  for (std::size_t q = 0; q < tr.times.size(); ++q) {
    const JumpProfile& s = tr.profiles[q];
    const std::vector<double> v = contour::contour_velocity(s, form);
    for (std::size_t j = 0; j < s.jumps(); ++j) {
      csv.row({tr.times[q], static_cast<double>(j), s.breakpoints()[j], v[j]});
    }
  }
  r.bundle.add("contour.csv", csv.text());
  Json j;
  j["schema"] = kJsonSchema;
  j["kind"] = "contour";
  j["status"] = contour::to_string(tr.status);
  j["message"] = tr.message;
  j["kernel"] = c.kernel;
  j["t_final"] = tr.times.back();
  j["initial"] = profile_json(tr.profiles.front());
  j["final"] = profile_json(tr.profiles.back());
  write_json(r, j);
  r.status = contour::to_string(tr.status);
  if (tr.status == contour::ContourStatus::jump_merger) {
    r.exit_code = static_cast<int>(ErrorCategory::numerical);
    r.summary = tr.message;
  } else {
    r.summary = "contour: t = " + num(tr.times.back()) + ", " +
                std::to_string(tr.profiles.back().jumps()) + " jumps";
  }
  return r;
}

inline DispatchResult steady(const RunConfig& c) {
  if (c.levels.empty()) throw ConfigError("the steady command needs 'levels'");
  const SymmetryFold fold(c.m);
  std::optional<std::vector<double>> w0;
  if (!c.widths.empty() && c.widths.size() == c.levels.size()) {
    const JumpProfile p = config_profile(c);
    w0 = std::vector<double>(p.levels().size());
    for (std::size_t i = 0; i < w0->size(); ++i) (*w0)[i] = p.width(i);
  }
  const auto cand = steady::solve_rotating(c.levels, fold, c.rotation, w0, c.a0, c.steady_tol);
  const auto& s = cand.residuals;
  DispatchResult r;
  Json j;
  j["schema"] = kJsonSchema;
  j["kind"] = "steady_candidate";
  j["status"] = steady::to_string(cand.status);
  j["message"] = cand.message;
  j["rotation"] = cand.rotation;
  j["widths"] = cand.widths;
  j["profile"] = cand.profile ? profile_json(*cand.profile) : Json(nullptr);
  j["tangent_residual"] = cand.tangent_residual;
  j["newton_trace"] = cand.newton_trace;
  j["residuals"] = {{"speed_defect", s.speed_defect},     {"opposite_defect", s.opposite_defect},
                    {"min_jump_slope", s.min_jump_slope}, {"extremal_defect", s.extremal_defect},
                    {"c1_defect", s.c1_defect},           {"speeds_equal", s.speeds_equal},
                    {"opposite_slopes", s.opposite_slopes}, {"extremal_slopes", s.extremal_slopes},
                    {"c1_matching", s.c1_matching},       {"degenerate", s.degenerate},
                    {"passed", s.passed()}};
  write_json(r, j);
  r.status = steady::to_string(cand.status);
  const bool bad = cand.status == steady::SteadyStatus::diverged ||
                   (cand.status == steady::SteadyStatus::converged && !s.passed());
  r.exit_code = bad ? static_cast<int>(ErrorCategory::numerical) : 0;
  r.summary = "steady: " + r.status + (cand.message.empty() ? "" : " (" + cand.message + ")");
  return r;
}

inline ode::Forcing config_forcing(const RunConfig& c) {
  const auto& q = c.forcing_params;
  if (c.forcing == "power") return ode::forcing::power();
  if (c.forcing == "exponential") {
    return q.empty() ? ode::forcing::exponential(0.5, 0.5, 1.0)
                     : ode::forcing::exponential(q[0], q[1], q[2]);
  }
  if (c.forcing == "linear") {
    return q.empty() ? ode::forcing::linear(0.5, 1.0, 1.0) : ode::forcing::linear(q[0], q[1], q[2]);
  }
  return ode::forcing::constant(q.empty() ? 1.0 : q[0]);
}

inline DispatchResult ode(const RunConfig& c) {
  if (!(c.T > 0.0)) throw ConfigError("the ode command needs T > 0");
  const ode::Forcing f = config_forcing(c);
  const double dy0 =
      c.dy0 == "shoot" ? ode::shoot_decaying(f.c, c.T, c.y0, c.ode_dt) : to_double("dy0", c.dy0);
  const auto cls = ode::classify(f.c, c.y0, dy0, c.T, c.ode_tol, c.ode_dt);
  const ode::YPath path = ode::integrate_y(f.c, c.y0, dy0, c.T, c.ode_dt);
  DispatchResult r;
  CsvWriter csv(kOdeHeader);
  const std::size_t stride =
      c.cadence > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.cadence / c.ode_dt)))
                      : 1;
  for (std::size_t k = 0; k < path.t.size(); ++k) {
    if (k % stride == 0 || k + 1 == path.t.size()) csv.row({path.t[k], path.y[k], path.dy[k]});
  }
  r.bundle.add("ode.csv", csv.text());
  Json j;
  j["schema"] = kJsonSchema;
  j["kind"] = "ode_classification";
  j["forcing"] = f.name;
  j["forcing_params"] = c.forcing_params;
  j["y0"] = c.y0;
  j["dy0"] = dy0;
  j["dy0_source"] = c.dy0 == "shoot" ? "shoot" : "config";
  j["scenario"] = ode::to_string(cls.scenario);
  j["limit_estimate"] = finite_or_null(cls.limit_estimate);
  j["limit_infinite"] = cls.limit_infinite;
  j["weighted_integral"] = cls.weighted_integral;
  j["integral_convergent"] = cls.integral_convergent;
  j["monotone_after"] = cls.monotone_after;
  j["tail_bound"] = cls.tail_bound;
  j["consistent"] = cls.consistent;
  j["note"] = cls.note;
  write_json(r, j);
  r.status = ode::to_string(cls.scenario);
  r.summary = "ode: " + r.status + ", weighted integral " + num(cls.weighted_integral);
  return r;
}

inline DispatchResult selfcheck(const RunConfig& c) {
  const auto checks = run_selfcheck(c.seed);
  DispatchResult r;
  Json list = Json::array();
  std::size_t failed = 0;
  for (const auto& k : checks) {
    list.push_back({{"name", k.name}, {"value", finite_or_null(k.value)}, {"tol", k.tol},
                    {"passed", k.passed}});
    if (!k.passed) ++failed;
  }
  Json j;
  j["schema"] = kJsonSchema;
  j["kind"] = "selfcheck";
  j["seed"] = c.seed;
  j["checks"] = list;
  j["failed"] = failed;
  r.bundle.add("selfcheck.json", j.dump(2) + "\n");
  r.status = failed == 0 ? "passed" : "failed";
  r.exit_code = failed == 0 ? 0 : static_cast<int>(ErrorCategory::numerical);
  r.summary = "selfcheck: " + std::to_string(checks.size() - failed) + "/" +
              std::to_string(checks.size()) + " checks passed";
  for (const auto& k : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %.3g (tol %.3g)", k.value, k.tol);
    r.summary += "\n  " + std::string(k.passed ? "PASS " : "FAIL ") + k.name + buf;
  }
  return r;
}

}  // namespace detail

/// Runs the configured command; the bundle is returned, not yet written.
inline DispatchResult dispatch(const RunConfig& c) {
  if (c.command == "simulate") return detail::simulate(c);
  if (c.command == "contour") return detail::contour(c);
  if (c.command == "steady") return detail::steady(c);
  if (c.command == "ode") return detail::ode(c);
  if (c.command == "selfcheck") return detail::selfcheck(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

inline Json manifest(const RunConfig& c, const DispatchResult& r) {
  Json j;
  j["schema"] = kJsonSchema;
  j["tool"] = "si-euler";
  j["version"] = kToolVersion;
  j["csv_schema"] = kCsvSchema;
  j["csv_headers"] = {{"diagnostics.csv", kDiagnosticsHeader}, {"snapshots.csv", kSnapshotsHeader},
                      {"markers.csv", kMarkersHeader},         {"contour.csv", kContourHeader},
                      {"ode.csv", kOdeHeader}};
  j["command"] = c.command;
  j["preset"] = c.preset;
  j["status"] = r.status;
  j["exit_code"] = r.exit_code;
  j["config"] = echo(c);
  return j;
}

}  // namespace si_euler::cli
