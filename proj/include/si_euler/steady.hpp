#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "si_euler/contour.hpp"
#include "si_euler/core/error.hpp"
#include "si_euler/jump_profile.hpp"

namespace si_euler::steady {

/// Coefficients of G = g/4 + (A/2) sin(2(θ - b0)) + (B/2) sin(2(θ - b1)) on (b0, b1).
struct LocalCoefficients {
  double A = 0.0;
  double B = 0.0;
};

namespace detail {

/// Same as local_G without the interval-length check.
inline LocalCoefficients local_coefficients(double g, double b0, double b1, double G0, double G1) {
  const double s = std::sin(2.0 * (b1 - b0));
  if (std::abs(s) < 1e-14) throw NumericalError("local representation degenerate: sin(2L) = 0");
  return {2.0 * (G1 - 0.25 * g) / s, -2.0 * (G0 - 0.25 * g) / s};
}

}  // namespace detail

/// Matches the boundary values G(b0) = G0, G(b1) = G1 on an interval shorter than π/4.
inline LocalCoefficients local_G(double g, double b0, double b1, double G0, double G1) {
  const double L = b1 - b0;
  if (!(L > 0.0)) throw ConfigError("local_G: interval must have positive length");
  if (!(L < pi / 4.0)) throw ConfigError("local_G: interval length must be < π/4");
  return detail::local_coefficients(g, b0, b1, G0, G1);
}

/// ∂θG of the local representation at θ.
inline double local_dG(const LocalCoefficients& c, double b0, double b1, double theta) {
  return c.A * std::cos(2.0 * (theta - b0)) + c.B * std::cos(2.0 * (theta - b1));
}

/// ∂θG > 0 on [b0, b0 + L] for L < π/4: a sinusoid in 2θ cannot dip below
/// zero inside an arc shorter than π/2 while staying positive at both ends.
inline bool local_G_positive(const LocalCoefficients& c, double L) {
  const double k = std::cos(2.0 * L);
  return c.A + c.B * k > 0.0 && c.A * k + c.B > 0.0;
}

// ---------------------------------------------------------------------------

struct SteadyReport {
  double speed_defect = 0.0;     ///< max |a_j' - c|
  double opposite_defect = 0.0;  ///< max |∂θG(a_j) + ∂θG(a_{j+1})|
  double min_jump_slope = 0.0;   ///< min |∂θG(a_j)|
  double extremal_defect = 0.0;  ///< max |∂θG| over the domain minus max at the jumps
  double c1_defect = 0.0;        ///< one-sided slope mismatch of the local representations
  bool speeds_equal = false;
  bool opposite_slopes = false;
  bool extremal_slopes = false;
  bool c1_matching = false;
  bool degenerate = false;

  bool passed() const { return speeds_equal && opposite_slopes && extremal_slopes && c1_matching; }
};

enum class SteadyStatus { converged, no_nontrivial_state, diverged };

inline const char* to_string(SteadyStatus s) {
  switch (s) {
    case SteadyStatus::converged:
      return "converged";
    case SteadyStatus::no_nontrivial_state:
      return "no_nontrivial_state";
    case SteadyStatus::diverged:
      return "diverged";
  }
  return "diverged";
}

struct SteadyCandidate {
  std::optional<JumpProfile> profile;
  double rotation = 0.0;
  std::vector<double> widths;
  double tangent_residual = 0.0;  ///< max |(g_i - 2c) tan d_i + (g_{i+1} - 2c) tan d_{i+1}|
  SteadyStatus status = SteadyStatus::diverged;
  std::string message;
  std::vector<double> newton_trace;  ///< max-norm residual per iteration
  SteadyReport residuals;
};

/**
 * @brief Checks that a profile rotates rigidly: equal jump speeds, jump
 * slopes of ∂θG alternating with equal magnitude, those magnitudes being the
 * extrema of |∂θG|, and C¹ matching of the local representations.
 */
inline SteadyReport verify_steady(const SteadyCandidate& cand, double tol = 1e-8,
                                  std::size_t samples = 8192) {
  SteadyReport r;
  if (!cand.profile) return r;
  const JumpProfile& p = *cand.profile;
  if (p.degenerate()) {
    r.degenerate = true;
    r.speed_defect = std::abs(contour::contour_velocity(p)[0] - cand.rotation);
    r.speeds_equal = r.speed_defect <= tol;
    r.opposite_slopes = r.extremal_slopes = r.c1_matching = true;
    return r;
  }
  const std::size_t n = p.intervals();
  const auto& a = p.breakpoints();
  const auto& g = p.levels();

  const std::vector<double> v = contour::contour_velocity(p);
  for (double s : v) r.speed_defect = std::max(r.speed_defect, std::abs(s - cand.rotation));

  std::vector<double> slope(n);
  for (std::size_t j = 0; j < n; ++j) slope[j] = contour::dG_at(p, a[j]);
  r.min_jump_slope = std::abs(slope[0]);
  double max_jump = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    r.opposite_defect = std::max(r.opposite_defect, std::abs(slope[j] + slope[(j + 1) % n]));
    r.min_jump_slope = std::min(r.min_jump_slope, std::abs(slope[j]));
    max_jump = std::max(max_jump, std::abs(slope[j]));
  }

  double max_dense = 0.0;
  const double L = p.fold().period();
  for (std::size_t k = 0; k < samples; ++k) {
    const double th = a[0] + L * (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
    max_dense = std::max(max_dense, std::abs(contour::dG_at(p, th)));
  }
  r.extremal_defect = std::max(0.0, max_dense - max_jump);

  std::vector<double> G(n + 1);
  for (std::size_t j = 0; j <= n; ++j) G[j] = contour::G_at(p, a[j]);
  std::vector<LocalCoefficients> lc(n);
  for (std::size_t i = 0; i < n; ++i) {
    lc[i] = detail::local_coefficients(g[i], a[i], a[i + 1], G[i], G[i + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + 1) % n;
    const double right_end = local_dG(lc[i], a[i], a[i + 1], a[i + 1]);
    const double left_start = local_dG(lc[k], a[k], a[k + 1], a[k]);
    r.c1_defect = std::max(r.c1_defect, std::abs(right_end - left_start));
  }

  r.speeds_equal = r.speed_defect <= tol;
  r.opposite_slopes = r.opposite_defect <= tol && r.min_jump_slope > tol;
  r.extremal_slopes = r.extremal_defect <= tol;
  r.c1_matching = r.c1_defect <= tol;
  return r;
}

namespace detail {

// r_i = h_i sin d_i cos d_{i+1} + h_{i+1} sin d_{i+1} cos d_i (i < n-1), r_{n-1} = Σd - L.
// This is the tangent relation multiplied by cos d_i cos d_{i+1}; the cyclic
// relation between d_n and d_1 follows from the others.
inline Eigen::VectorXd tangent_residual(const Eigen::VectorXd& d, const std::vector<double>& h,
                                        double L) {
  const Eigen::Index n = d.size();
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    r(i) = h[i] * std::sin(d(i)) * std::cos(d(i + 1)) +
           h[i + 1] * std::sin(d(i + 1)) * std::cos(d(i));
  }
  r(n - 1) = d.sum() - L;
  return r;
}

inline Eigen::MatrixXd tangent_jacobian(const Eigen::VectorXd& d, const std::vector<double>& h) {
  const Eigen::Index n = d.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double si = std::sin(d(i)), ci = std::cos(d(i));
    const double sj = std::sin(d(i + 1)), cj = std::cos(d(i + 1));
    J(i, i) = h[i] * ci * cj - h[i + 1] * sj * si;
    J(i, i + 1) = -h[i] * si * sj + h[i + 1] * cj * ci;
  }
  J.row(n - 1).setOnes();
  return J;
}

}  // namespace detail

/**
 * @brief Rigidly rotating jump profile with the given levels and speed c.
 *
 * With h_i = g_i - 2c, a profile rotating at speed c has widths d_i with
 * h_i tan d_i + h_{i+1} tan d_{i+1} = 0 and Σ d_i = 2π/m. Solved by damped
 * Newton from equal widths (or `initial_widths`); the first breakpoint is
 * placed at `a0` (default: start of the fundamental domain).
 */
inline SteadyCandidate solve_rotating(const std::vector<double>& levels, const SymmetryFold& fold,
                                      double rotation = 0.0,
                                      std::optional<std::vector<double>> initial_widths = {},
                                      std::optional<double> a0 = {}, double tol = 1e-8) {
  const std::size_t n = levels.size();
  if (n < 2 || n % 2 != 0) throw ConfigError("steady: need an even number (>= 2) of levels");
  for (std::size_t i = 0; i < n; ++i) {
    if (levels[i] == levels[(i + 1) % n]) throw ConfigError("steady: adjacent levels must differ");
  }
  if (!fold.forcing_signed()) throw ConfigError("steady: requires m >= 4");
  const double L = fold.period();
  const double start = a0.value_or(fold.domain_start());

  SteadyCandidate cand;
  cand.rotation = rotation;
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = levels[i] - 2.0 * rotation;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h[i] * h[(i + 1) % n] < 0.0)) {
      cand.status = SteadyStatus::no_nontrivial_state;
      cand.message = "shifted levels g_i - 2c do not strictly alternate in sign";
      return cand;
    }
  }

  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  if (initial_widths) {
    if (initial_widths->size() != n) throw ConfigError("steady: initial widths size mismatch");
    for (std::size_t i = 0; i < n; ++i) d(static_cast<Eigen::Index>(i)) = (*initial_widths)[i];
  } else {
    d.setConstant(L / static_cast<double>(n));
  }
  auto admissible = [&](const Eigen::VectorXd& x) {
    return (x.array() > 0.0).all() && (x.array() < 0.5 * pi).all();
  };
  if (!admissible(d)) throw ConfigError("steady: initial widths must lie in (0, π/2)");

  Eigen::VectorXd r = detail::tangent_residual(d, h, L);
  double norm = r.lpNorm<Eigen::Infinity>();
  cand.newton_trace.push_back(norm);
  bool ok = norm <= 1e-15;
  for (int it = 0; it < 100 && !ok; ++it) {
    const Eigen::MatrixXd J = detail::tangent_jacobian(d, h);
    const Eigen::VectorXd step = J.fullPivLu().solve(-r);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half <= 30; ++half, lambda *= 0.5) {
      const Eigen::VectorXd trial = d + lambda * step;
      if (!admissible(trial)) continue;
      const Eigen::VectorXd rt = detail::tangent_residual(trial, h, L);
      const double nt = rt.lpNorm<Eigen::Infinity>();
      if (nt < norm || nt <= 1e-15) {
        d = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    cand.newton_trace.push_back(norm);
    if (!accepted) break;
    if (norm <= 1e-15 || lambda * step.lpNorm<Eigen::Infinity>() <= 1e-16) ok = norm <= 1e-12;
  }
  ok = ok || norm <= 1e-12;
  if (!ok) {
    cand.status = SteadyStatus::diverged;
    cand.message = "Newton did not converge (residual " + std::to_string(norm) + ")";
    return cand;
  }

  cand.widths.assign(d.data(), d.data() + n);
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tr = std::max(tr, std::abs(h[i] * std::tan(d(static_cast<Eigen::Index>(i))) +
                               h[(i + 1) % n] * std::tan(d(static_cast<Eigen::Index>((i + 1) % n)))));
  }
  cand.tangent_residual = tr;
  cand.profile = JumpProfile::from_widths(fold, start, cand.widths, levels);
  cand.status = SteadyStatus::converged;
  cand.residuals = verify_steady(cand, tol);
  return cand;
}

}  // namespace si_euler::steady
