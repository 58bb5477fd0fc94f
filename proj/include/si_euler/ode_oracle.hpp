#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/rk4.hpp"

namespace si_euler::ode {

using ForcingFn = std::function<double(double)>;

/// A named forcing c(t) for y'' = c y.
struct Forcing {
  std::string name;
  ForcingFn c;
};

namespace forcing {

inline Forcing constant(double a) {
  return {"constant", [a](double) { return a; }};
}

/// 2/(1+t)^3, with ∫₀^∞ t c(t) dt = 1.
inline Forcing power() {
  return {"power", [](double t) { return 2.0 / ((1.0 + t) * (1.0 + t) * (1.0 + t)); }};
}

inline Forcing exponential(double alpha, double beta, double gamma) {
  return {"exponential",
          [alpha, beta, gamma](double t) { return alpha + beta * std::exp(-gamma * t); }};
}

/// c0 - C0 (t - t0).
inline Forcing linear(double c0, double C0, double t0) {
  return {"linear", [c0, C0, t0](double t) { return c0 - C0 * (t - t0); }};
}

}  // namespace forcing

struct YPath {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> dy;
  bool crossed_zero = false;
  double crossing_time = std::numeric_limits<double>::infinity();
};

/**
 * @brief RK4 for y'' = c(t) y on [0, T] with step ≤ dt; every step is stored.
 * Stops at the first step where y becomes non-positive.
 */
inline YPath integrate_y(const ForcingFn& c, double y0, double dy0, double T, double dt = 1e-3) {
  if (!(y0 > 0.0)) throw ConfigError("integrate_y: y0 must be positive");
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("integrate_y: T and dt must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const double h = T / static_cast<double>(steps);
  YPath p;
  p.t.reserve(steps + 1);
  p.y.reserve(steps + 1);
  p.dy.reserve(steps + 1);
  p.t.push_back(0.0);
  p.y.push_back(y0);
  p.dy.push_back(dy0);
  std::vector<double> s{y0, dy0};
  auto rhs = [&](double t, const std::vector<double>& u) {
    return std::vector<double>{u[1], c(t) * u[0]};
  };
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t0 = h * static_cast<double>(k - 1);
    s = rk4_step(s, t0, h, rhs);
    p.t.push_back(h * static_cast<double>(k));
    p.y.push_back(s[0]);
    p.dy.push_back(s[1]);
    if (!(s[0] > 0.0)) {
      p.crossed_zero = true;
      p.crossing_time = p.t.back();
      break;
    }
  }
  return p;
}

/// F = -y'/y along a path.
inline std::vector<double> riccati_equiv(const YPath& p) {
  std::vector<double> F(p.y.size());
  for (std::size_t k = 0; k < F.size(); ++k) {
    if (!(p.y[k] > 0.0)) throw NumericalError("riccati_equiv: y <= 0 on the path");
    F[k] = -p.dy[k] / p.y[k];
  }
  return F;
}

/// max |F' - (F² - c)| with F' by centred differences on the interior samples.
inline double riccati_defect(const YPath& p, const ForcingFn& c) {
  const std::vector<double> F = riccati_equiv(p);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < F.size(); ++k) {
    const double dF = (F[k + 1] - F[k - 1]) / (p.t[k + 1] - p.t[k - 1]);
    worst = std::max(worst, std::abs(dF - (F[k] * F[k] - c(p.t[k]))));
  }
  return worst;
}

struct RiccatiPath {
  std::vector<double> t;
  std::vector<double> F;
  double negative_time = std::numeric_limits<double>::infinity();  ///< first F < 0
};

/// f' = f² - c(t) from f(t0) = f0 on [t0, t1]; stops once f < 0 or |f| blows up.
inline RiccatiPath integrate_riccati(const ForcingFn& c, double f0, double t0, double t1,
                                     double dt = 1e-4) {
  const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
  const double h = (t1 - t0) / static_cast<double>(std::max<std::size_t>(steps, 1));
  RiccatiPath p;
  p.t.push_back(t0);
  p.F.push_back(f0);
  std::vector<double> s{f0};
  auto rhs = [&](double t, const std::vector<double>& u) {
    return std::vector<double>{u[0] * u[0] - c(t)};
  };
  for (std::size_t k = 1; k <= steps; ++k) {
    s = rk4_step(s, t0 + h * static_cast<double>(k - 1), h, rhs);
    p.t.push_back(t0 + h * static_cast<double>(k));
    p.F.push_back(s[0]);
    if (s[0] < 0.0) {
      p.negative_time = p.t.back();
      break;
    }
    if (!std::isfinite(s[0]) || std::abs(s[0]) > 1e12) break;
  }
  return p;
}

enum class Scenario { positive_limit, zero_limit, divergent, undecided };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::positive_limit:
      return "positive_limit";
    case Scenario::zero_limit:
      return "zero_limit";
    case Scenario::divergent:
      return "divergent";
    case Scenario::undecided:
      return "undecided";
  }
  return "undecided";
}

struct OdeClassification {
  Scenario scenario = Scenario::undecided;
  double limit_estimate = 0.0;
  bool limit_infinite = false;
  double weighted_integral = 0.0;  ///< extrapolated when convergent, ∫₀ᵀ otherwise
  bool integral_convergent = false;
  /// Divergent paths: first time y' > 0. Otherwise 0 (y' < 0 throughout).
  double monotone_after = 0.0;
  /// sup t|y'| over [T/2, T] does not exceed its value over [0, T/2].
  bool tail_bound = false;
  bool consistent = true;
  std::string note;
};

namespace detail {

inline double aitken(double x0, double x1, double x2) {
  const double d1 = x1 - x0;
  const double d2 = x2 - x1;
  const double den = d2 - d1;
  if (std::abs(den) <= 1e-300 || std::abs(d2) >= std::abs(d1)) return x2;
  return x2 - d2 * d2 / den;
}

inline double weighted_piece(const ForcingFn& c, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate([&](double t) { return t * c(t); }, a, b, 15, 1e-14);
}

inline double value_at(const YPath& p, double t, const std::vector<double>& v) {
  auto it = std::lower_bound(p.t.begin(), p.t.end(), t);
  if (it == p.t.end()) return v.back();
  return v[static_cast<std::size_t>(it - p.t.begin())];
}

}  // namespace detail

/**
 * @brief Finite-horizon classification of y'' = c y, y(0) = y0, y'(0) = dy0.
 *
 * divergent: y'(T) > tol. Otherwise y_∞ is extrapolated (Aitken) from
 * y(T/4), y(T/2), y(T) and ∫₀ᵀ t c dt is tested on the dyadic windows
 * [T/8, T/4], [T/4, T/2], [T/2, T]: divergent if every increment exceeds tol
 * and they do not shrink (ratio >= 0.75). positive_limit needs y_∞ > 10 tol
 * and a convergent integral; zero_limit needs y_∞ <= 10 tol.
 */
inline OdeClassification classify(const ForcingFn& c, double y0, double dy0, double T,
                                  double tol = 1e-6, double dt = 1e-3) {
  OdeClassification out;
  const YPath p = integrate_y(c, y0, dy0, T, dt);
  if (p.crossed_zero) {
    out.scenario = Scenario::undecided;
    out.note = "y crossed zero at t = " + std::to_string(p.crossing_time);
    return out;
  }

  const double q1 = detail::weighted_piece(c, 0.0, T / 8.0);
  const double w1 = detail::weighted_piece(c, T / 8.0, T / 4.0);
  const double w2 = detail::weighted_piece(c, T / 4.0, T / 2.0);
  const double w3 = detail::weighted_piece(c, T / 2.0, T);
  const double I_quarter = q1 + w1;
  const double I_half = I_quarter + w2;
  const double I_full = I_half + w3;
  const bool growing = w1 > tol && w2 > tol && w3 > tol && w3 >= 0.75 * w2 && w2 >= 0.75 * w1;
  out.integral_convergent = !growing;
  out.weighted_integral =
      out.integral_convergent ? detail::aitken(I_quarter, I_half, I_full) : I_full;

  double sup_head = 0.0, sup_tail = 0.0;
  for (std::size_t k = 0; k < p.t.size(); ++k) {
    double& sup = p.t[k] <= 0.5 * T ? sup_head : sup_tail;
    sup = std::max(sup, p.t[k] * std::abs(p.dy[k]));
  }
  out.tail_bound = sup_tail <= sup_head;

  if (p.dy.back() > tol) {
    out.scenario = Scenario::divergent;
    out.limit_infinite = true;
    out.limit_estimate = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < p.dy.size(); ++k) {
      if (p.dy[k] > 0.0) {
        out.monotone_after = p.t[k];
        break;
      }
    }
    return out;
  }

  const double y1 = detail::value_at(p, T / 4.0, p.y);
  const double y2 = detail::value_at(p, T / 2.0, p.y);
  const double y3 = p.y.back();
  out.limit_estimate = std::clamp(detail::aitken(y1, y2, y3), 0.0, y3);
  if (out.limit_estimate > 10.0 * tol) {
    if (out.integral_convergent) {
      out.scenario = Scenario::positive_limit;
    } else {
      out.scenario = Scenario::undecided;
      out.consistent = false;
      out.note = "positive limit estimate with a divergent weighted integral";
    }
  } else {
    out.scenario = Scenario::zero_limit;
  }
  return out;
}

/**
 * @brief Initial slope of the principal (non-increasing, positive) solution
 * on [0, T]: bisection between paths that cross zero or stay monotone and
 * paths that turn upward.
 */
inline double shoot_decaying(const ForcingFn& c, double T, double y0 = 1.0, double dt = 1e-3,
                             int iterations = 80) {
  double sup = 0.0;
  for (int k = 0; k <= 1000; ++k) sup = std::max(sup, c(T * k / 1000.0));
  double lo = -2.0 * std::sqrt(sup) * y0;
  double hi = 0.0;
  // -1: crosses zero, +1: turns upward, 0: neither by T.
  auto kind = [&](double s) {
    const YPath p = integrate_y(c, y0, s, T, dt);
    if (p.crossed_zero) return -1;
    for (double v : p.dy) {
      if (v > 0.0) return 1;
    }
    return 0;
  };
  if (kind(lo) >= 0 || kind(hi) <= 0) {
    throw NumericalError("shoot_decaying: slope bracket does not separate the two behaviours");
  }
  for (int it = 0; it < iterations && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    // Paths that neither cross nor turn by T move the lower end up, so the
    // result approaches the slope whose derivative first vanishes at T.
    (kind(mid) <= 0 ? lo : hi) = mid;
  }
  // Under strong forcing the neutral band can be narrower than one ulp; the
  // collapsed bracket is then the answer.
  if (kind(lo) != 0 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
    throw NumericalError("shoot_decaying: no non-increasing positive path found");
  }
  return lo;
}

}  // namespace si_euler::ode
