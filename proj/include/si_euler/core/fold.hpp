#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "si_euler/core/error.hpp"

namespace si_euler {

inline constexpr double pi = std::numbers::pi;

/**
 * @brief m-fold rotational symmetry together with the kernel constants of
 * the symmetrized inverse of (4 + d^2/dθ^2).
 *
 * amplitude = 3π / (2(m^2 - 4)), offset = 1/4 - 2·amplitude/π.
 * The offset is negative for m = 3, zero for m = 4 and positive for m >= 5.
 */
class SymmetryFold {
 public:
  explicit SymmetryFold(int m) : m_(m) {
    if (m < 3) {
      throw ConfigError("symmetry fold m must be >= 3 (the elliptic operator "
                        "4 + d^2/dθ^2 is singular at wavenumber 2), got m = " +
                        std::to_string(m));
    }
    const double mm = static_cast<double>(m) * m;
    amplitude_ = 3.0 * pi / (2.0 * (mm - 4.0));
    offset_ = 0.25 - 2.0 * amplitude_ / pi;
  }

  int m() const noexcept { return m_; }
  /// C_m
  double amplitude() const noexcept { return amplitude_; }
  /// C̃_m
  double offset() const noexcept { return offset_; }

  /// Length of the fundamental domain [-π/m, π/m).
  double period() const noexcept { return 2.0 * pi / m_; }
  double half_period() const noexcept { return pi / m_; }
  double domain_start() const noexcept { return -pi / m_; }

  /// Forcing positivity (and everything downstream of it) needs m >= 4.
  bool forcing_signed() const noexcept { return m_ >= 4; }

  /// Maps θ into [-π/m, π/m).
  double wrap(double theta) const noexcept {
    const double p = period();
    double r = std::fmod(theta - domain_start(), p);
    if (r < 0.0) r += p;
    if (r >= p) r -= p;
    return domain_start() + r;
  }

  friend bool operator==(const SymmetryFold& a, const SymmetryFold& b) {
    return a.m_ == b.m_;
  }

 private:
  int m_;
  double amplitude_ = 0.0;
  double offset_ = 0.0;
};

/// Kernel constants for fold m; rejects m <= 2.
inline SymmetryFold symmetry_constants(int m) { return SymmetryFold(m); }

}  // namespace si_euler
