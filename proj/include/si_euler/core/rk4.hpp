#pragma once

#include <cstddef>
#include <vector>

namespace si_euler {

/// One classical RK4 step for y' = rhs(t, y) on a flat state vector.
template <typename Rhs>
std::vector<double> rk4_step(const std::vector<double>& y, double t, double dt, Rhs&& rhs) {
  const std::size_t n = y.size();
  std::vector<double> tmp(n);
  const std::vector<double> k1 = rhs(t, y);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  const std::vector<double> k2 = rhs(t + 0.5 * dt, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  const std::vector<double> k3 = rhs(t + 0.5 * dt, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  const std::vector<double> k4 = rhs(t + dt, tmp);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace si_euler
