#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "si_euler/contour.hpp"
#include "si_euler/diagnostics.hpp"
#include "si_euler/flow.hpp"
#include "si_euler/kernel.hpp"
#include "si_euler/ode_oracle.hpp"
#include "si_euler/steady.hpp"

namespace si_euler::cli {

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool passed = false;
};

namespace detail {

inline Check check_le(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol};
}

inline double rotation_average_defect(int m) {
  const SymmetryFold fold(m);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double th = -pi + 2.0 * pi * (k + 0.5) / 1000.0;
    double avg = 0.0;
    for (int j = 0; j < m; ++j) avg += kernel::kernel_eval_full(th + 2.0 * pi * j / m);
    avg /= m;
    worst = std::max(worst, std::abs(avg - kernel::kernel_eval_green(th, fold)));
  }
  return worst;
}

}  // namespace detail

/**
 * @brief Fast oracle-equivalence and invariant checks at reduced size.
 * Every check is expected to pass on a correct build.
 */
inline std::vector<Check> run_selfcheck(std::uint64_t seed) {
  using detail::check_le;
  std::vector<Check> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double cdef = 0.0;
  for (int m = 3; m <= 8; ++m) {
    const SymmetryFold f(m);
    const double C = 3.0 * pi / (2.0 * (m * m - 4.0));
    cdef = std::max({cdef, std::abs(f.amplitude() - C), std::abs(f.offset() - (0.25 - 2.0 * C / pi))});
  }
  out.push_back(check_le("symmetry constants", cdef, 1e-15));
  const bool signs = SymmetryFold(3).offset() < 0.0 && std::abs(SymmetryFold(4).offset()) <= 1e-15 &&
                     SymmetryFold(5).offset() > 0.0;
  out.push_back({"offset signs (-, 0, +) for m = 3, 4, 5", signs ? 0.0 : 1.0, 0.0, signs});

  for (int m : {3, 4, 5, 8}) {
    out.push_back(check_le("m-fold Green kernel = rotation average, m = " + std::to_string(m),
                           detail::rotation_average_defect(m), 1e-10));
  }
  {
    const SymmetryFold f(4);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double th = -pi + 2.0 * pi * (k + 0.5) / 1000.0;
      worst = std::max(worst, std::abs(kernel::kernel_eval_m(th, f) - kernel::kernel_eval_green(th, f)));
    }
    out.push_back(check_le("abs-sine kernel = Green kernel at m = 4", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const SymmetryFold f(4 + trial % 3);
      std::vector<double> v(256);
      std::vector<double> a(6), b(6);
      for (std::size_t j = 0; j < a.size(); ++j) {
        a[j] = u(rng) / static_cast<double>(j + 1);
        b[j] = u(rng) / static_cast<double>(j + 1);
      }
      const double mean = u(rng);
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double th = f.domain_start() + f.period() * static_cast<double>(k) / 256.0;
        v[k] = mean;
        for (std::size_t j = 0; j < a.size(); ++j) {
          const double w = static_cast<double>((j + 1) * static_cast<std::size_t>(f.m()));
          v[k] += a[j] * std::cos(w * th) + b[j] * std::sin(w * th);
        }
      }
      const ScalarField g(f, v);
      const ScalarField G1 = kernel::invert_helmholtz(g);
      const ScalarField G2 = kernel::convolve_kernel(g);
      for (std::size_t k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(G1[k] - G2[k]));
    }
    out.push_back(check_le("spectral inverse = kernel convolution (N = 256)", worst, 1e-8));
  }

  {
    const SymmetryFold f(4);
    const InitialData d = InitialData::fourier(f, 0.0, {{1, 0.0, 1.0}});
    flow::RunParams rp;
    rp.markers = rp.grid = 256;
    rp.dt = 1e-2;
    rp.T = 2.0;
    rp.cadence = 0.0;
    const auto tr = flow::run(d, f, rp);
    const auto& s = tr.final_state();
    out.push_back(check_le("Riccati consistency |dchi y^2 - 1|", flow::riccati_consistency(s), 1e-6));
    out.push_back(check_le("F = dG(chi) consistency", flow::f_consistency(s), 1e-4));
    double drop = 0.0;
    for (std::size_t k = 1; k < tr.trace.size(); ++k) {
      drop = std::max(drop, tr.trace.entropy[k - 1] - tr.trace.entropy[k]);
    }
    out.push_back(check_le("entropy nondecreasing", drop, 0.0));
    out.push_back(check_le("latched markers never relapse", static_cast<double>(tr.trace.relapses), 0.0));
    out.push_back(check_le("mean conserved", std::abs(tr.trace.mean_g.back() - tr.trace.mean_g.front()), 1e-10));
  }

  {
    const SymmetryFold f(4);
    const JumpProfile p(f, {-pi / 4.0, 0.1, pi / 4.0}, {1.0, -1.0});
    const auto fwd = contour::contour_run(p, 1e-2, 1.0);
    const auto back = contour::contour_run(fwd.profiles.back(), 1e-2, -1.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < p.breakpoints().size(); ++j) {
      worst = std::max(worst, std::abs(back.profiles.back().breakpoints()[j] - p.breakpoints()[j]));
    }
    out.push_back(check_le("contour time reversal", worst, 1e-8));
  }

  {
    const auto c = steady::solve_rotating({1.0, -1.0}, SymmetryFold(4));
    double wdef = 1.0;
    if (c.status == steady::SteadyStatus::converged) {
      wdef = std::max(std::abs(c.widths[0] - pi / 4.0), std::abs(c.widths[1] - pi / 4.0));
    }
    out.push_back(check_le("steady (1, -1) widths = pi/4", wdef, 1e-10));
    out.push_back({"steady (1, -1) verification", c.residuals.speed_defect, 1e-8,
                   c.status == steady::SteadyStatus::converged && c.residuals.passed()});
  }

  {
    const double s = ode::shoot_decaying(ode::forcing::constant(1.0).c, 20.0);
    out.push_back(check_le("shot slope for c = 1 is -1", std::abs(s + 1.0), 1e-6));
    const auto cls = ode::classify(ode::forcing::constant(1.0).c, 1.0, s, 20.0);
    out.push_back({"c = 1 classified zero_limit", cls.limit_estimate, 1e-5,
                   cls.scenario == ode::Scenario::zero_limit && !cls.integral_convergent});
  }
  return out;
}

}  // namespace si_euler::cli
