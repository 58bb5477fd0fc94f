#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/fft.hpp"
#include "si_euler/core/field.hpp"
#include "si_euler/core/fold.hpp"

namespace si_euler::kernel {

// ---------------------------------------------------------------------------
// Spectral operators
// ---------------------------------------------------------------------------

/// Solves (4 + d^2/dθ^2) G = g mode by mode: Ĝ_k = ĝ_k / (4 - k^2), k = j·m.
inline SpectralField invert_helmholtz(const SpectralField& g) {
  SpectralField out = g;
  auto& c = out.coefficients();
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double k = g.wavenumber(j);
    c[j] /= (4.0 - k * k);
  }
  return out;
}

inline ScalarField invert_helmholtz(const ScalarField& g) {
  return to_physical(invert_helmholtz(to_spectral(g)));
}

/// Spectral derivative; the Nyquist mode is dropped (its derivative is a pure
/// sine that vanishes on the grid).
inline SpectralField derivative(const SpectralField& f) {
  SpectralField out = f;
  auto& c = out.coefficients();
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= complex(0.0, f.wavenumber(j));
  c.back() = complex(0.0, 0.0);
  return out;
}

inline ScalarField derivative(const ScalarField& f) {
  return to_physical(derivative(to_spectral(f)));
}

/**
 * @brief Riccati forcing c = 12 (4 + d^2/dθ^2)^{-1} (∂θG)^2 from the spectrum of g.
 *
 * The square is formed on a grid twice as fine, where it is exact, and the
 * result is returned on that grid without truncation.
 */
inline SpectralField forcing_c(const SpectralField& g) {
  const SpectralField dG = derivative(invert_helmholtz(g));
  const std::size_t n2 = 2 * g.grid_size();
  std::vector<double> sq = fft::inverse(resize(dG, n2).coefficients(), n2);
  for (double& v : sq) v *= v;
  SpectralField c(g.fold(), n2, fft::forward(sq));
  auto& coef = c.coefficients();
  for (std::size_t j = 0; j < coef.size(); ++j) {
    const double k = c.wavenumber(j);
    coef[j] *= 12.0 / (4.0 - k * k);
  }
  return c;
}

inline ScalarField forcing_c(const ScalarField& g) {
  const ScalarField fine = to_physical(forcing_c(to_spectral(g)));
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fine[2 * k];
  return ScalarField(g.fold(), std::move(v));
}

// ---------------------------------------------------------------------------
// Closed-form kernels
// ---------------------------------------------------------------------------

/// Full-circle kernel (π/2) sin2θ sgnθ - (1/2) θ sin2θ - (1/8) cos2θ on
/// [-π, π), with sgn(0) = +1. Other angles are reduced mod 2π first.
inline double kernel_eval_full(double theta) {
  double t = std::fmod(theta + pi, 2.0 * pi);
  if (t < 0.0) t += 2.0 * pi;
  t -= pi;
  const double sgn = t >= 0.0 ? 1.0 : -1.0;
  const double s2 = std::sin(2.0 * t);
  return 0.5 * pi * s2 * sgn - 0.5 * t * s2 - 0.125 * std::cos(2.0 * t);
}

/// C_m |sin(mθ/2)| + C̃_m.
inline double kernel_eval_m(double theta, const SymmetryFold& fold) {
  return fold.amplitude() * std::abs(std::sin(0.5 * fold.m() * theta)) + fold.offset();
}

/// Distance from θ to the nearest multiple of the period 2π/m.
inline double distance_to_lattice(double theta, const SymmetryFold& fold) {
  const double p = fold.period();
  double r = std::fmod(theta, p);
  if (r < 0.0) r += p;
  return std::min(r, p - r);
}

/// Amplitude π / (2m sin(2π/m)) of the m-fold Green's kernel.
inline double green_amplitude(const SymmetryFold& fold) {
  return pi / (2.0 * fold.m() * std::sin(fold.period()));
}

/**
 * @brief m-fold periodic Green's function of 4 + d^2/dθ^2, normalized so
 * that G = (m/2π) ∫ K(θ - ω) g(ω) dω over one fundamental domain.
 *
 * Equals (1/m) Σ_j kernel_eval_full(θ + 2πj/m) for every m >= 3, and
 * coincides with kernel_eval_m only at m = 4.
 */
inline double kernel_eval_green(double theta, const SymmetryFold& fold) {
  const double d = distance_to_lattice(theta, fold);
  return green_amplitude(fold) * std::cos(2.0 * (d - fold.half_period()));
}

/// Antiderivative Φ of kernel_eval_green with Φ(0) = 0, valid on all of ℝ.
inline double green_antiderivative(double x, const SymmetryFold& fold) {
  const double p = fold.period();
  const double half = fold.half_period();
  const double a = green_amplitude(fold);
  const double full = pi / (2.0 * fold.m());  // Φ(P)
  const double cells = std::floor(x / p);
  const double r = x - cells * p;
  auto first_half = [&](double s) {
    return 0.5 * a * (std::sin(2.0 * (s - half)) + std::sin(p));
  };
  const double local = (r <= half) ? first_half(r) : full - first_half(p - r);
  return cells * full + local;
}

/// Antiderivative of C_m|sin(mθ/2)| + C̃_m with value 0 at 0, valid on all of ℝ.
inline double literal_antiderivative(double x, const SymmetryFold& fold) {
  const double u = 0.5 * fold.m() * x;
  const double k = std::floor(u / pi);
  const double abs_sine = 2.0 * k + 1.0 - std::cos(u - k * pi);
  return fold.amplitude() * abs_sine * 2.0 / fold.m() + fold.offset() * x;
}

enum class KernelForm {
  green,    ///< exact m-fold Green's function
  literal,  ///< C_m|sin(mθ/2)| + C̃_m as displayed
};

inline double kernel_value(double theta, const SymmetryFold& fold, KernelForm form) {
  return form == KernelForm::green ? kernel_eval_green(theta, fold)
                                   : kernel_eval_m(theta, fold);
}

/**
 * @brief G = (m/2π) ∫ K(θ - ω) g(ω) dω by quadrature, independent of the
 * spectral solve except for off-grid evaluation of g.
 *
 * For each node θ the integral runs over ω ∈ [θ, θ + 2π/m], where the
 * kernel is smooth (its kinks sit at the end points), using composite
 * 16-point Gauss–Legendre panels. g at the shifted points θ_k + s is
 * produced for all k at once by a phase shift of its spectrum.
 */
inline ScalarField convolve_kernel(const ScalarField& g, KernelForm form = KernelForm::green,
                                   std::size_t panels = 0) {
  const SymmetryFold& fold = g.fold();
  const std::size_t n = g.size();
  if (panels == 0) panels = std::max<std::size_t>(8, n / 4);
  const SpectralField gh = to_spectral(g);
  using quad = boost::math::quadrature::gauss<double, 16>;
  const auto& xs = quad::abscissa();
  const auto& ws = quad::weights();

  std::vector<double> offsets;
  std::vector<double> weights;
  const double width = fold.period() / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * width;
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double dx = 0.5 * width * xs[q];
      const double w = 0.5 * width * ws[q];
      offsets.push_back(mid - dx);
      weights.push_back(w);
      if (xs[q] != 0.0) {
        offsets.push_back(mid + dx);
        weights.push_back(w);
      }
    }
  }

  std::vector<double> acc(n, 0.0);
  std::vector<complex> shifted(gh.size());
  const std::size_t half = n / 2;
  for (std::size_t q = 0; q < offsets.size(); ++q) {
    const double s = offsets[q];
    const double phase = fold.m() * s;
    for (std::size_t j = 0; j < half; ++j) {
      shifted[j] = gh[j] * std::polar(1.0, static_cast<double>(j) * phase);
    }
    // The Nyquist cosine shifts into a cosine plus a sine that vanishes on the nodes.
    shifted[half] = complex(gh[half].real() * std::cos(static_cast<double>(half) * phase), 0.0);
    const std::vector<double> gs = fft::inverse(shifted, n);
    const double kw = weights[q] * kernel_value(-s, fold, form);
    for (std::size_t k = 0; k < n; ++k) acc[k] += kw * gs[k];
  }
  const double scale = fold.m() / (2.0 * pi);
  for (double& v : acc) v *= scale;
  return ScalarField(fold, std::move(acc));
}

}  // namespace si_euler::kernel
