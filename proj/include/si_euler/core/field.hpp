#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/fft.hpp"
#include "si_euler/core/fold.hpp"

namespace si_euler {

using complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/**
 * @brief Samples of an m-fold periodic function at the N equispaced nodes
 * θ_k = -π/m + k·(2π/m)/N of the fundamental domain.
 */
class ScalarField {
 public:
  ScalarField(SymmetryFold fold, std::vector<double> values)
      : fold_(fold), values_(std::move(values)) {
    if (values_.size() < 8 || !is_power_of_two(values_.size())) {
      throw ConfigError("grid size must be a power of two >= 8, got " +
                        std::to_string(values_.size()));
    }
  }

  static ScalarField sample(SymmetryFold fold, std::size_t n,
                            const std::function<double(double)>& f) {
    std::vector<double> v(n);
    const double h = fold.period() / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = f(fold.domain_start() + h * static_cast<double>(k));
    return ScalarField(fold, std::move(v));
  }

  const SymmetryFold& fold() const noexcept { return fold_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const& noexcept { return values_; }
  /// By value on temporaries, so `for (double v : f().values())` is safe.
  std::vector<double> values() && { return std::move(values_); }
  double operator[](std::size_t k) const { return values_[k]; }

  double spacing() const noexcept { return fold_.period() / static_cast<double>(values_.size()); }
  double node(std::size_t k) const noexcept {
    return fold_.domain_start() + spacing() * static_cast<double>(k);
  }

 private:
  SymmetryFold fold_;
  std::vector<double> values_;
};

/**
 * @brief Half spectrum of a real m-fold field on an n-point grid.
 *
 * Entry j (0 <= j <= n/2) is the coefficient of wavenumber k = j·m, so the
 * field is a_0 + 2 Re Σ_{0<j<n/2} a_j e^{ijφ} + Re(a_{n/2}) cos(nφ/2) with
 * φ = m(θ + π/m). The Nyquist entry is always interpreted as a cosine.
 */
class SpectralField {
 public:
  SpectralField(SymmetryFold fold, std::size_t grid_size, std::vector<complex> coefficients)
      : fold_(fold), n_(grid_size), coef_(std::move(coefficients)) {
    if (!is_power_of_two(n_) || n_ < 2 || coef_.size() != n_ / 2 + 1) {
      throw ConfigError("spectral field: inconsistent grid size and coefficient count");
    }
  }

  const SymmetryFold& fold() const noexcept { return fold_; }
  std::size_t grid_size() const noexcept { return n_; }
  std::size_t size() const noexcept { return coef_.size(); }
  const std::vector<complex>& coefficients() const& noexcept { return coef_; }
  std::vector<complex>& coefficients() & noexcept { return coef_; }
  std::vector<complex> coefficients() && { return std::move(coef_); }
  complex operator[](std::size_t j) const { return coef_[j]; }

  double wavenumber(std::size_t j) const noexcept {
    return static_cast<double>(j) * static_cast<double>(fold_.m());
  }

  /// Mean over the fundamental domain.
  double mean() const noexcept { return coef_[0].real(); }

  /// (1/L)∫ f^2 of the interpolant over the fundamental domain.
  double mean_square() const noexcept {
    double s = coef_[0].real() * coef_[0].real();
    const std::size_t half = n_ / 2;
    for (std::size_t j = 1; j < half; ++j) s += 2.0 * std::norm(coef_[j]);
    const double ny = coef_[half].real();
    s += 0.5 * ny * ny;
    return s;
  }

 private:
  SymmetryFold fold_;
  std::size_t n_;
  std::vector<complex> coef_;
};

inline SpectralField to_spectral(const ScalarField& f) {
  return SpectralField(f.fold(), f.size(), fft::forward(f.values()));
}

inline ScalarField to_physical(const SpectralField& s) {
  return ScalarField(s.fold(), fft::inverse(s.coefficients(), s.grid_size()));
}

/// Re-expresses the trigonometric interpolant on an n-point grid: zero-pads
/// when growing, drops modes j >= n/2 (keeping the cosine part at n/2) when
/// shrinking.
inline SpectralField resize(const SpectralField& s, std::size_t n) {
  const std::size_t old_half = s.grid_size() / 2;
  const std::size_t new_half = n / 2;
  std::vector<complex> c(new_half + 1, complex(0.0, 0.0));
  if (n >= s.grid_size()) {
    for (std::size_t j = 0; j < old_half; ++j) c[j] = s[j];
    if (n == s.grid_size()) {
      c[old_half] = s[old_half];
    } else {
      c[old_half] = 0.5 * complex(s[old_half].real(), 0.0);
    }
  } else {
    for (std::size_t j = 0; j < new_half; ++j) c[j] = s[j];
    c[new_half] = complex(2.0 * s[new_half].real(), 0.0);
  }
  return SpectralField(s.fold(), n, std::move(c));
}

/// Direct O(n) evaluation of the trigonometric interpolant at any angle.
inline double evaluate(const SpectralField& s, double theta) {
  const double phi = s.fold().m() * (theta - s.fold().domain_start());
  const std::size_t half = s.grid_size() / 2;
  const complex step = std::polar(1.0, phi);
  complex rot = step;
  double acc = 0.0;
  for (std::size_t j = 1; j < half; ++j) {
    acc += (s[j] * rot).real();
    // Re-anchor the recurrence periodically to keep the phase error at rounding level.
    rot = (j % 64 == 63) ? std::polar(1.0, static_cast<double>(j + 1) * phi) : rot * step;
  }
  return s[0].real() + 2.0 * acc +
         s[half].real() * std::cos(static_cast<double>(half) * phi);
}

}  // namespace si_euler
