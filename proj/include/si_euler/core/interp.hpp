#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/field.hpp"

namespace si_euler {

/**
 * @brief Fast off-grid evaluation of a band-limited field.
 *
 * The trigonometric interpolant is resampled on a grid `oversample` times
 * finer and then evaluated by a 12-point equispaced barycentric Lagrange
 * stencil. For fields resolved on their own grid this agrees with
 * evaluate() to about 1e-12 relative already at 4x oversampling.
 */
class SpectralInterpolant {
 public:
  static constexpr int stencil = 12;

  explicit SpectralInterpolant(const SpectralField& s, std::size_t oversample = 8)
      : fold_(s.fold()) {
    std::size_t n = s.grid_size() * oversample;
    if (n < 2 * stencil) n = 2 * stencil;
    n_ = n;
    h_ = fold_.period() / static_cast<double>(n_);
    samples_ = fft::inverse(resize(s, n_).coefficients(), n_);
    // Barycentric weights for equispaced nodes: (-1)^j binom(p-1, j).
    double b = 1.0;
    for (int j = 0; j < stencil; ++j) {
      weights_[j] = (j % 2 == 0) ? b : -b;
      b = b * static_cast<double>(stencil - 1 - j) / static_cast<double>(j + 1);
    }
  }

  double operator()(double theta) const {
    double v = 0.0;
    evaluate_many(theta, {this}, &v);
    return v;
  }

  /// Evaluates several interpolants that share one fine grid at θ, reusing
  /// the stencil weights.
  static void evaluate_many(double theta, std::initializer_list<const SpectralInterpolant*> fs,
                            double* out) {
    const SpectralInterpolant& ref = **fs.begin();
    const double u = (theta - ref.fold_.domain_start()) / ref.h_;
    const double base = std::floor(u);
    const double frac = u - base;
    const long long nn = static_cast<long long>(ref.n_);
    long long i0 = static_cast<long long>(base) % nn;
    if (i0 < 0) i0 += nn;
    if (frac == 0.0) {
      std::size_t q = 0;
      for (const auto* f : fs) out[q++] = f->samples_[static_cast<std::size_t>(i0)];
      return;
    }
    constexpr int left = stencil / 2 - 1;
    std::array<double, stencil> w{};
    std::array<std::size_t, stencil> idx{};
    double den = 0.0;
    for (int j = 0; j < stencil; ++j) {
      w[j] = ref.weights_[j] / (frac - static_cast<double>(j - left));
      den += w[j];
      long long k = i0 - left + j;
      if (k < 0) k += nn;
      if (k >= nn) k -= nn;
      idx[j] = static_cast<std::size_t>(k);
    }
    std::size_t q = 0;
    for (const auto* f : fs) {
      if (f->n_ != ref.n_) throw ConfigError("interpolants must share one fine grid");
      double num = 0.0;
      for (int j = 0; j < stencil; ++j) num += w[j] * f->samples_[idx[j]];
      out[q++] = num / den;
    }
  }

  const SymmetryFold& fold() const noexcept { return fold_; }

 private:
  SymmetryFold fold_;
  std::size_t n_ = 0;
  double h_ = 0.0;
  std::vector<double> samples_;
  std::array<double, stencil> weights_{};
};

/**
 * @brief Inverse of an increasing circle map given at markers.
 *
 * Markers (x_i, y_i) with x strictly increasing over one period and known
 * slopes dy/dx; the inverse map is the piecewise cubic Hermite interpolant
 * with Fritsch–Carlson limited slopes, extended by x -> x + L, y -> y + L.
 */
class MonotoneCircleMap {
 public:
  MonotoneCircleMap(std::vector<double> x, std::vector<double> y, std::vector<double> slope,
                    double period)
      : period_(period) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n || slope.size() != n) {
      throw ConfigError("monotone map: need at least two markers with matching arrays");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(x[i + 1] > x[i])) throw NumericalError("monotone map: marker positions not increasing");
    }
    if (!(x[0] + period > x[n - 1])) {
      throw NumericalError("monotone map: markers overlap across the period");
    }
    // One periodic copy on each side so every query in [x0, x0 + L) has a bracket.
    x_.reserve(n + 2);
    y_.reserve(n + 2);
    s_.reserve(n + 2);
    x_.push_back(x[n - 1] - period);
    y_.push_back(y[n - 1] - period);
    s_.push_back(slope[n - 1]);
    for (std::size_t i = 0; i < n; ++i) {
      x_.push_back(x[i]);
      y_.push_back(y[i]);
      s_.push_back(slope[i]);
    }
    x_.push_back(x[0] + period);
    y_.push_back(y[0] + period);
    s_.push_back(slope[0]);
    limit_slopes();
  }

  double period() const noexcept { return period_; }

  double operator()(double xq) const {
    const double x0 = x_[1];
    double shift = std::floor((xq - x0) / period_) * period_;
    double xr = xq - shift;
    if (xr < x0) xr = x0;
    auto it = std::upper_bound(x_.begin() + 1, x_.end(), xr);
    std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
    if (k >= x_.size() - 1) k = x_.size() - 2;
    return eval_segment(k, xr) + shift;
  }

  /// Evaluates at increasing query points in one merged sweep.
  std::vector<double> evaluate_sorted(const std::vector<double>& xq) const {
    std::vector<double> out(xq.size());
    const double x0 = x_[1];
    std::size_t k = 0;
    double last_shift = 0.0;
    bool first = true;
    for (std::size_t q = 0; q < xq.size(); ++q) {
      const double shift = std::floor((xq[q] - x0) / period_) * period_;
      const double xr = xq[q] - shift;
      if (first || shift != last_shift) {
        auto it = std::upper_bound(x_.begin() + 1, x_.end(), xr);
        k = static_cast<std::size_t>(it - x_.begin()) - 1;
        first = false;
        last_shift = shift;
      }
      while (k + 2 < x_.size() && x_[k + 1] <= xr) ++k;
      out[q] = eval_segment(k, xr) + shift;
    }
    return out;
  }

 private:
  void limit_slopes() {
    for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
      const double delta = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
      if (!(delta > 0.0)) throw NumericalError("monotone map: values not increasing");
      const double a = s_[k] / delta;
      const double b = s_[k + 1] / delta;
      const double r2 = a * a + b * b;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        s_[k] = tau * a * delta;
        s_[k + 1] = tau * b * delta;
      }
    }
  }

  double eval_segment(std::size_t k, double xq) const {
    const double h = x_[k + 1] - x_[k];
    const double t = (xq - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * s_[k] + h01 * y_[k + 1] + h11 * h * s_[k + 1];
  }

  double period_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> s_;
};

}  // namespace si_euler
