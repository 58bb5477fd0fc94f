#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "si_euler/core/error.hpp"
#include "si_euler/core/field.hpp"
#include "si_euler/core/interp.hpp"
#include "si_euler/jump_profile.hpp"

namespace si_euler {

/// a·cos(j m θ) + b·sin(j m θ).
struct FourierMode {
  int j = 1;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/**
 * @brief Initial vorticity profile g₀.
 *
 * Three kinds: a finite Fourier series in multiples of m, a jump profile
 * (mollified by an erf step whose standard deviation is `mollify_cells/2`
 * grid cells when sampled on a grid), or samples on an equispaced grid of
 * the fundamental domain.
 */
class InitialData {
 public:
  enum class Kind { fourier, piecewise, tabulated };

  static InitialData fourier(SymmetryFold fold, double mean, std::vector<FourierMode> modes) {
    for (const auto& md : modes) {
      if (md.j < 1) throw ConfigError("fourier mode index j must be >= 1");
    }
    InitialData d(Kind::fourier, fold);
    d.mean_ = mean;
    std::stable_sort(modes.begin(), modes.end(),
                     [](const FourierMode& a, const FourierMode& b) { return a.j < b.j; });
    d.modes_ = std::move(modes);
    return d;
  }

  static InitialData piecewise(const JumpProfile& profile, double mollify_cells = 2.0) {
    if (!(mollify_cells >= 0.0)) throw ConfigError("mollification width must be >= 0");
    InitialData d(Kind::piecewise, profile.fold());
    d.profile_ = profile;
    d.mollify_cells_ = mollify_cells;
    return d;
  }

  static InitialData tabulated(const ScalarField& samples) {
    InitialData d(Kind::tabulated, samples.fold());
    d.samples_ = std::make_shared<const ScalarField>(samples);
    d.table_ = std::make_shared<const SpectralInterpolant>(to_spectral(samples));
    return d;
  }

  Kind kind() const noexcept { return kind_; }
  const SymmetryFold& fold() const noexcept { return fold_; }
  const std::vector<FourierMode>& modes() const noexcept { return modes_; }
  const std::optional<JumpProfile>& profile() const noexcept { return profile_; }
  double mollify_cells() const noexcept { return mollify_cells_; }

  bool nonconstant() const {
    switch (kind_) {
      case Kind::fourier:
        return std::any_of(modes_.begin(), modes_.end(), [](const FourierMode& md) {
          return md.cos_amp != 0.0 || md.sin_amp != 0.0;
        });
      case Kind::piecewise:
        return !profile_->degenerate();
      case Kind::tabulated: {
        const auto& v = samples_->values();
        return std::any_of(v.begin(), v.end(), [&](double x) { return x != v.front(); });
      }
    }
    return false;
  }

  /// Exact mean over the fundamental domain.
  double mean() const {
    switch (kind_) {
      case Kind::fourier:
        return mean_;
      case Kind::piecewise:
        return profile_->mean();
      case Kind::tabulated:
        return to_spectral(*samples_).mean();
    }
    return 0.0;
  }

  /// Value at θ when the profile is sampled on a grid of spacing h (h only
  /// matters for the mollified jump kind).
  double value(double theta, double h) const {
    switch (kind_) {
      case Kind::fourier:
        return fourier_value(theta);
      case Kind::piecewise:
        return piecewise_value(theta, h);
      case Kind::tabulated:
        return (*table_)(theta);
    }
    return 0.0;
  }

  void values(const std::vector<double>& thetas, double h, std::vector<double>& out) const {
    out.resize(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) out[i] = value(thetas[i], h);
  }

  ScalarField sample(std::size_t n) const {
    const double h = fold_.period() / static_cast<double>(n);
    return ScalarField::sample(fold_, n, [&](double th) { return value(th, h); });
  }

 private:
  InitialData(Kind kind, SymmetryFold fold) : kind_(kind), fold_(fold) {}

  double fourier_value(double theta) const {
    double acc = mean_;
    if (modes_.empty()) return acc;
    const std::complex<double> z = std::polar(1.0, fold_.m() * theta);
    std::complex<double> zj = 1.0;
    int cur = 0;
    for (const auto& md : modes_) {  // sorted by j
      while (cur < md.j) {
        zj *= z;
        ++cur;
      }
      acc += md.cos_amp * zj.real() + md.sin_amp * zj.imag();
    }
    return acc;
  }

  double piecewise_value(double theta, double h) const {
    const JumpProfile& pr = *profile_;
    const double sigma = 0.5 * mollify_cells_ * h;
    if (sigma <= 0.0) return pr(theta);
    const double p = fold_.period();
    const auto& a = pr.breakpoints();
    double r = std::fmod(theta - a[0], p);
    if (r < 0.0) r += p;
    const double x = a[0] + r;
    // Sharp value plus erf corrections from jumps (and periodic images) within reach.
    double v = pr(x);
    const double reach = 12.0 * sigma;
    const std::size_t nj = pr.jumps();
    for (std::size_t j = 0; j < nj; ++j) {
      const double aj = a[j];
      for (double img : {aj - p, aj, aj + p}) {
        const double dx = x - img;
        if (std::abs(dx) > reach) continue;
        const double jump = pr.right_level(j) - pr.left_level(j);
        const double smooth = 0.5 * std::erfc(-dx / (std::sqrt(2.0) * sigma));
        const double sharp = dx >= 0.0 ? 1.0 : 0.0;
        v += jump * (smooth - sharp);
      }
    }
    return v;
  }

  Kind kind_;
  SymmetryFold fold_;
  double mean_ = 0.0;
  std::vector<FourierMode> modes_;
  std::optional<JumpProfile> profile_;
  double mollify_cells_ = 2.0;
  std::shared_ptr<const ScalarField> samples_;
  std::shared_ptr<const SpectralInterpolant> table_;
};

}  // namespace si_euler
