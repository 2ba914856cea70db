#pragma once

#include <cstdint>

#include "acv/spectra.hpp"
#include "acv/types.hpp"

namespace acv {

/// The rotationally invariant limit law of the one-step autocovariance
/// spectrum at aspect ratio gamma. The radial map g carries
/// [max(0, gamma-1), gamma] onto [r_inner^2, r_outer^2]; the radial cdf is
/// F(r) = g^{-1}(r^2)/gamma on the bulk, with a point mass of 1 - 1/gamma at
/// the origin when gamma > 1.
class LsdModel {
 public:
  explicit LsdModel(double gamma);

  double gamma() const { return gamma_; }
  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }
  double atom0() const { return atom0_; }
  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }

  /// g(y) = y (1 - gamma + 2y)^2 / (y + 1) on [y_lo, y_hi].
  double g(double y) const;
  double g_prime(double y) const;
  /// Monotone inverse of g on [r_inner^2, r_outer^2]; residual below
  /// 1e-12 * max(1, t).
  double g_inverse(double t) const;

  /// Radial cdf F(r); nondecreasing, right-continuous, F(r_outer) = 1.
  double cdf(double r) const;
  /// Radial density of the planar law at |z| = r; zero off the bulk annulus.
  /// For gamma = 1 the density diverges at the origin: evaluation below
  /// radius 1e-6 raises unbounded_density.
  double density(double r) const;
  /// Generalized inverse of the radial cdf. Returns 0 on the atom.
  double quantile(double u) const;

  /// count i.i.d. points r e^{i theta}, r from the radial quantile, theta
  /// uniform (the law is rotationally invariant).
  SpectralSample sample(int count, std::uint64_t seed) const;

 private:
  double gamma_;
  double y_lo_, y_hi_;
  double r_inner_, r_outer_;
  double atom0_;
};

/// Marchenko-Pastur law with ratio parameter `ratio` and unit scale
/// (mean 1). For ratio > 1 there is an atom at 0 of mass 1 - 1/ratio.
class MpModel {
 public:
  explicit MpModel(double ratio);

  double ratio() const { return ratio_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double atom0() const { return atom0_; }

  double density(double x) const;
  /// cdf including the atom at 0, in closed form.
  double cdf(double x) const;
  double quantile(double u) const;

  /// count i.i.d. draws, real nonnegative, sorted descending.
  SpectralSample sample(int count, std::uint64_t seed) const;

 private:
  /// Mass of [lo, x] under the continuous part.
  double bulk_cdf(double x) const;

  double ratio_;
  double lo_, hi_;
  double atom0_;
};

}  // namespace acv
