#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acv/ensemble.hpp"
#include "acv/types.hpp"

namespace acv {

/// A multiset of spectral points with source metadata. Singular-value samples
/// hold real nonnegative points sorted descending (s_0 >= ... >= s_{N-1});
/// eigenvalue samples are unordered complex points.
struct SpectralSample {
  enum class Kind { eigenvalues, singular_values };

  ComplexVector points;
  Kind kind = Kind::eigenvalues;
  int rows = 0;
  int cols = 0;
  std::uint64_t seed = 0;
  std::optional<Complex> z_shift;

  int size() const { return static_cast<int>(points.size()); }
  /// Real parts of the points; meaningful for singular-value samples.
  RealVector reals() const { return points.real(); }
};

/// Sorted radii |lambda_i| with implicit step heights 1/N.
struct RadialEcdf {
  RealVector radii;  // ascending

  explicit RadialEcdf(RealVector sorted_radii) : radii(std::move(sorted_radii)) {}
  /// P[|lambda| <= r], right-continuous.
  double operator()(double r) const;
  /// Exact sup-distance to a cdf F, tie-aware. F must be continuous on
  /// (0, inf); a point mass at 0 is allowed (F(0-) is taken as 0).
  template <typename Cdf>
  double sup_distance(Cdf&& cdf) const {
    const int n = static_cast<int>(radii.size());
    double sup = 0.0;
    for (int i = 0; i < n;) {
      int j = i;
      while (j < n && radii[j] == radii[i]) ++j;
      double f = cdf(radii[i]);
      double f_left = radii[i] > 0.0 ? f : 0.0;
      sup = std::max(sup, std::abs(static_cast<double>(j) / n - f));
      sup = std::max(sup, std::abs(static_cast<double>(i) / n - f_left));
      i = j;
    }
    return sup;
  }
};

/// Normalized block traces (1/n) tr of the resolvent of the hermitized matrix
/// at the spectral point i*t.
struct ResolventTraces {
  Complex z;
  double t = 0.0;
  Complex q00;  // (1/n) tr of the top-left block; i * positive for t > 0
  Complex q01;  // (1/n) tr of the top-right block
};

/// All eigenvalues of a square matrix, with multiplicity.
SpectralSample eigenvalues(const ComplexMatrix& m);

/// Singular values, descending.
SpectralSample singular_values(const ComplexMatrix& m);

/// Spectrum of the one-step autocovariance (1/n) Y J Y* of an N x n
/// observation block. For N > n the product has rank at most n, so the
/// nonzero eigenvalues are taken from the n x n matrix (1/n) J Y* Y and the
/// remaining N - n zeros are exact.
SpectralSample autocov_spectrum(const ComplexMatrix& y_obs);

/// Spectrum of X J X* for a fresh draw of X. Equals the null-hypothesis
/// autocovariance spectrum at this shape.
SpectralSample ensemble_spectrum(const MatrixShape& shape, const EntryLaw& law,
                                 std::uint64_t seed);

/// Count of eigenvalues with |lambda| <= tol_rel * max|lambda|.
int zero_eigen_count(const SpectralSample& s, double tol_rel);

RadialEcdf radial_ecdf(const SpectralSample& s);

/// 2N x 2N Hermitian embedding [[0, Y - z], [(Y - z)*, 0]]; its spectrum is
/// {+-s_i(Y - z)}.
ComplexMatrix hermitize(const ComplexMatrix& y, Complex z);

/// Block traces of (hermitize(Y, z) - it)^{-1}, computed through the 2N x 2N
/// shifted solve.
ResolventTraces resolvent_traces(const ComplexMatrix& y, Complex z, double t);

struct SminOptions {
  bool smooth = false;  // mix in a tiny independent Gaussian before solving
};

/// Per-trial smallest singular value of X A X* - z over `trials` independent
/// draws of X. A must have all singular values strictly positive.
std::vector<double> smin_experiment(const MatrixShape& shape,
                                    const EntryLaw& law,
                                    const ComplexMatrix& a, Complex z,
                                    int trials, std::uint64_t seed,
                                    const SminOptions& opts = {});

/// Returns (||(X A X* - z)^{-1}||, ||H^{-1}||) for the bordered matrix
/// H = [[A^{-1}, X*], [X, z]]. The first is never larger than the second.
std::pair<double, double> linearization_check(const ComplexMatrix& x,
                                              const ComplexMatrix& a,
                                              Complex z);

/// Largest singular value (spectral norm) via the Hermitian Gram spectrum.
double spectral_norm(const ComplexMatrix& m);

}  // namespace acv
