#pragma once

#include <cstdint>
#include <vector>

#include "acv/types.hpp"

namespace acv {

/// Entry distributions for the i.i.d. matrix X. Every offered law is centered
/// with E|x|^2 = 1/n, bounded fourth moment, and E x^2 = 0, so the
/// not-essentially-real condition |n E x^2| < 1 holds with room to spare.
/// Purely real laws are not representable.
struct EntryLaw {
  enum class Kind {
    complex_gaussian,        // (U + iV)/sqrt(2n), U,V standard normal
    complex_bernoulli_phase, // (±1 ± i)/sqrt(2n), independent fair signs
    uniform_phase_disc,      // uniform on the disc of radius sqrt(2/n)
  };

  Kind kind = Kind::complex_gaussian;
  int n = 1;  // column count; sets the variance 1/n

  EntryLaw() = default;
  EntryLaw(Kind k, int n_cols);

  /// n * E x^2 of the law (zero for all offered kinds).
  Complex scaled_pseudo_moment() const { return Complex(0.0, 0.0); }
};

/// N x n matrix of i.i.d. draws from `law`. Deterministic given `seed`.
ComplexMatrix generate_x(const MatrixShape& shape, const EntryLaw& law,
                         std::uint64_t seed);

/// n x n cyclic shift: J e_k = e_{k+1 mod n}. Orthogonal, 0/1 entries.
ComplexMatrix make_j(int n);

/// Y = X J X*, the one-step product form of the ensemble.
ComplexMatrix product_y(const ComplexMatrix& x, const ComplexMatrix& j);

/// Moving-average observation model y_t = sum_i B_i w_{t-i}, lags circular
/// mod n. Under the null p = 0 and B_0 = I.
struct MaModel {
  int rows = 0;  // N
  int cols = 0;  // n
  std::vector<ComplexMatrix> coeffs;  // B_0 .. B_p

  MaModel() = default;
  MaModel(int n_rows, int n_cols, std::vector<ComplexMatrix> b);

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  MatrixShape shape() const { return MatrixShape(rows, cols); }

  static MaModel white_noise(int n_rows, int n_cols);
  /// B_1 = alpha I with alpha = sqrt(alpha_sq).
  static MaModel identity_alt(int n_rows, int n_cols, double alpha_sq);
  /// B_1 = Toeplitz exponential profile scaled to tr(B_1 B_1*)/N = trace_norm.
  static MaModel toeplitz_alt(int n_rows, int n_cols, double trace_norm);
};

/// N x n observation matrix [y_0 ... y_{n-1}] with w_t the columns of
/// W = sqrt(n) X, X drawn from `law`.
ComplexMatrix simulate_series(const MaModel& model, const EntryLaw& law,
                              std::uint64_t seed);

/// Toeplitz matrix with entries a' exp(-8|i-j|/N), a' chosen so that
/// tr(B B*)/N equals target_norm exactly.
ComplexMatrix make_toeplitz_b1(int n_rows, double target_norm);

/// One-step sample autocovariance (1/n) sum_t y_t y_{t-1}*, lags mod n.
ComplexMatrix autocov_1(const ComplexMatrix& y_obs);

/// 2N x 2N Hermitian sample covariance of the stacked vectors [y_t; y_{t-1}],
/// lags mod n. Positive semidefinite by construction.
ComplexMatrix autocov_01(const ComplexMatrix& y_obs);

}  // namespace acv
