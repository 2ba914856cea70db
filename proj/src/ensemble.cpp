#include "acv/ensemble.hpp"

#include <cmath>
#include <random>

#include "acv/rng.hpp"

namespace acv {

EntryLaw::EntryLaw(Kind k, int n_cols) : kind(k), n(n_cols) {
  if (n < 1) fail(ErrorCode::unsupported_entry_law, "EntryLaw: n must be >= 1");
  switch (kind) {
    case Kind::complex_gaussian:
    case Kind::complex_bernoulli_phase:
    case Kind::uniform_phase_disc:
      break;
    default:
      fail(ErrorCode::unsupported_entry_law, "EntryLaw: unknown kind");
  }
}

ComplexMatrix generate_x(const MatrixShape& shape, const EntryLaw& law,
                         std::uint64_t seed) {
  if (law.n != shape.cols)
    fail(ErrorCode::unsupported_entry_law,
         "generate_x: law variance parameter n must equal shape.cols");
  if (std::abs(law.scaled_pseudo_moment()) >= 1.0)
    fail(ErrorCode::unsupported_entry_law,
         "generate_x: law violates |n E x^2| < 1");
  auto rng = make_engine(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double inv_sqrt_2n = 1.0 / std::sqrt(2.0 * shape.cols);
  auto draw = [&]() -> Complex {
    switch (law.kind) {
      case EntryLaw::Kind::complex_gaussian:
        return Complex(normal(rng) * inv_sqrt_2n, normal(rng) * inv_sqrt_2n);
      case EntryLaw::Kind::complex_bernoulli_phase: {
        std::uint64_t bits = rng();
        return Complex((bits & 1) ? inv_sqrt_2n : -inv_sqrt_2n,
                       (bits & 2) ? inv_sqrt_2n : -inv_sqrt_2n);
      }
      case EntryLaw::Kind::uniform_phase_disc: {
        // disc radius sqrt(2/n) = 2/sqrt(2n) makes E|x|^2 = 1/n
        double r = 2.0 * inv_sqrt_2n * std::sqrt(unit(rng));
        double theta = 2.0 * M_PI * unit(rng);
        return Complex(r * std::cos(theta), r * std::sin(theta));
      }
    }
    fail(ErrorCode::unsupported_entry_law, "EntryLaw: unknown kind");
  };
  ComplexMatrix x(shape.rows, shape.cols);
  for (int j = 0; j < shape.cols; ++j)
    for (int i = 0; i < shape.rows; ++i) x(i, j) = draw();
  return x;
}

ComplexMatrix make_j(int n) {
  if (n < 1) fail(ErrorCode::domain_violation, "make_j: n must be >= 1");
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) j((k + 1) % n, k) = 1.0;
  return j;
}

ComplexMatrix product_y(const ComplexMatrix& x, const ComplexMatrix& j) {
  if (x.cols() != j.rows() || j.rows() != j.cols())
    fail(ErrorCode::dimension_mismatch, "product_y: X is N x n, J must be n x n");
  return x * j * x.adjoint();
}

MaModel::MaModel(int n_rows, int n_cols, std::vector<ComplexMatrix> b)
    : rows(n_rows), cols(n_cols), coeffs(std::move(b)) {
  if (rows < 1 || cols < 1)
    fail(ErrorCode::domain_violation, "MaModel: shape must be positive");
  if (coeffs.empty())
    fail(ErrorCode::domain_violation, "MaModel: needs at least B_0");
  for (const auto& bi : coeffs)
    if (bi.rows() != rows || bi.cols() != rows)
      fail(ErrorCode::dimension_mismatch, "MaModel: coefficients must be N x N");
}

MaModel MaModel::white_noise(int n_rows, int n_cols) {
  return MaModel(n_rows, n_cols, {ComplexMatrix::Identity(n_rows, n_rows)});
}

MaModel MaModel::identity_alt(int n_rows, int n_cols, double alpha_sq) {
  if (alpha_sq < 0.0)
    fail(ErrorCode::domain_violation, "identity_alt: alpha^2 must be >= 0");
  std::vector<ComplexMatrix> b;
  b.push_back(ComplexMatrix::Identity(n_rows, n_rows));
  b.push_back(std::sqrt(alpha_sq) * ComplexMatrix::Identity(n_rows, n_rows));
  return MaModel(n_rows, n_cols, std::move(b));
}

MaModel MaModel::toeplitz_alt(int n_rows, int n_cols, double trace_norm) {
  std::vector<ComplexMatrix> b;
  b.push_back(ComplexMatrix::Identity(n_rows, n_rows));
  b.push_back(make_toeplitz_b1(n_rows, trace_norm));
  return MaModel(n_rows, n_cols, std::move(b));
}

ComplexMatrix simulate_series(const MaModel& model, const EntryLaw& law,
                              std::uint64_t seed) {
  const int n = model.cols;
  const MatrixShape shape(model.rows, n);
  ComplexMatrix w =
      std::sqrt(static_cast<double>(n)) * generate_x(shape, law, seed);
  ComplexMatrix y = ComplexMatrix::Zero(model.rows, n);
  for (int i = 0; i <= model.order(); ++i) {
    const ComplexMatrix& bi = model.coeffs[i];
    if (bi.isZero(0.0)) continue;
    ComplexMatrix bw = bi * w;
    for (int t = 0; t < n; ++t) y.col(t) += bw.col(((t - i) % n + n) % n);
  }
  return y;
}

ComplexMatrix make_toeplitz_b1(int n_rows, double target_norm) {
  if (n_rows < 1) fail(ErrorCode::domain_violation, "make_toeplitz_b1: N >= 1");
  if (target_norm <= 0.0)
    fail(ErrorCode::domain_violation, "make_toeplitz_b1: target_norm > 0");
  RealMatrix profile(n_rows, n_rows);
  for (int i = 0; i < n_rows; ++i)
    for (int j = 0; j < n_rows; ++j)
      profile(i, j) = std::exp(-8.0 * std::abs(i - j) / n_rows);
  // tr(B B*)/N = a'^2 * ||profile||_HS^2 / N
  double scale = std::sqrt(target_norm * n_rows / profile.squaredNorm());
  return (scale * profile).cast<Complex>();
}

ComplexMatrix autocov_1(const ComplexMatrix& y_obs) {
  const int n = static_cast<int>(y_obs.cols());
  ComplexMatrix shifted(y_obs.rows(), n);
  for (int t = 0; t < n; ++t) shifted.col(t) = y_obs.col((t + 1) % n);
  return (shifted * y_obs.adjoint()) / static_cast<double>(n);
}

ComplexMatrix autocov_01(const ComplexMatrix& y_obs) {
  const int n_rows = static_cast<int>(y_obs.rows());
  const int n = static_cast<int>(y_obs.cols());
  ComplexMatrix stacked(2 * n_rows, n);
  stacked.topRows(n_rows) = y_obs;
  for (int t = 0; t < n; ++t)
    stacked.col(t).tail(n_rows) = y_obs.col(((t - 1) % n + n) % n);
  ComplexMatrix r = ComplexMatrix::Zero(2 * n_rows, 2 * n_rows);
  r.selfadjointView<Eigen::Lower>().rankUpdate(stacked, 1.0 / n);
  return ComplexMatrix(r.selfadjointView<Eigen::Lower>());
}

}  // namespace acv
