#include "acv/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acv/rng.hpp"

namespace acv {

double RadialEcdf::operator()(double r) const {
  const auto* begin = radii.data();
  const auto* end = begin + radii.size();
  return static_cast<double>(std::upper_bound(begin, end, r) - begin) /
         static_cast<double>(radii.size());
}

namespace {

[[noreturn]] void eig_failure(const ComplexMatrix& m, const char* what) {
  std::ostringstream os;
  os << what << " (size " << m.rows() << "x" << m.cols()
     << ", HS norm " << m.norm() << ")";
  fail(ErrorCode::numerical_failure, os.str());
}

}  // namespace

SpectralSample eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::dimension_mismatch, "eigenvalues: matrix must be square");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success)
    eig_failure(m, "eigenvalues: Schur iteration did not converge");
  SpectralSample s;
  s.points = solver.eigenvalues();
  s.kind = SpectralSample::Kind::eigenvalues;
  s.rows = static_cast<int>(m.rows());
  s.cols = static_cast<int>(m.cols());
  return s;
}

SpectralSample singular_values(const ComplexMatrix& m) {
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success)
    eig_failure(m, "singular_values: SVD did not converge");
  SpectralSample s;
  s.points = svd.singularValues().cast<Complex>();  // already descending
  s.kind = SpectralSample::Kind::singular_values;
  s.rows = static_cast<int>(m.rows());
  s.cols = static_cast<int>(m.cols());
  return s;
}

SpectralSample autocov_spectrum(const ComplexMatrix& y_obs) {
  const int n_rows = static_cast<int>(y_obs.rows());
  const int n = static_cast<int>(y_obs.cols());
  if (n_rows <= n) {
    SpectralSample s = eigenvalues(autocov_1(y_obs));
    s.cols = n;
    return s;
  }
  // rank(Y J Y*) <= n: eig(Y J Y* / n) = eig(J Y* Y / n) plus N - n zeros
  ComplexMatrix gram = (y_obs.adjoint() * y_obs) / static_cast<double>(n);
  ComplexMatrix rotated(n, n);
  for (int t = 0; t < n; ++t) rotated.row((t + 1) % n) = gram.row(t);
  SpectralSample small = eigenvalues(rotated);
  SpectralSample s;
  s.points = ComplexVector::Zero(n_rows);
  s.points.head(n) = small.points;
  s.kind = SpectralSample::Kind::eigenvalues;
  s.rows = n_rows;
  s.cols = n;
  return s;
}

SpectralSample ensemble_spectrum(const MatrixShape& shape, const EntryLaw& law,
                                 std::uint64_t seed) {
  ComplexMatrix x = generate_x(shape, law, seed);
  SpectralSample s =
      autocov_spectrum(std::sqrt(static_cast<double>(shape.cols)) * x);
  s.seed = seed;
  return s;
}

int zero_eigen_count(const SpectralSample& s, double tol_rel) {
  if (s.kind != SpectralSample::Kind::eigenvalues)
    fail(ErrorCode::domain_violation, "zero_eigen_count: eigenvalue sample required");
  double max_abs = 0.0;
  for (int i = 0; i < s.size(); ++i)
    max_abs = std::max(max_abs, std::abs(s.points[i]));
  int count = 0;
  for (int i = 0; i < s.size(); ++i)
    if (std::abs(s.points[i]) <= tol_rel * max_abs) ++count;
  return count;
}

RadialEcdf radial_ecdf(const SpectralSample& s) {
  if (s.kind != SpectralSample::Kind::eigenvalues)
    fail(ErrorCode::domain_violation, "radial_ecdf: eigenvalue sample required");
  RealVector radii(s.size());
  for (int i = 0; i < s.size(); ++i) radii[i] = std::abs(s.points[i]);
  std::sort(radii.data(), radii.data() + radii.size());
  return RadialEcdf(std::move(radii));
}

ComplexMatrix hermitize(const ComplexMatrix& y, Complex z) {
  if (y.rows() != y.cols())
    fail(ErrorCode::dimension_mismatch, "hermitize: Y must be square");
  const int n_rows = static_cast<int>(y.rows());
  ComplexMatrix shifted = y - z * ComplexMatrix::Identity(n_rows, n_rows);
  ComplexMatrix sigma = ComplexMatrix::Zero(2 * n_rows, 2 * n_rows);
  sigma.topRightCorner(n_rows, n_rows) = shifted;
  sigma.bottomLeftCorner(n_rows, n_rows) = shifted.adjoint();
  return sigma;
}

ResolventTraces resolvent_traces(const ComplexMatrix& y, Complex z, double t) {
  if (t <= 0.0)
    fail(ErrorCode::domain_violation, "resolvent_traces: t must be positive");
  const int n_rows = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  ComplexMatrix shifted = hermitize(y, z);
  shifted.diagonal().array() -= Complex(0.0, t);
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  ComplexMatrix q = lu.inverse();
  if (!q.allFinite()) {
    std::ostringstream os;
    os << "resolvent_traces: shifted solve failed, rcond "
       << lu.rcond() << " at t = " << t;
    fail(ErrorCode::numerical_failure, os.str());
  }
  ResolventTraces out;
  out.z = z;
  out.t = t;
  out.q00 = q.topLeftCorner(n_rows, n_rows).trace() / static_cast<double>(n);
  out.q01 = q.topRightCorner(n_rows, n_rows).trace() / static_cast<double>(n);
  return out;
}

std::vector<double> smin_experiment(const MatrixShape& shape,
                                    const EntryLaw& law,
                                    const ComplexMatrix& a, Complex z,
                                    int trials, std::uint64_t seed,
                                    const SminOptions& opts) {
  if (a.rows() != a.cols() || a.rows() != shape.cols)
    fail(ErrorCode::dimension_mismatch, "smin_experiment: A must be n x n");
  SpectralSample sa = singular_values(a);
  const double s_min_a = sa.points[sa.size() - 1].real();
  const double s_max_a = sa.points[0].real();
  if (s_min_a <= 1e-14 * s_max_a)
    fail(ErrorCode::singular_matrix, "smin_experiment: A has a zero singular value");
  std::vector<double> out(trials);
  const int n = shape.cols;
  for (int k = 0; k < trials; ++k) {
    ComplexMatrix x = generate_x(shape, law, derive_seed(seed, k));
    if (opts.smooth) {
      ComplexMatrix noise = generate_x(
          shape, EntryLaw(EntryLaw::Kind::complex_gaussian, n),
          derive_seed(seed, 0x70000000ULL + k));
      double eps = std::pow(static_cast<double>(n), -10.0);
      x = (x + eps * noise) / std::sqrt(1.0 - eps * eps);
    }
    ComplexMatrix m = product_y(x, a);
    m.diagonal().array() -= z;
    SpectralSample sv = singular_values(m);
    out[k] = sv.points[sv.size() - 1].real();
  }
  return out;
}

std::pair<double, double> linearization_check(const ComplexMatrix& x,
                                              const ComplexMatrix& a,
                                              Complex z) {
  const int n_rows = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  if (a.rows() != n || a.cols() != n)
    fail(ErrorCode::dimension_mismatch, "linearization_check: A must be n x n");
  Eigen::PartialPivLU<ComplexMatrix> lu_a(a);
  ComplexMatrix a_inv = lu_a.inverse();
  if (!a_inv.allFinite())
    fail(ErrorCode::singular_matrix, "linearization_check: A is singular");

  ComplexMatrix m = product_y(x, a);
  m.diagonal().array() -= z;
  SpectralSample sm = singular_values(m);
  const double smin_m = sm.points[sm.size() - 1].real();
  if (smin_m <= 0.0)
    fail(ErrorCode::singular_matrix, "linearization_check: X A X* - z is singular");

  ComplexMatrix h = ComplexMatrix::Zero(n_rows + n, n_rows + n);
  h.topLeftCorner(n, n) = a_inv;
  h.topRightCorner(n, n_rows) = x.adjoint();
  h.bottomLeftCorner(n_rows, n) = x;
  h.bottomRightCorner(n_rows, n_rows) =
      z * ComplexMatrix::Identity(n_rows, n_rows);
  SpectralSample sh = singular_values(h);
  const double smin_h = sh.points[sh.size() - 1].real();
  if (smin_h <= 0.0)
    fail(ErrorCode::singular_matrix, "linearization_check: H is singular");
  return {1.0 / smin_m, 1.0 / smin_h};
}

double spectral_norm(const ComplexMatrix& m) {
  const bool wide = m.cols() > m.rows();
  ComplexMatrix gram = wide ? ComplexMatrix(m * m.adjoint())
                            : ComplexMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram,
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    eig_failure(m, "spectral_norm: Hermitian eigensolver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

}  // namespace acv
