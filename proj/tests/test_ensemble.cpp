#include <doctest.h>

#include <cmath>
#include <complex>

#include "acv/ensemble.hpp"
#include "acv/rng.hpp"

using namespace acv;
using std::complex;

namespace {
EntryLaw gaussian(int n) { return EntryLaw(EntryLaw::Kind::complex_gaussian, n); }
}

TEST_CASE("generate_x moment contracts") {
  // 10^6 entries at n = 2
  const MatrixShape shape(500, 2);
  const EntryLaw law = gaussian(2);
  double sum_sq = 0.0;
  complex<double> sum_pseudo = 0.0;
  const int reps = 1000;
  for (int k = 0; k < reps; ++k) {
    ComplexMatrix x = generate_x(shape, law, derive_seed(7, k));
    sum_sq += x.squaredNorm();
    sum_pseudo += x.array().square().sum();
  }
  const double entries = 1000.0 * reps;
  double mean_sq = sum_sq / entries;  // target 1/n = 0.5
  CHECK(mean_sq > 0.5 * 0.99);
  CHECK(mean_sq < 0.5 * 1.01);
  // E x^2 = 0 for the gaussian law: |n mean(x^2)| small
  CHECK(std::abs(2.0 * sum_pseudo / entries) < 0.05);
}

TEST_CASE("scaled second moment within three standard errors") {
  // |n mean|x|^2 - 1| <= 3 stderr over 10^6 draws, stderr from the sample
  const MatrixShape shape(1000, 10);
  const EntryLaw law = gaussian(10);
  double sum = 0.0, sum_sq = 0.0;
  const int reps = 100;
  const double entries = 1000.0 * 10.0 * reps;
  for (int k = 0; k < reps; ++k) {
    ComplexMatrix x = generate_x(shape, law, derive_seed(8, k));
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 1000; ++i) {
        double v = 10.0 * std::norm(x(i, j));  // n |x|^2, mean 1
        sum += v;
        sum_sq += v * v;
      }
  }
  double mean = sum / entries;
  double variance = sum_sq / entries - mean * mean;
  double stderr_mean = std::sqrt(variance / entries);
  CHECK(std::abs(mean - 1.0) <= 3.0 * stderr_mean);
}

TEST_CASE("generate_x is deterministic in the seed") {
  const MatrixShape shape(4, 6);
  ComplexMatrix a = generate_x(shape, gaussian(6), 123);
  ComplexMatrix b = generate_x(shape, gaussian(6), 123);
  CHECK(a == b);
  ComplexMatrix c = generate_x(shape, gaussian(6), 124);
  CHECK(a != c);
}

TEST_CASE("generate_x law variance must match the shape") {
  CHECK_THROWS_AS(generate_x(MatrixShape(2, 3), gaussian(5), 1), Error);
}

TEST_CASE("alternative entry laws have the declared moments") {
  for (auto kind : {EntryLaw::Kind::complex_bernoulli_phase,
                    EntryLaw::Kind::uniform_phase_disc}) {
    const MatrixShape shape(200, 50);
    ComplexMatrix x = generate_x(shape, EntryLaw(kind, 50), 99);
    double mean_sq = x.squaredNorm() / (200.0 * 50.0);
    // 3 sigma band around 1/n with sample std-err
    CHECK(std::abs(50.0 * mean_sq - 1.0) < 0.05);
    complex<double> pseudo = x.array().square().sum() / (200.0 * 50.0);
    CHECK(std::abs(50.0 * pseudo) < 0.05);
  }
}

TEST_CASE("make_j pattern and orthogonality") {
  ComplexMatrix j3 = make_j(3);
  ComplexMatrix expected(3, 3);
  expected << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  CHECK(j3 == expected);

  ComplexMatrix j1 = make_j(1);
  CHECK(j1(0, 0) == complex<double>(1, 0));

  for (int n : {1, 2, 3, 5, 8, 17}) {
    ComplexMatrix j = make_j(n);
    CHECK((j * j.transpose() - ComplexMatrix::Identity(n, n)).norm() == 0.0);
    // cyclic permutation parity
    double det = j.determinant().real();
    CHECK(det == doctest::Approx(n % 2 == 1 ? 1.0 : -1.0).epsilon(1e-12));
  }
}

TEST_CASE("product_y hand-checked cases") {
  // N = 1, n = 2: X = [a, b] gives Y = [a conj(b) + b conj(a)]
  ComplexMatrix x(1, 2);
  x << complex<double>(1.0, 2.0), complex<double>(-0.5, 1.5);
  ComplexMatrix y = product_y(x, make_j(2));
  complex<double> a = x(0, 0), b = x(0, 1);
  CHECK(std::abs(y(0, 0) - (a * std::conj(b) + b * std::conj(a))) < 1e-15);

  // n = 1: Y = x0 x0*
  ComplexMatrix col(3, 1);
  col << complex<double>(1, 1), complex<double>(0, 2), complex<double>(-1, 0);
  ComplexMatrix y1 = product_y(col, make_j(1));
  CHECK((y1 - col * col.adjoint()).norm() < 1e-15);

  CHECK_THROWS_AS(product_y(x, make_j(3)), Error);
}

TEST_CASE("product_y trace identity") {
  // X J X* = sum_t x_{t+1} x_t*, so tr = sum_k x_k* x_{k+1}, indices mod n
  const MatrixShape shape(5, 7);
  ComplexMatrix x = generate_x(shape, gaussian(7), 31);
  ComplexMatrix y = product_y(x, make_j(7));
  complex<double> expected = 0.0;
  for (int k = 0; k < 7; ++k) expected += x.col(k).dot(x.col((k + 1) % 7));
  CHECK(std::abs(y.trace() - expected) < 1e-12);
}

TEST_CASE("simulate_series identity and zero filters") {
  const int n_rows = 3, n = 4;
  const EntryLaw law = gaussian(n);
  ComplexMatrix white =
      simulate_series(MaModel::white_noise(n_rows, n), law, 5);
  ComplexMatrix x = generate_x(MatrixShape(n_rows, n), law, 5);
  CHECK((white - std::sqrt(4.0) * x).norm() < 1e-14);

  ComplexMatrix zero_alt =
      simulate_series(MaModel::identity_alt(n_rows, n, 0.0), law, 5);
  CHECK((zero_alt - white).norm() == 0.0);
}

TEST_CASE("simulate_series order-1 convolution") {
  // p = 1, B1 = alpha I at N = n = 2: y_t = w_t + alpha w_{t-1 mod 2}
  const double alpha_sq = 0.49;
  const double alpha = 0.7;
  MaModel model = MaModel::identity_alt(2, 2, alpha_sq);
  const EntryLaw law = gaussian(2);
  ComplexMatrix y = simulate_series(model, law, 17);
  ComplexMatrix w = std::sqrt(2.0) * generate_x(MatrixShape(2, 2), law, 17);
  for (int t = 0; t < 2; ++t)
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(y(i, t) - (w(i, t) + alpha * w(i, (t - 1 + 2) % 2))) < 1e-14);
}

TEST_CASE("make_toeplitz_b1 trace normalization") {
  ComplexMatrix b1 = make_toeplitz_b1(1, 0.25);
  CHECK(std::abs(b1(0, 0).real() - 0.5) < 1e-15);

  ComplexMatrix b50 = make_toeplitz_b1(50, 1e-2);
  // all diagonal entries equal a'
  for (int i = 1; i < 50; ++i)
    CHECK(b50(i, i) == b50(0, 0));
  double trace_norm = (b50 * b50.adjoint()).trace().real() / 50.0;
  CHECK(std::abs(trace_norm - 1e-2) < 1e-12);
}

TEST_CASE("autocov_1 equals the product form under the null") {
  const MatrixShape shape(4, 6);
  ComplexMatrix x = generate_x(shape, gaussian(6), 2);
  ComplexMatrix y_obs = std::sqrt(6.0) * x;
  ComplexMatrix direct = autocov_1(y_obs);
  ComplexMatrix product = product_y(x, make_j(6));
  CHECK((direct - product).norm() < 1e-12 * product.norm());

  CHECK(autocov_1(ComplexMatrix::Zero(3, 5)).norm() == 0.0);

  // N = 1, n = 2 hand expansion
  ComplexMatrix small(1, 2);
  small << complex<double>(2, -1), complex<double>(1, 3);
  complex<double> a = small(0, 0), b = small(0, 1);
  ComplexMatrix r1 = autocov_1(small);
  CHECK(std::abs(r1(0, 0) - (a * std::conj(b) + b * std::conj(a)) / 2.0) < 1e-15);
}

TEST_CASE("autocov_01 block structure") {
  const MatrixShape shape(3, 5);
  ComplexMatrix y = std::sqrt(5.0) * generate_x(shape, gaussian(5), 8);
  ComplexMatrix r = autocov_01(y);
  CHECK(r.rows() == 6);
  CHECK((r - r.adjoint()).norm() == 0.0);

  ComplexMatrix top_left = (y * y.adjoint()) / 5.0;
  CHECK((r.topLeftCorner(3, 3) - top_left).norm() < 1e-12 * top_left.norm());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);

  // N = 1, n = 2 hand expansion of every block
  ComplexMatrix small(1, 2);
  small << complex<double>(1, 1), complex<double>(0, -2);
  complex<double> a = small(0, 0), b = small(0, 1);
  ComplexMatrix r2 = autocov_01(small);
  double half = 0.5;
  CHECK(std::abs(r2(0, 0) - half * (std::norm(a) + std::norm(b))) < 1e-15);
  CHECK(std::abs(r2(0, 1) - half * (a * std::conj(b) + b * std::conj(a))) < 1e-15);
  CHECK(std::abs(r2(1, 0) - std::conj(r2(0, 1))) < 1e-15);
  CHECK(std::abs(r2(1, 1) - half * (std::norm(a) + std::norm(b))) < 1e-15);
}

TEST_CASE("null pipeline identity over seeds") {
  // simulate_series(p=0) -> autocov_1 agrees with product_y for 50 seeds
  const MatrixShape shape(6, 9);
  const EntryLaw law = gaussian(9);
  for (int s = 0; s < 50; ++s) {
    ComplexMatrix y_obs =
        simulate_series(MaModel::white_noise(6, 9), law, derive_seed(77, s));
    ComplexMatrix via_series = autocov_1(y_obs);
    ComplexMatrix via_product = product_y(generate_x(shape, law, derive_seed(77, s)),
                                          make_j(9));
    CHECK((via_series - via_product).norm() <= 1e-10 * via_product.norm());
  }
}
