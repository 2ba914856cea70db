#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "acv/rng.hpp"
#include "acv/spectra.hpp"

using namespace acv;
using std::complex;

namespace {

EntryLaw gaussian(int n) { return EntryLaw(EntryLaw::Kind::complex_gaussian, n); }

// roots of z^3 + a2 z^2 + a1 z + a0 via the depressed-cubic formula
std::array<complex<double>, 3> cubic_roots(complex<double> a2,
                                           complex<double> a1,
                                           complex<double> a0) {
  const complex<double> shift = a2 / 3.0;
  const complex<double> p = a1 - a2 * a2 / 3.0;
  const complex<double> q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const complex<double> disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  complex<double> w = -q / 2.0 + disc;
  if (std::abs(w) < 1e-30) w = -q / 2.0 - disc;
  const complex<double> u = std::pow(w, 1.0 / 3.0);
  const complex<double> omega(-0.5, std::sqrt(3.0) / 2.0);
  std::array<complex<double>, 3> roots;
  complex<double> uk = u;
  for (int k = 0; k < 3; ++k) {
    roots[k] = (std::abs(uk) < 1e-30 ? 0.0 : uk - p / (3.0 * uk)) - shift;
    uk *= omega;
  }
  return roots;
}

// characteristic-polynomial oracle for 3x3 eigenvalues
std::array<complex<double>, 3> eig3_oracle(const ComplexMatrix& m) {
  complex<double> tr = m.trace();
  complex<double> tr2 = (m * m).trace();
  complex<double> det = m.determinant();
  // lambda^3 - tr lambda^2 + c1 lambda - det, c1 = (tr^2 - tr(M^2))/2
  return cubic_roots(-tr, (tr * tr - tr2) / 2.0, -det);
}

double matched_distance(std::vector<complex<double>> a,
                        std::vector<complex<double>> b) {
  // greedy multiset matching; adequate for well-separated point sets
  double worst = 0.0;
  for (auto va : a) {
    double best = 1e300;
    std::size_t at = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (std::abs(va - b[i]) < best) {
        best = std::abs(va - b[i]);
        at = i;
      }
    }
    worst = std::max(worst, best);
    b.erase(b.begin() + at);
  }
  return worst;
}

}  // namespace

TEST_CASE("eigenvalues on closed-form cases") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = complex<double>(1, 0);
  d(1, 1) = complex<double>(0, 2);
  SpectralSample s = eigenvalues(d);
  std::vector<complex<double>> pts(s.points.data(), s.points.data() + 2);
  CHECK(matched_distance(pts, {complex<double>(1, 0), complex<double>(0, 2)}) <
        1e-14);

  // circulant shift of size 4: fourth roots of unity
  SpectralSample j4 = eigenvalues(make_j(4));
  std::vector<complex<double>> roots = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<complex<double>> got(j4.points.data(), j4.points.data() + 4);
  CHECK(matched_distance(got, roots) < 1e-12);
}

TEST_CASE("eigenvalues match the cubic oracle on random 3x3 matrices") {
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix m =
        3.0 * generate_x(MatrixShape(3, 3), gaussian(3), derive_seed(11, rep));
    auto oracle = eig3_oracle(m);
    SpectralSample s = eigenvalues(m);
    std::vector<complex<double>> got(s.points.data(), s.points.data() + 3);
    CHECK(matched_distance(got, {oracle[0], oracle[1], oracle[2]}) < 1e-8);
  }
}

TEST_CASE("eigenvalue sum matches the trace") {
  for (int rep = 0; rep < 10; ++rep) {
    int n = 5 + 7 * rep;
    ComplexMatrix m =
        generate_x(MatrixShape(n, n), gaussian(n), derive_seed(12, rep));
    SpectralSample s = eigenvalues(m);
    CHECK(std::abs(s.points.sum() - m.trace()) <=
          1e-6 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("singular_values closed forms and HS identity") {
  SpectralSample unit = singular_values(make_j(5));
  for (int i = 0; i < 5; ++i)
    CHECK(unit.points[i].real() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(singular_values(ComplexMatrix::Zero(3, 2)).points.norm() == 0.0);

  // [[1,1],[0,1]] has singular values sqrt((3 +- sqrt(5))/2)
  ComplexMatrix shear(2, 2);
  shear << 1, 1, 0, 1;
  SpectralSample s = singular_values(shear);
  CHECK(s.points[0].real() ==
        doctest::Approx(std::sqrt((3 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  CHECK(s.points[1].real() ==
        doctest::Approx(std::sqrt((3 - std::sqrt(5.0)) / 2)).epsilon(1e-12));

  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix m =
        generate_x(MatrixShape(8, 13), gaussian(13), derive_seed(13, rep));
    SpectralSample sv = singular_values(m);
    double sum_sq = sv.points.real().squaredNorm();
    CHECK(std::abs(sum_sq - m.squaredNorm()) <= 1e-8 * m.squaredNorm());
    for (int i = 1; i < sv.size(); ++i)
      CHECK(sv.points[i].real() <= sv.points[i - 1].real());
  }
}

TEST_CASE("autocov_spectrum rank route agrees with the dense route") {
  // N > n: factored spectrum must match eigenvalues of the full product
  const MatrixShape shape(14, 6);
  ComplexMatrix y =
      std::sqrt(6.0) * generate_x(shape, gaussian(6), 303);
  SpectralSample fast = autocov_spectrum(y);
  SpectralSample dense = eigenvalues(autocov_1(y));
  std::vector<complex<double>> a(fast.points.data(),
                                 fast.points.data() + fast.size());
  std::vector<complex<double>> b(dense.points.data(),
                                 dense.points.data() + dense.size());
  CHECK(matched_distance(a, b) < 1e-8);
  CHECK(zero_eigen_count(fast, 1e-8) == 8);
}

TEST_CASE("zero_eigen_count rank structure") {
  for (int rep = 0; rep < 5; ++rep) {
    SpectralSample s = ensemble_spectrum(MatrixShape(40, 20), gaussian(20),
                                         derive_seed(14, rep));
    CHECK(zero_eigen_count(s, 1e-8) == 20);
  }
  // gamma <= 1: generically full rank, over 50 seeds
  for (int rep = 0; rep < 50; ++rep) {
    SpectralSample s = ensemble_spectrum(MatrixShape(15, 30), gaussian(30),
                                         derive_seed(15, rep));
    CHECK(zero_eigen_count(s, 1e-8) == 0);
  }
  SpectralSample id = eigenvalues(ComplexMatrix::Identity(4, 4));
  CHECK(zero_eigen_count(id, 1e-8) == 0);
}

TEST_CASE("radial_ecdf sorting and evaluation") {
  SpectralSample s;
  s.kind = SpectralSample::Kind::eigenvalues;
  s.points.resize(3);
  s.points << complex<double>(0, 0), complex<double>(1, 0),
      complex<double>(0, 1);
  RadialEcdf ecdf = radial_ecdf(s);
  CHECK(ecdf.radii[0] == 0.0);
  CHECK(ecdf.radii[1] == 1.0);
  CHECK(ecdf.radii[2] == 1.0);
  CHECK(ecdf(1.0) == 1.0);
  CHECK(ecdf(0.5) == doctest::Approx(1.0 / 3));

  ComplexMatrix m = generate_x(MatrixShape(10, 10), gaussian(10), 77);
  SpectralSample sm = eigenvalues(m);
  RadialEcdf em = radial_ecdf(sm);
  std::vector<double> brute;
  for (int i = 0; i < 10; ++i) brute.push_back(std::abs(sm.points[i]));
  std::sort(brute.begin(), brute.end());
  for (int i = 0; i < 10; ++i) CHECK(em.radii[i] == brute[i]);
}

TEST_CASE("hermitize spectrum is the symmetrized singular spectrum") {
  const complex<double> z(0.3, -0.8);
  ComplexMatrix y = generate_x(MatrixShape(6, 6), gaussian(6), 21);
  ComplexMatrix sigma = hermitize(y, z);
  CHECK(sigma.trace() == complex<double>(0, 0));
  CHECK((sigma - sigma.adjoint()).norm() == 0.0);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sigma, Eigen::EigenvaluesOnly);
  RealVector lam = es.eigenvalues();
  ComplexMatrix shifted = y - z * ComplexMatrix::Identity(6, 6);
  SpectralSample sv = singular_values(shifted);
  for (int i = 0; i < 6; ++i) {
    // ascending eigenvalues pair off as -s_i and +s_i
    CHECK(std::abs(lam[i] + sv.points[i].real()) < 1e-8);
    CHECK(std::abs(lam[11 - i] - sv.points[i].real()) < 1e-8);
  }

  ComplexMatrix h = generate_x(MatrixShape(4, 4), gaussian(4), 22);
  h = h * h.adjoint() + ComplexMatrix::Identity(4, 4);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(hermitize(h, 0.0),
                                                   Eigen::EigenvaluesOnly);
  RealVector l2 = es2.eigenvalues();
  for (int i = 0; i < 4; ++i) CHECK(std::abs(l2[i] + l2[7 - i]) < 1e-10);
}

TEST_CASE("resolvent_traces scalar case and asymptotics") {
  // Y = 0, z = 0: q00 = i gamma_n / t, q01 = 0
  ComplexMatrix zero = ComplexMatrix::Zero(5, 5);
  ResolventTraces rt = resolvent_traces(zero, 0.0, 2.0);
  CHECK(std::abs(rt.q00 - complex<double>(0, 0.5)) < 1e-14);
  CHECK(std::abs(rt.q01) < 1e-14);

  ComplexMatrix y = product_y(
      generate_x(MatrixShape(30, 30), gaussian(30), 5), make_j(30));
  for (double t : {0.1, 1.0, 10.0}) {
    ResolventTraces r = resolvent_traces(y, complex<double>(0.4, 0.1), t);
    CHECK(r.q00.imag() > 0.0);
    CHECK(std::abs(r.q00.real()) < 1e-10 * r.q00.imag());
  }

  // |q00 - i gamma_n / t| = O(t^{-3}) between t = 10 and t = 100
  double err10 =
      std::abs(resolvent_traces(y, 0.0, 10.0).q00 - complex<double>(0, 0.1));
  double err100 =
      std::abs(resolvent_traces(y, 0.0, 100.0).q00 - complex<double>(0, 0.01));
  CHECK(err10 < 0.01);
  CHECK(err100 / err10 < 2e-3);  // cubic decay gives about 1e-3
}

TEST_CASE("smin_experiment norm bound and positivity") {
  const MatrixShape shape(12, 12);
  ComplexMatrix j = make_j(12);

  std::vector<double> vals =
      smin_experiment(shape, gaussian(12), ComplexMatrix::Identity(12, 12),
                      complex<double>(1, 0), 20, 3);
  for (double v : vals) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }

  // far z: s_min(X A X* - z) >= |z| - ||X A X*|| > 0
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix x = generate_x(shape, gaussian(12), derive_seed(40, rep));
    double big = 10.0 * spectral_norm(x) * spectral_norm(x);
    std::vector<double> far =
        smin_experiment(shape, gaussian(12), j, complex<double>(big, 0), 3,
                        derive_seed(41, rep));
    for (double v : far) CHECK(v > 0.0);
  }

  CHECK_THROWS_AS(
      smin_experiment(shape, gaussian(12), ComplexMatrix::Zero(12, 12), 1.0, 1, 1),
      Error);

  // smoothing option keeps values finite and close to the raw ones in law
  SminOptions smooth;
  smooth.smooth = true;
  std::vector<double> smoothed =
      smin_experiment(shape, gaussian(12), j, complex<double>(1, 0), 5, 3, smooth);
  for (double v : smoothed) CHECK(std::isfinite(v));
}

TEST_CASE("smin_experiment decreasing-threshold trend") {
  const MatrixShape shape(40, 40);
  std::vector<double> vals = smin_experiment(shape, gaussian(40), make_j(40),
                                             complex<double>(1, 0), 60, 9);
  std::sort(vals.begin(), vals.end());
  auto frac_below = [&](double t) {
    return static_cast<double>(
               std::upper_bound(vals.begin(), vals.end(), t) - vals.begin()) /
           vals.size();
  };
  double prev = 1.0;
  for (double t : {1e-1, 1e-2, 1e-4, 1e-6}) {
    CHECK(frac_below(t) <= prev);
    prev = frac_below(t);
  }
}

TEST_CASE("linearization_check cases") {
  // scalar case: X = [1], A = [1], z = 2
  ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  auto [lhs, rhs] = linearization_check(one, one, complex<double>(2, 0));
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
  // H = [[1,1],[1,2]]: smallest singular value (3 - sqrt(5))/2
  CHECK(rhs == doctest::Approx(2.0 / (3.0 - std::sqrt(5.0))).epsilon(1e-10));
  CHECK(lhs <= rhs);

  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix x =
        generate_x(MatrixShape(20, 30), gaussian(30), derive_seed(50, rep));
    auto [a, b] = linearization_check(x, make_j(30), complex<double>(1, 1));
    CHECK(a <= b * (1 + 1e-10));
  }

  // dominant z: the resolvent side vanishes
  ComplexMatrix x = generate_x(MatrixShape(5, 8), gaussian(8), 51);
  auto [small_a, small_b] =
      linearization_check(x, make_j(8), complex<double>(1e6, 0));
  CHECK(small_a < 1e-5);
  CHECK(small_b < 1.01);  // the A^{-1} corner keeps ||H^{-1}|| of order 1
}

TEST_CASE("ensemble norm concentrates at 1 + sqrt(gamma)") {
  // scaled-down version of the operator norm law
  int hits = 0;
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix x = generate_x(MatrixShape(100, 200), gaussian(200),
                                 derive_seed(60, rep));
    if (std::abs(spectral_norm(x) - (1 + std::sqrt(0.5))) < 0.15) ++hits;
  }
  CHECK(hits >= 18);
}
