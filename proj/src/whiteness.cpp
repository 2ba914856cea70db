#include "acv/whiteness.hpp"

#include <algorithm>
#include <cmath>

#include "acv/parallel.hpp"
#include "acv/rng.hpp"
#include "acv/transport.hpp"

namespace acv {

namespace {

// stream namespaces under the test's master seed
constexpr std::uint64_t kCalibrationBase = 1ULL << 20;
constexpr std::uint64_t kRocNullBase = 2ULL << 20;
constexpr std::uint64_t kRocAltBase = 3ULL << 20;

ComplexVector hermitian_cov_spectrum(const ComplexMatrix& y_obs) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(autocov_01(y_obs),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::numerical_failure,
         "stat_t3: Hermitian eigensolver did not converge");
  return solver.eigenvalues().cast<Complex>();
}

}  // namespace

void TestSpec::validate() const {
  if (calibration_reps < 50)
    fail(ErrorCode::domain_violation, "TestSpec: calibration_reps must be >= 50");
  if (!(level > 0.0 && level < 1.0))
    fail(ErrorCode::domain_violation, "TestSpec: level must lie in (0, 1)");
  if (law.n != shape.cols)
    fail(ErrorCode::domain_violation, "TestSpec: law.n must equal shape.cols");
}

SpectralSample make_reference_mu(const MatrixShape& shape) {
  LsdModel model(shape.gamma());
  const int m = shape.rows;
  const double golden = 0.6180339887498949;
  SpectralSample s;
  s.points.resize(m);
  for (int i = 0; i < m; ++i) {
    double r = model.quantile((i + 0.5) / m);
    double theta = 2.0 * M_PI * std::fmod(golden * i, 1.0);
    s.points[i] = std::polar(r, theta);
  }
  s.kind = SpectralSample::Kind::eigenvalues;
  s.rows = m;
  s.cols = shape.cols;
  return s;
}

SpectralSample make_reference_mp(const MatrixShape& shape) {
  MpModel model(2.0 * shape.gamma());
  const int m = 2 * shape.rows;
  SpectralSample s;
  s.points.resize(m);
  for (int i = 0; i < m; ++i)
    s.points[i] = model.quantile((m - i - 0.5) / m);
  s.kind = SpectralSample::Kind::singular_values;
  s.rows = m;
  s.cols = shape.cols;
  return s;
}

double stat_t1(const ComplexMatrix& y_obs, const SpectralSample& reference) {
  SpectralSample spectrum = autocov_spectrum(y_obs);
  return wasserstein2(spectrum.points, reference.points);
}

double stat_t2(const ComplexMatrix& y_obs) {
  return autocov_1(y_obs).squaredNorm() / static_cast<double>(y_obs.rows());
}

double stat_t3(const ComplexMatrix& y_obs, const SpectralSample& reference) {
  return wasserstein2(hermitian_cov_spectrum(y_obs), reference.points);
}

CalibratedTest calibrate(const TestSpec& spec, int jobs) {
  spec.validate();
  CalibratedTest test;
  test.spec = spec;
  test.mu_reference = make_reference_mu(spec.shape);
  test.mp_reference = make_reference_mp(spec.shape);

  MaModel null_model = MaModel::white_noise(spec.shape.rows, spec.shape.cols);
  test.null_table.assign(spec.calibration_reps, 0.0);
  parallel_for(spec.calibration_reps, jobs, [&](int i) {
    ComplexMatrix y = simulate_series(
        null_model, spec.law, derive_seed(spec.reference_seed, kCalibrationBase + i));
    test.null_table[i] = statistic(test, y);
  });

  std::vector<double> sorted = test.null_table;
  std::sort(sorted.begin(), sorted.end());
  int rank = static_cast<int>(
      std::ceil((1.0 - spec.level) * spec.calibration_reps));
  rank = std::clamp(rank, 1, spec.calibration_reps);
  test.threshold = sorted[rank - 1];
  return test;
}

double statistic(const CalibratedTest& test, const ComplexMatrix& y_obs) {
  if (y_obs.rows() != test.spec.shape.rows ||
      y_obs.cols() != test.spec.shape.cols)
    fail(ErrorCode::dimension_mismatch,
         "statistic: observations do not match the test shape");
  switch (test.spec.which) {
    case TestKind::t1_eig_wasserstein:
      return stat_t1(y_obs, test.mu_reference);
    case TestKind::t2_trace:
      return stat_t2(y_obs);
    case TestKind::t3_hermitian_mp:
      return stat_t3(y_obs, test.mp_reference);
  }
  fail(ErrorCode::domain_violation, "statistic: unknown test kind");
}

TestReport evaluate(const CalibratedTest& test, const ComplexMatrix& y_obs) {
  TestReport report;
  report.statistic = statistic(test, y_obs);
  report.threshold = test.threshold;
  report.reject = report.statistic > test.threshold;
  int geq = 0;
  for (double v : test.null_table)
    if (v >= report.statistic) ++geq;
  report.p_value =
      (1.0 + geq) / (static_cast<double>(test.null_table.size()) + 1.0);
  return report;
}

RocCurve roc_from_samples(const std::vector<double>& null_stats,
                          const std::vector<double>& alt_stats) {
  std::vector<double> pooled;
  pooled.reserve(null_stats.size() + alt_stats.size());
  pooled.insert(pooled.end(), null_stats.begin(), null_stats.end());
  pooled.insert(pooled.end(), alt_stats.begin(), alt_stats.end());
  std::sort(pooled.begin(), pooled.end(), std::greater<double>());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  const double n0 = static_cast<double>(null_stats.size());
  const double n1 = static_cast<double>(alt_stats.size());
  auto rates_above = [](const std::vector<double>& stats, double tau) {
    int count = 0;
    for (double v : stats)
      if (v > tau) ++count;
    return count;
  };

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  for (double tau : pooled) {
    RocPoint pt{rates_above(null_stats, tau) / n0,
                rates_above(alt_stats, tau) / n1};
    if (pt.fpr != curve.points.back().fpr || pt.tpr != curve.points.back().tpr)
      curve.points.push_back(pt);
  }
  if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0)
    curve.points.push_back({1.0, 1.0});

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  curve.auc = auc;
  return curve;
}

namespace {

struct TrialStatistics {
  std::vector<double> t1, t2, t3;
};

TrialStatistics side_statistics(const EntryLaw& law, const MaModel& model,
                                const SpectralSample& mu_ref,
                                const SpectralSample& mp_ref,
                                std::uint64_t master, std::uint64_t stream_base,
                                int trials, int jobs) {
  TrialStatistics out;
  out.t1.assign(trials, 0.0);
  out.t2.assign(trials, 0.0);
  out.t3.assign(trials, 0.0);
  parallel_for(trials, jobs, [&](int i) {
    ComplexMatrix y =
        simulate_series(model, law, derive_seed(master, stream_base + i));
    out.t1[i] = stat_t1(y, mu_ref);
    out.t2[i] = stat_t2(y);
    out.t3[i] = stat_t3(y, mp_ref);
  });
  return out;
}

}  // namespace

std::array<RocCurve, 3> roc_all(const MatrixShape& shape, const EntryLaw& law,
                                std::uint64_t seed, const MaModel& alternative,
                                int trials_per_side, int jobs) {
  if (trials_per_side < 50)
    fail(ErrorCode::domain_violation, "roc_all: trials_per_side must be >= 50");
  SpectralSample mu_ref = make_reference_mu(shape);
  SpectralSample mp_ref = make_reference_mp(shape);
  MaModel null_model = MaModel::white_noise(shape.rows, shape.cols);

  TrialStatistics null_stats = side_statistics(
      law, null_model, mu_ref, mp_ref, seed, kRocNullBase, trials_per_side, jobs);
  TrialStatistics alt_stats = side_statistics(
      law, alternative, mu_ref, mp_ref, seed, kRocAltBase, trials_per_side, jobs);

  return {roc_from_samples(null_stats.t1, alt_stats.t1),
          roc_from_samples(null_stats.t2, alt_stats.t2),
          roc_from_samples(null_stats.t3, alt_stats.t3)};
}

RocCurve roc(const TestSpec& spec, const MaModel& alternative,
             int trials_per_side, int jobs) {
  spec.validate();
  auto curves = roc_all(spec.shape, spec.law, spec.reference_seed, alternative,
                        trials_per_side, jobs);
  switch (spec.which) {
    case TestKind::t1_eig_wasserstein:
      return curves[0];
    case TestKind::t2_trace:
      return curves[1];
    case TestKind::t3_hermitian_mp:
      return curves[2];
  }
  fail(ErrorCode::domain_violation, "roc: unknown test kind");
}

}  // namespace acv
