#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "acv/ensemble.hpp"
#include "acv/lsd.hpp"
#include "acv/spectra.hpp"
#include "acv/types.hpp"

namespace acv {

enum class TestKind {
  t1_eig_wasserstein,  // W2 between the autocovariance spectrum and the LSD
  t2_trace,            // N^{-1} tr R1 R1*
  t3_hermitian_mp,     // W2 between the stacked-covariance spectrum and MP
};

struct TestSpec {
  TestKind which = TestKind::t1_eig_wasserstein;
  MatrixShape shape;
  EntryLaw law;
  std::uint64_t reference_seed = 1;
  int calibration_reps = 200;
  double level = 0.05;

  void validate() const;
};

struct TestReport {
  double statistic = 0.0;
  double threshold = 0.0;
  bool reject = false;
  double p_value = 1.0;  // empirical, from the calibration table
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // staircase from (0,0) to (1,1), fpr ascending
  double auc = 0.0;
};

/// Frozen references plus the null calibration table of a test.
struct CalibratedTest {
  TestSpec spec;
  SpectralSample mu_reference;          // size N, used by T1
  SpectralSample mp_reference;          // size 2N, used by T3
  double threshold = 0.0;               // empirical (1 - level)-quantile
  std::vector<double> null_table;       // per-trial order
};

/// Frozen N-point reference for the limit law at the shape's aspect ratio:
/// radial quantiles on a stratified grid paired with golden-angle phases.
/// Deterministic per shape; an i.i.d. draw of the same size makes the T1
/// power depend on the reference draw (a draw biased toward the
/// alternative's displacement absorbs the signal), so the reference is a
/// low-discrepancy sample instead.
SpectralSample make_reference_mu(const MatrixShape& shape);

/// Frozen 2N-point Marchenko-Pastur reference (ratio 2 N/n): stratified
/// quantile grid, descending.
SpectralSample make_reference_mp(const MatrixShape& shape);

/// W2 distance between the spectrum of the one-step autocovariance of the
/// observations and the frozen LSD reference.
double stat_t1(const ComplexMatrix& y_obs, const SpectralSample& reference);

/// N^{-1} tr R1 R1* (squared Hilbert-Schmidt norm of the one-step
/// autocovariance over N).
double stat_t2(const ComplexMatrix& y_obs);

/// W2 distance between the spectrum of the stacked Hermitian covariance and
/// the frozen MP reference; real spectra ride the complex transport engine.
double stat_t3(const ComplexMatrix& y_obs, const SpectralSample& reference);

/// Null-calibrates the test: calibration_reps independent H0 statistics and
/// their empirical (1 - level)-quantile.
CalibratedTest calibrate(const TestSpec& spec, int jobs = 1);

/// Statistic of the calibrated test on one observation block.
double statistic(const CalibratedTest& test, const ComplexMatrix& y_obs);

/// Decision at the calibrated threshold; reject iff statistic > threshold.
TestReport evaluate(const CalibratedTest& test, const ComplexMatrix& y_obs);

/// ROC staircase of one test against the given alternative, trials_per_side
/// null and alternative trials, threshold swept over the pooled statistics.
RocCurve roc(const TestSpec& spec, const MaModel& alternative,
             int trials_per_side, int jobs = 1);

/// ROCs of all three tests from a shared set of simulations (one null and one
/// alternative dataset per trial, all statistics evaluated on it).
std::array<RocCurve, 3> roc_all(const MatrixShape& shape, const EntryLaw& law,
                                std::uint64_t seed, const MaModel& alternative,
                                int trials_per_side, int jobs = 1);

/// Staircase + trapezoid AUC from raw statistic samples (exposed for tests).
RocCurve roc_from_samples(const std::vector<double>& null_stats,
                          const std::vector<double>& alt_stats);

}  // namespace acv
