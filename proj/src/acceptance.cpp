#include "acv/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <ostream>
#include <random>
#include <sstream>

#include "acv/ensemble.hpp"
#include "acv/lsd.hpp"
#include "acv/master.hpp"
#include "acv/parallel.hpp"
#include "acv/rng.hpp"
#include "acv/spectra.hpp"
#include "acv/transport.hpp"
#include "acv/whiteness.hpp"

namespace acv {

namespace {

std::uint64_t criterion_seed(std::uint64_t master, int criterion,
                             std::uint64_t index) {
  return derive_seed(master, (static_cast<std::uint64_t>(criterion) << 32) + index);
}

EntryLaw gaussian_law(int n) {
  return EntryLaw(EntryLaw::Kind::complex_gaussian, n);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// --- criterion bodies ------------------------------------------------------

CriterionResult radial_cdf_check(int id, const std::string& name,
                                 const MatrixShape& shape, double sup_tol,
                                 bool require_exact_zeros,
                                 const AcceptanceOptions& opts) {
  const int seeds = 10;
  LsdModel model(shape.gamma());
  std::vector<double> sup(seeds, 0.0);
  std::vector<int> zeros(seeds, 0);
  parallel_for(seeds, opts.jobs, [&](int k) {
    SpectralSample s = ensemble_spectrum(shape, gaussian_law(shape.cols),
                                         criterion_seed(opts.master_seed, id, k));
    sup[k] = radial_ecdf(s).sup_distance([&](double r) { return model.cdf(r); });
    zeros[k] = zero_eigen_count(s, 1e-8);
  });
  int ok = 0;
  for (double v : sup)
    if (v <= sup_tol * opts.tolerance_scale) ++ok;
  bool zeros_ok = true;
  if (require_exact_zeros)
    for (int z : zeros) zeros_ok = zeros_ok && z == shape.rows - shape.cols;

  CriterionResult r;
  r.id = id;
  r.name = name;
  r.passed = ok >= 9 && zeros_ok;
  std::ostringstream os;
  os << ok << "/10 seeds with sup-distance <= " << sup_tol * opts.tolerance_scale
     << " (max " << fmt(*std::max_element(sup.begin(), sup.end())) << ")";
  if (require_exact_zeros)
    os << "; exact zero count " << (zeros_ok ? "matched" : "MISMATCHED")
       << " N-n = " << shape.rows - shape.cols;
  r.detail = os.str();
  return r;
}

CriterionResult support_geometry(const AcceptanceOptions& opts) {
  const int id = 3;
  // gamma = 2 at n = 1000: the fixed outer margin 0.15 must dominate the
  // finite-size edge fluctuation, which at n = 500 is of the same order
  // (observed per-seed max radius up to r_outer + 0.19 there)
  const MatrixShape shape(2000, 1000);
  LsdModel model(shape.gamma());
  const double inner_bound =
      model.r_inner() - 0.1 * opts.tolerance_scale;
  const double outer_bound = model.r_outer() + 0.15 * opts.tolerance_scale;
  const int seeds = 10;
  std::vector<int> hole_violations(seeds, 0);
  std::vector<double> max_radius(seeds, 0.0);
  parallel_for(seeds, opts.jobs, [&](int k) {
    SpectralSample s = ensemble_spectrum(shape, gaussian_law(shape.cols),
                                         criterion_seed(opts.master_seed, id, k));
    for (int i = 0; i < s.size(); ++i) {
      double a = std::abs(s.points[i]);
      if (a > 1e-6 && a < inner_bound) ++hole_violations[k];
      max_radius[k] = std::max(max_radius[k], a);
    }
  });
  int violations = 0;
  double worst_radius = 0.0;
  for (int k = 0; k < seeds; ++k) {
    violations += hole_violations[k];
    worst_radius = std::max(worst_radius, max_radius[k]);
  }
  CriterionResult r;
  r.id = id;
  r.name = "support-ring-gamma-2";
  r.passed = violations == 0 && worst_radius <= outer_bound;
  r.detail = std::to_string(violations) + " eigenvalues inside the hole (< " +
             fmt(inner_bound) + "); max |lambda| " + fmt(worst_radius) +
             " vs bound " + fmt(outer_bound);
  return r;
}

double gamma1_inverse_reference(double t) {
  double s = std::sqrt(1.0 - t / 27.0);
  return 0.5 * std::cbrt(t) * (std::cbrt(1.0 + s) + std::cbrt(1.0 - s));
}

CriterionResult gamma1_closed_form(const AcceptanceOptions& opts) {
  LsdModel model(1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    double t = 2.0 * k / 999.0;
    worst = std::max(worst,
                     std::abs(gamma1_inverse_reference(t) - model.g_inverse(t)));
  }
  CriterionResult r;
  r.id = 4;
  r.name = "gamma-1-closed-form";
  r.passed = worst <= 1e-10 * opts.tolerance_scale;
  r.detail = "max |closed form - numeric inverse| = " + fmt(worst);
  return r;
}

CriterionResult master_vs_resolvent(const AcceptanceOptions& opts) {
  const int id = 5;
  const MatrixShape shape(400, 400);
  const double gamma = shape.gamma();
  const std::vector<Complex> zs = {Complex(1, 0), Complex(1, 0.5), Complex(0, 2)};
  const std::vector<double> ts = {0.3, 1.0};
  const int seeds = 5;

  ComplexMatrix j = make_j(shape.cols);
  std::vector<ComplexMatrix> ys(seeds);
  parallel_for(seeds, opts.jobs, [&](int k) {
    ComplexMatrix x = generate_x(shape, gaussian_law(shape.cols),
                                 criterion_seed(opts.master_seed, id, k));
    ys[k] = product_y(x, j);
  });

  double worst_p = 0.0, worst_d = 0.0;
  for (Complex z : zs) {
    for (double t : ts) {
      std::vector<Complex> q00s(seeds), q01s(seeds);
      parallel_for(seeds, opts.jobs, [&](int k) {
        ResolventTraces rt = resolvent_traces(ys[k], z, t);
        q00s[k] = rt.q00;
        q01s[k] = rt.q01;
      });
      Complex q00_avg = 0.0, q01_avg = 0.0;
      for (int k = 0; k < seeds; ++k) {
        q00_avg += q00s[k] / static_cast<double>(seeds);
        q01_avg += q01s[k] / static_cast<double>(seeds);
      }
      // (1/2N) tr Q equals q00/gamma_n since the two diagonal blocks share
      // their trace; (1/N) tr Q01 equals q01/gamma_n.
      MasterSolution sol = solve_master(z, t, gamma);
      worst_p = std::max(worst_p,
                         std::abs(q00_avg / gamma - Complex(0, sol.h) / gamma));
      worst_d = std::max(worst_d, std::abs(q01_avg / gamma - sol.d / gamma));
    }
  }
  CriterionResult r;
  r.id = id;
  r.name = "master-vs-finite-n-resolvent";
  double tol = 0.05 * opts.tolerance_scale;
  r.passed = worst_p <= tol && worst_d <= tol;
  r.detail = "max |trace - limit|: p " + fmt(worst_p) + ", d " + fmt(worst_d) +
             " (tol " + fmt(tol) + ")";
  return r;
}

CriterionResult limit_b_regimes(const AcceptanceOptions& opts) {
  const double gamma = 2.0;
  const double t = 1e-2;
  const std::vector<std::pair<std::string, std::vector<Complex>>> groups = {
      {"inner", {Complex(0.3, 0), Complex(0.2, 0.2), Complex(0, 0.45)}},
      {"bulk", {Complex(1.2, 0), Complex(1.0, 0.8), Complex(0, 1.8)}},
      {"outer", {Complex(3.0, 0), Complex(2.5, 2.0), Complex(0, 3.5)}},
  };
  double worst = 0.0;
  std::string at;
  for (const auto& [label, zs] : groups) {
    for (Complex z : zs) {
      MasterSolution sol = solve_master(z, t, gamma);
      LimitB b = limit_b(z, gamma);
      double err = std::abs(sol.d - b.b);
      if (err > worst) {
        worst = err;
        at = label;
      }
    }
  }
  CriterionResult r;
  r.id = 6;
  r.name = "small-t-limit-b";
  r.passed = worst <= 0.05 * opts.tolerance_scale;
  r.detail = "max |d(z, i t) - b(z)| = " + fmt(worst) + " (" + at + " regime)";
  return r;
}

CriterionResult residue_formulas(const AcceptanceOptions& opts) {
  const int id = 7;
  const int nodes = 4096;
  const int cases = 400;
  auto rng = make_engine(criterion_seed(opts.master_seed, id, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    double h = 0.05 + 2.95 * unit(rng);
    double radius = 2.5 * unit(rng);
    double phase = 2.0 * M_PI * unit(rng);
    Complex d = std::polar(radius, phase);
    Complex i_quad = 0.0, j_quad = 0.0;
    for (int k = 0; k < nodes; ++k) {
      double theta = 2.0 * M_PI * k / nodes;
      Complex e = std::polar(1.0, theta);
      double denom = h * h + std::norm(1.0 + d * e);
      i_quad += 1.0 / denom;
      j_quad += e / denom;
    }
    i_quad /= nodes;
    j_quad /= nodes;
    worst = std::max(worst, std::abs(integral_i(h, d) - i_quad));
    worst = std::max(worst, std::abs(integral_j(h, d) - j_quad));
  }
  CriterionResult r;
  r.id = id;
  r.name = "residue-closed-forms";
  r.passed = worst <= 1e-8 * opts.tolerance_scale;
  r.detail = "max |closed form - 4096-node quadrature| = " + fmt(worst);
  return r;
}

CriterionResult transport_oracle(const AcceptanceOptions& opts) {
  const int id = 8;
  auto rng = make_engine(criterion_seed(opts.master_seed, id, 0));
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_int_distribution<int> size_draw(2, 7);
  auto cloud = [&](int m) {
    ComplexVector v(m);
    for (int i = 0; i < m; ++i) v[i] = Complex(coord(rng), coord(rng));
    return v;
  };

  double worst_gap = 0.0;
  for (int c = 0; c < 200; ++c) {
    int m = size_draw(rng);
    ComplexVector p = cloud(m), q = cloud(m);
    worst_gap = std::max(
        worst_gap, std::abs(wasserstein2(p, q) - wasserstein2_oracle(p, q)));
  }

  double worst_sym = 0.0, worst_triangle = 0.0;
  bool identity_ok = true;
  for (int c = 0; c < 100; ++c) {
    ComplexVector p = cloud(32), q = cloud(32), s = cloud(32);
    double pq = wasserstein2(p, q);
    double qp = wasserstein2(q, p);
    double qs = wasserstein2(q, s);
    double ps = wasserstein2(p, s);
    worst_sym = std::max(worst_sym, std::abs(pq - qp));
    worst_triangle = std::max(worst_triangle, ps - (pq + qs));
    identity_ok = identity_ok && wasserstein2(p, p) == 0.0 && pq > 0.0;
  }

  CriterionResult r;
  r.id = id;
  r.name = "wasserstein-exact-vs-oracle";
  r.passed = worst_gap <= 1e-10 * opts.tolerance_scale &&
             worst_sym <= 1e-12 * opts.tolerance_scale &&
             worst_triangle <= 1e-10 * opts.tolerance_scale && identity_ok;
  r.detail = "max gap to brute force " + fmt(worst_gap) + "; symmetry " +
             fmt(worst_sym) + "; triangle slack " + fmt(worst_triangle);
  return r;
}

CriterionResult roc_ordering(const AcceptanceOptions& opts) {
  const int id = 9;
  const MatrixShape shape(50, 100);
  const EntryLaw law = gaussian_law(shape.cols);
  const int trials = 200;

  auto run_setting = [&](const MaModel& alt, std::uint64_t stream) {
    return roc_all(shape, law, criterion_seed(opts.master_seed, id, stream),
                   alt, trials, opts.jobs);
  };
  auto eye = run_setting(
      MaModel::identity_alt(shape.rows, shape.cols, std::pow(10.0, -2.5)), 0);
  auto toep = run_setting(MaModel::toeplitz_alt(shape.rows, shape.cols, 1e-2), 1);

  bool eye_ok = eye[0].auc > eye[1].auc && eye[0].auc > eye[2].auc;
  bool toep_ok = toep[0].auc > toep[1].auc && toep[0].auc > toep[2].auc;
  CriterionResult r;
  r.id = id;
  r.name = "roc-ordering-t1-best";
  r.passed = eye_ok && toep_ok;
  r.detail = "identity alt AUC (t1,t2,t3) = (" + fmt(eye[0].auc) + ", " +
             fmt(eye[1].auc) + ", " + fmt(eye[2].auc) + "); toeplitz = (" +
             fmt(toep[0].auc) + ", " + fmt(toep[1].auc) + ", " +
             fmt(toep[2].auc) + ")";
  return r;
}

CriterionResult calibration_honesty(const AcceptanceOptions& opts) {
  const int id = 10;
  TestSpec spec;
  spec.which = TestKind::t1_eig_wasserstein;
  spec.shape = MatrixShape(50, 100);
  spec.law = gaussian_law(spec.shape.cols);
  spec.reference_seed = criterion_seed(opts.master_seed, id, 0);
  spec.calibration_reps = 200;
  spec.level = 0.05;
  CalibratedTest test = calibrate(spec, opts.jobs);

  const int fresh = 400;
  MaModel null_model = MaModel::white_noise(spec.shape.rows, spec.shape.cols);
  std::vector<int> rejected(fresh, 0);
  parallel_for(fresh, opts.jobs, [&](int i) {
    ComplexMatrix y = simulate_series(
        null_model, spec.law, criterion_seed(opts.master_seed, id, 1000 + i));
    rejected[i] = evaluate(test, y).reject ? 1 : 0;
  });
  int total = 0;
  for (int v : rejected) total += v;
  double rate = static_cast<double>(total) / fresh;

  CriterionResult r;
  r.id = id;
  r.name = "calibrated-level-honesty";
  r.passed = std::abs(rate - 0.055) <= 0.035 * opts.tolerance_scale;
  r.detail = "fresh-null rejection rate " + fmt(rate) + " over 400 trials (band 0.02..0.09)";
  return r;
}

CriterionResult linearization_inequality(const AcceptanceOptions& opts) {
  const int id = 11;
  const MatrixShape shape(30, 40);
  const ComplexMatrix j = make_j(shape.cols);
  const Complex z(1.0, 1.0);
  const int trials = 100;
  std::vector<int> holds(trials, 0);
  std::vector<double> margins(trials, 0.0);
  parallel_for(trials, opts.jobs, [&](int k) {
    ComplexMatrix x = generate_x(shape, gaussian_law(shape.cols),
                                 criterion_seed(opts.master_seed, id, k));
    auto [lhs, rhs] = linearization_check(x, j, z);
    holds[k] = lhs <= rhs * (1.0 + 1e-10) ? 1 : 0;
    margins[k] = rhs - lhs;
  });
  int total = 0;
  double min_margin = margins[0];
  for (int k = 0; k < trials; ++k) {
    total += holds[k];
    min_margin = std::min(min_margin, margins[k]);
  }
  CriterionResult r;
  r.id = id;
  r.name = "linearization-inequality";
  r.passed = total == trials;
  r.detail = std::to_string(total) + "/100 trials hold; min margin " +
             fmt(min_margin);
  return r;
}

CriterionResult smin_trend(const AcceptanceOptions& opts) {
  const int id = 12;
  const MatrixShape shape(200, 200);
  ComplexMatrix j = make_j(shape.cols);
  std::vector<double> smins = smin_experiment(
      shape, gaussian_law(shape.cols), j, Complex(1.0, 0.0), 300,
      criterion_seed(opts.master_seed, id, 0));
  std::sort(smins.begin(), smins.end());
  auto ecdf = [&](double t) {
    return static_cast<double>(std::upper_bound(smins.begin(), smins.end(), t) -
                               smins.begin()) /
           static_cast<double>(smins.size());
  };
  const std::vector<double> grid = {1e-6, 1e-4, 1e-2, 1e-1};
  bool monotone = true;
  double prev = -1.0;
  std::ostringstream curve;
  for (double t : grid) {
    double p = ecdf(t);
    monotone = monotone && p >= prev;
    prev = p;
    curve << " P[s<=" << t << "]=" << p;
  }
  CriterionResult r;
  r.id = id;
  r.name = "smin-nondegeneracy-trend";
  r.passed = monotone && ecdf(1e-4) <= 0.2 * opts.tolerance_scale;
  r.detail = curve.str();
  return r;
}

CriterionResult norm_convergence(const AcceptanceOptions& opts) {
  const int id = 13;
  const MatrixShape shape(500, 1000);
  const double target = 1.0 + std::sqrt(shape.gamma());
  const int seeds = 100;
  std::vector<double> norms(seeds, 0.0);
  parallel_for(seeds, opts.jobs, [&](int k) {
    ComplexMatrix x = generate_x(shape, gaussian_law(shape.cols),
                                 criterion_seed(opts.master_seed, id, k));
    norms[k] = spectral_norm(x);
  });
  int ok = 0;
  double worst = 0.0;
  for (double v : norms) {
    double err = std::abs(v - target);
    worst = std::max(worst, err);
    if (err <= 0.1 * opts.tolerance_scale) ++ok;
  }
  CriterionResult r;
  r.id = id;
  r.name = "operator-norm-convergence";
  r.passed = ok >= 95;
  r.detail = std::to_string(ok) + "/100 seeds within 0.1 of " + fmt(target) +
             " (max deviation " + fmt(worst) + ")";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            std::ostream* log) {
  using Runner = CriterionResult (*)(const AcceptanceOptions&);
  struct Entry {
    int id;
    Runner fn;
  };
  static const Entry entries[] = {
      {1, [](const AcceptanceOptions& o) {
         return radial_cdf_check(1, "lsd-radial-cdf-gamma-0.5",
                                 MatrixShape(500, 1000), 0.06, false, o);
       }},
      {2, [](const AcceptanceOptions& o) {
         return radial_cdf_check(2, "lsd-radial-cdf-gamma-2",
                                 MatrixShape(1000, 500), 0.06, true, o);
       }},
      {3, support_geometry},
      {4, gamma1_closed_form},
      {5, master_vs_resolvent},
      {6, limit_b_regimes},
      {7, residue_formulas},
      {8, transport_oracle},
      {9, roc_ordering},
      {10, calibration_honesty},
      {11, linearization_inequality},
      {12, smin_trend},
      {13, norm_convergence},
  };

  std::vector<CriterionResult> results;
  for (const auto& entry : entries) {
    if (!opts.only.empty() &&
        std::find(opts.only.begin(), opts.only.end(), entry.id) ==
            opts.only.end())
      continue;
    auto start = std::chrono::steady_clock::now();
    CriterionResult r = entry.fn(opts);
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (log) {
      (*log) << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << "  "
             << r.name << "  [" << fmt(r.seconds) << " s]  " << r.detail
             << std::endl;
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace acv
