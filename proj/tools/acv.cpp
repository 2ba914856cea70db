// Command-line surface: reproduce the figure data as CSV/JSON files, run
// whiteness tests on user data, solve the trace equations on grids, and run
// the verification suite.
//
// Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 verification
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "acv/acceptance.hpp"
#include "acv/ensemble.hpp"
#include "acv/lsd.hpp"
#include "acv/master.hpp"
#include "acv/parallel.hpp"
#include "acv/rng.hpp"
#include "acv/spectra.hpp"
#include "acv/whiteness.hpp"
#include "io_util.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace acv;
using cli::fmt_double;

namespace {

constexpr int kConfigSchema = 1;

struct CommonSettings {
  std::uint64_t seed = 1;
  int jobs = default_jobs();
  std::string out;
  std::string law = "gaussian";

  fs::path out_dir() const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("ACV_OUT_DIR")) return env;
    return ".";
  }
  EntryLaw entry_law(int n) const {
    if (law == "gaussian")
      return EntryLaw(EntryLaw::Kind::complex_gaussian, n);
    if (law == "bernoulli")
      return EntryLaw(EntryLaw::Kind::complex_bernoulli_phase, n);
    if (law == "disc")
      return EntryLaw(EntryLaw::Kind::uniform_phase_disc, n);
    fail(ErrorCode::invalid_config, "unknown entry law: " + law);
  }
};

MatrixShape resolve_shape(const std::vector<int>& shape_flag,
                          double gamma_flag, int base_n) {
  if (!shape_flag.empty()) {
    if (shape_flag.size() != 2)
      fail(ErrorCode::invalid_config, "--shape needs two integers N n");
    return MatrixShape(shape_flag[0], shape_flag[1]);
  }
  if (gamma_flag > 0.0) {
    int n_rows = static_cast<int>(std::lround(gamma_flag * base_n));
    if (n_rows < 1)
      fail(ErrorCode::invalid_config, "gamma too small for the base size");
    return MatrixShape(n_rows, base_n);
  }
  fail(ErrorCode::invalid_config, "either --shape N n or --gamma is required");
}

Complex parse_complex(const std::string& text) {
  // "re" or "re,im"
  std::size_t comma = text.find(',');
  try {
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)),
                   std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_config, "cannot parse complex number: " + text);
  }
}

MaModel parse_alternative(const std::string& text, int n_rows, int n_cols) {
  // identity:ALPHA2 or toeplitz:TRACE
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    fail(ErrorCode::invalid_config,
         "--alt must be identity:ALPHA2 or toeplitz:TRACE");
  std::string kind = text.substr(0, colon);
  double value = 0.0;
  try {
    value = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_config, "bad --alt value in: " + text);
  }
  if (kind == "identity") return MaModel::identity_alt(n_rows, n_cols, value);
  if (kind == "toeplitz") return MaModel::toeplitz_alt(n_rows, n_cols, value);
  fail(ErrorCode::invalid_config, "unknown alternative kind: " + kind);
}

// Precedence: CLI flag > config file > built-in default. The config is read
// before CLI11 parses, so its values act as the option defaults.
json load_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream is(argv[i + 1]);
      if (!is)
        fail(ErrorCode::invalid_config,
             std::string("cannot open config file ") + argv[i + 1]);
      json cfg = json::parse(is, nullptr, false);
      if (cfg.is_discarded())
        fail(ErrorCode::parse_error,
             std::string("config file is not valid JSON: ") + argv[i + 1]);
      if (cfg.contains("schema") && cfg["schema"].get<int>() != kConfigSchema)
        fail(ErrorCode::invalid_config, "unsupported config schema version");
      return cfg;
    }
  }
  return json::object();
}

template <typename T>
void overlay(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg[key].get<T>();
}

// ---------------------------------------------------------------------------

int cmd_scatter(const CommonSettings& common, const MatrixShape& shape,
                const json& effective_config) {
  cli::OutputMeta meta{"scatter", effective_config, common.seed};
  LsdModel model(shape.gamma());
  SpectralSample s =
      ensemble_spectrum(shape, common.entry_law(shape.cols), common.seed);

  auto csv = cli::open_output(common.out_dir(), "scatter_eigs.csv");
  meta.write_csv_header(csv);
  csv << "re,im\n";
  for (int i = 0; i < s.size(); ++i)
    csv << fmt_double(s.points[i].real()) << ","
        << fmt_double(s.points[i].imag()) << "\n";

  json support = {{"meta", meta.json_block()},
                  {"gamma", shape.gamma()},
                  {"rows", shape.rows},
                  {"cols", shape.cols},
                  {"r_inner", model.r_inner()},
                  {"r_outer", model.r_outer()},
                  {"atom0", model.atom0()}};
  cli::write_json(common.out_dir(), "scatter_support.json", support);
  std::cout << "scatter: wrote " << s.size() << " eigenvalues to "
            << (common.out_dir() / "scatter_eigs.csv").string() << "\n";
  return 0;
}

int cmd_cdf(const CommonSettings& common, const MatrixShape& shape,
            int grid_points, const json& effective_config) {
  cli::OutputMeta meta{"cdf", effective_config, common.seed};
  LsdModel model(shape.gamma());
  SpectralSample s =
      ensemble_spectrum(shape, common.entry_law(shape.cols), common.seed);
  RadialEcdf ecdf = radial_ecdf(s);
  double sup = ecdf.sup_distance([&](double r) { return model.cdf(r); });

  auto csv = cli::open_output(common.out_dir(), "cdf.csv");
  meta.write_csv_header(csv);
  csv << "r,f_theory,f_empirical\n";
  double r_max = model.r_outer() * 1.1;
  for (int k = 0; k <= grid_points; ++k) {
    double r = r_max * k / grid_points;
    csv << fmt_double(r) << "," << fmt_double(model.cdf(r)) << ","
        << fmt_double(ecdf(r)) << "\n";
  }

  json summary = {{"meta", meta.json_block()},
                  {"gamma", shape.gamma()},
                  {"rows", shape.rows},
                  {"cols", shape.cols},
                  {"sup_distance", sup},
                  {"zero_eigenvalues", zero_eigen_count(s, 1e-8)},
                  {"atom0", model.atom0()}};
  cli::write_json(common.out_dir(), "cdf_summary.json", summary);
  std::cout << "cdf: sup-distance " << fmt_double(sup) << ", files in "
            << common.out_dir().string() << "\n";
  return 0;
}

int cmd_test(const CommonSettings& common, const MatrixShape& shape,
             const std::string& input, const std::string& which_test,
             double level, int reps, const json& effective_config) {
  cli::OutputMeta meta{"test", effective_config, common.seed};
  ComplexMatrix y = cli::read_matrix_csv(input, shape.rows, shape.cols);

  TestSpec spec;
  if (which_test == "t1")
    spec.which = TestKind::t1_eig_wasserstein;
  else if (which_test == "t2")
    spec.which = TestKind::t2_trace;
  else if (which_test == "t3")
    spec.which = TestKind::t3_hermitian_mp;
  else
    fail(ErrorCode::invalid_config, "--test must be t1, t2, or t3");
  spec.shape = shape;
  spec.law = common.entry_law(shape.cols);
  spec.reference_seed = common.seed;
  spec.calibration_reps = reps;
  spec.level = level;

  CalibratedTest calibrated = calibrate(spec, common.jobs);
  TestReport report = evaluate(calibrated, y);

  json body = {{"meta", meta.json_block()},
               {"test", which_test},
               {"input", input},
               {"rows", shape.rows},
               {"cols", shape.cols},
               {"law", common.law},
               {"level", level},
               {"calibration_reps", reps},
               {"statistic", report.statistic},
               {"threshold", report.threshold},
               {"reject", report.reject},
               {"p_value", report.p_value}};
  cli::write_json(common.out_dir(), "report.json", body);
  std::cout << "test " << which_test << ": statistic "
            << fmt_double(report.statistic) << ", threshold "
            << fmt_double(report.threshold) << ", p-value "
            << fmt_double(report.p_value) << ", "
            << (report.reject ? "REJECT" : "ACCEPT") << "\n";
  return 0;
}

int cmd_roc(const CommonSettings& common, const MatrixShape& shape,
            const std::string& alt_text, int trials,
            const json& effective_config) {
  cli::OutputMeta meta{"roc", effective_config, common.seed};
  MaModel alternative = parse_alternative(alt_text, shape.rows, shape.cols);
  auto curves = roc_all(shape, common.entry_law(shape.cols), common.seed,
                        alternative, trials, common.jobs);

  auto csv = cli::open_output(common.out_dir(), "roc.csv");
  meta.write_csv_header(csv);
  csv << "test,fpr,tpr\n";
  const char* names[3] = {"t1", "t2", "t3"};
  for (int k = 0; k < 3; ++k)
    for (const auto& pt : curves[k].points)
      csv << names[k] << "," << fmt_double(pt.fpr) << "," << fmt_double(pt.tpr)
          << "\n";

  json aucs = {{"meta", meta.json_block()},
               {"alternative", alt_text},
               {"trials_per_side", trials},
               {"auc",
                {{"t1", curves[0].auc},
                 {"t2", curves[1].auc},
                 {"t3", curves[2].auc}}}};
  cli::write_json(common.out_dir(), "roc_auc.json", aucs);
  std::cout << "roc: AUC t1 " << fmt_double(curves[0].auc) << ", t2 "
            << fmt_double(curves[1].auc) << ", t3 "
            << fmt_double(curves[2].auc) << "\n";
  return 0;
}

int cmd_master(const CommonSettings& common, double gamma,
               const std::vector<std::string>& z_texts,
               const std::vector<double>& t_values,
               const json& effective_config) {
  cli::OutputMeta meta{"master", effective_config, common.seed};
  if (!(gamma > 0.0))
    fail(ErrorCode::invalid_config, "--gamma must be positive");
  std::vector<Complex> zs;
  for (const auto& text : z_texts) zs.push_back(parse_complex(text));
  if (zs.empty())
    zs = {Complex(0.5, 0), Complex(1, 0), Complex(1, 1), Complex(0, 2)};
  std::vector<double> ts = t_values;
  if (ts.empty()) ts = {1.0, 0.3, 0.01};
  for (double t : ts)
    if (!(t > 0.0)) fail(ErrorCode::invalid_config, "--t values must be positive");

  auto csv = cli::open_output(common.out_dir(), "master.csv");
  meta.write_csv_header(csv);
  csv << "z_re,z_im,t,h,d_re,d_im,res_u,res_v,b_re,b_im,status\n";
  int failures = 0;
  for (Complex z : zs) {
    Complex b(std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN());
    if (z != Complex(0, 0)) b = limit_b(z, gamma).b;
    for (double t : ts) {
      csv << fmt_double(z.real()) << "," << fmt_double(z.imag()) << ","
          << fmt_double(t) << ",";
      try {
        MasterSolution sol = solve_master(z, t, gamma);
        csv << fmt_double(sol.h) << "," << fmt_double(sol.d.real()) << ","
            << fmt_double(sol.d.imag()) << "," << fmt_double(sol.res_u) << ","
            << fmt_double(sol.res_v) << "," << fmt_double(b.real()) << ","
            << fmt_double(b.imag()) << ",ok\n";
      } catch (const Error&) {
        ++failures;
        csv << "nan,nan,nan,nan,nan," << fmt_double(b.real()) << ","
            << fmt_double(b.imag()) << ",failed\n";
      }
    }
  }
  std::cout << "master: " << zs.size() * ts.size() << " rows (" << failures
            << " failed) in " << (common.out_dir() / "master.csv").string()
            << "\n";
  return 0;
}

int cmd_smin(const CommonSettings& common, const MatrixShape& shape,
             const std::string& z_text, const std::string& a_kind, int trials,
             const std::vector<double>& t_grid, bool smooth,
             const json& effective_config) {
  cli::OutputMeta meta{"smin", effective_config, common.seed};
  Complex z = parse_complex(z_text);
  ComplexMatrix a =
      a_kind == "identity"
          ? ComplexMatrix(ComplexMatrix::Identity(shape.cols, shape.cols))
          : make_j(shape.cols);
  SminOptions opts;
  opts.smooth = smooth;
  std::vector<double> values = smin_experiment(
      shape, common.entry_law(shape.cols), a, z, trials, common.seed, opts);

  auto csv = cli::open_output(common.out_dir(), "smin.csv");
  meta.write_csv_header(csv);
  csv << "trial,smin\n";
  for (int i = 0; i < trials; ++i)
    csv << i << "," << fmt_double(values[i]) << "\n";

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  json probs = json::object();
  for (double t : t_grid) {
    double frac = static_cast<double>(
                      std::upper_bound(sorted.begin(), sorted.end(), t) -
                      sorted.begin()) /
                  trials;
    probs[fmt_double(t)] = frac;
  }
  json summary = {{"meta", meta.json_block()},
                  {"rows", shape.rows},
                  {"cols", shape.cols},
                  {"a", a_kind},
                  {"z", {z.real(), z.imag()}},
                  {"trials", trials},
                  {"smooth", smooth},
                  {"p_smin_below", probs}};
  cli::write_json(common.out_dir(), "smin_summary.json", summary);
  std::cout << "smin: " << trials << " trials, min "
            << fmt_double(sorted.front()) << ", median "
            << fmt_double(sorted[trials / 2]) << "\n";
  return 0;
}

int cmd_verify(const CommonSettings& common, double tolerance_scale,
               const std::vector<int>& only, const json& effective_config) {
  cli::OutputMeta meta{"verify", effective_config, common.seed};
  AcceptanceOptions opts;
  opts.tolerance_scale = tolerance_scale;
  opts.jobs = common.jobs;
  opts.master_seed = common.seed;
  opts.only = only;
  auto results = run_acceptance(opts, &std::cout);

  json body = {{"meta", meta.json_block()},
               {"tolerance_scale", tolerance_scale},
               {"criteria", json::array()}};
  int failures = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failures;
    body["criteria"].push_back({{"id", r.id},
                                {"name", r.name},
                                {"passed", r.passed},
                                {"seconds", r.seconds},
                                {"detail", r.detail}});
  }
  cli::write_json(common.out_dir(), "verify.json", body);
  std::cout << (failures == 0 ? "verify: all criteria passed"
                              : "verify: FAILURES PRESENT")
            << " (" << results.size() - failures << "/" << results.size()
            << ")\n";
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    json cfg = load_config(argc, argv);

    CLI::App app{"Spectral simulator and whiteness tester for one-step sample "
                 "autocovariance matrices"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    CommonSettings common;
    overlay(cfg, "seed", common.seed);
    overlay(cfg, "jobs", common.jobs);
    overlay(cfg, "out", common.out);
    overlay(cfg, "law", common.law);

    std::vector<int> shape_flag;
    double gamma_flag = 0.0;
    if (cfg.contains("shape")) shape_flag = cfg["shape"].get<std::vector<int>>();
    overlay(cfg, "gamma", gamma_flag);

    auto add_common = [&](CLI::App* sub, bool with_shape = true) {
      sub->add_option("--seed", common.seed, "master seed");
      sub->add_option("--jobs", common.jobs, "worker threads");
      sub->add_option("--out", common.out, "output directory (or ACV_OUT_DIR)");
      sub->add_option("--law", common.law, "entry law: gaussian|bernoulli|disc");
      if (with_shape) {
        sub->add_option("--shape", shape_flag, "matrix shape N n")->expected(2);
        sub->add_option("--gamma", gamma_flag, "aspect ratio (shape derived)");
      }
    };

    auto* scatter = app.add_subcommand("scatter", "eigenvalue scatter + support");
    add_common(scatter);

    auto* cdf = app.add_subcommand("cdf", "radial cdf: theory vs empirical");
    int grid_points = 512;
    overlay(cfg, "grid", grid_points);
    cdf->add_option("--grid", grid_points, "radius grid points");
    add_common(cdf);

    auto* test = app.add_subcommand("test", "run a whiteness test on a file");
    std::string input, which_test = "t1";
    double level = 0.05;
    int reps = 200;
    overlay(cfg, "input", input);
    overlay(cfg, "test", which_test);
    overlay(cfg, "level", level);
    overlay(cfg, "reps", reps);
    auto* input_opt =
        test->add_option("--input", input, "N x 2n CSV of re/im pairs");
    if (input.empty()) input_opt->required();
    test->add_option("--test", which_test, "t1|t2|t3");
    test->add_option("--level", level, "test level in (0,1)");
    test->add_option("--reps", reps, "calibration repetitions");
    add_common(test);

    auto* roc_cmd = app.add_subcommand("roc", "ROC curves of t1/t2/t3");
    std::string alt_text = "identity:0.0031622776601683794";  // 10^-2.5
    int trials = 200;
    overlay(cfg, "alt", alt_text);
    overlay(cfg, "trials", trials);
    roc_cmd->add_option("--alt", alt_text, "identity:ALPHA2 or toeplitz:TRACE");
    roc_cmd->add_option("--trials", trials, "trials per side");
    add_common(roc_cmd);

    auto* master_cmd = app.add_subcommand("master", "trace-equation solutions");
    double master_gamma = 1.0;
    std::vector<std::string> z_texts;
    std::vector<double> t_values;
    overlay(cfg, "master_gamma", master_gamma);
    if (cfg.contains("z")) z_texts = cfg["z"].get<std::vector<std::string>>();
    if (cfg.contains("t")) t_values = cfg["t"].get<std::vector<double>>();
    master_cmd->add_option("--gamma", master_gamma, "aspect ratio");
    master_cmd->add_option("--z", z_texts, "complex points re[,im] (repeatable)");
    master_cmd->add_option("--t", t_values, "spectral heights (repeatable)");
    add_common(master_cmd, false);

    auto* smin = app.add_subcommand("smin", "smallest singular value trials");
    std::string z_text = "1";
    std::string a_kind = "j";
    int smin_trials = 300;
    std::vector<double> t_grid = {1e-6, 1e-4, 1e-2, 1e-1};
    bool smooth = false;
    overlay(cfg, "z_point", z_text);
    overlay(cfg, "a", a_kind);
    overlay(cfg, "smin_trials", smin_trials);
    overlay(cfg, "smooth", smooth);
    smin->add_option("--z", z_text, "shift z as re[,im]");
    smin->add_option("--a", a_kind, "deterministic factor: j|identity");
    smin->add_option("--trials", smin_trials, "number of trials");
    smin->add_option("--tgrid", t_grid, "thresholds for P[smin <= t]");
    smin->add_flag("--smooth", smooth, "mix in the tiny-noise smoothing");
    add_common(smin);

    auto* verify = app.add_subcommand("verify", "run the verification suite");
    double tolerance_scale = 1.0;
    std::vector<int> only;
    overlay(cfg, "tolerance_scale", tolerance_scale);
    verify->add_option("--tolerance-scale", tolerance_scale,
                       "multiplies every tolerance (0 forces failure)");
    verify->add_option("--only", only, "criterion ids to run");
    verify->add_option("--seed", common.seed, "master seed");
    verify->add_option("--jobs", common.jobs, "worker threads");
    verify->add_option("--out", common.out, "output directory");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : 1;  // usage errors always exit 1
    }

    json effective = {{"schema", kConfigSchema},
                      {"seed", common.seed},
                      {"jobs", common.jobs},
                      {"law", common.law}};

    if (scatter->parsed() || cdf->parsed() || test->parsed() ||
        roc_cmd->parsed() || smin->parsed()) {
      MatrixShape shape = resolve_shape(shape_flag, gamma_flag, 500);
      effective["shape"] = {shape.rows, shape.cols};
      if (scatter->parsed()) return cmd_scatter(common, shape, effective);
      if (cdf->parsed()) {
        effective["grid"] = grid_points;
        return cmd_cdf(common, shape, grid_points, effective);
      }
      if (test->parsed()) {
        effective["test"] = which_test;
        effective["level"] = level;
        effective["reps"] = reps;
        return cmd_test(common, shape, input, which_test, level, reps,
                        effective);
      }
      if (roc_cmd->parsed()) {
        effective["alt"] = alt_text;
        effective["trials"] = trials;
        return cmd_roc(common, shape, alt_text, trials, effective);
      }
      effective["z_point"] = z_text;
      effective["a"] = a_kind;
      effective["smin_trials"] = smin_trials;
      effective["smooth"] = smooth;
      return cmd_smin(common, shape, z_text, a_kind, smin_trials, t_grid,
                      smooth, effective);
    }
    if (master_cmd->parsed()) {
      effective["master_gamma"] = master_gamma;
      effective["z"] = z_texts;
      effective["t"] = t_values;
      return cmd_master(common, master_gamma, z_texts, t_values, effective);
    }
    if (verify->parsed()) {
      effective["tolerance_scale"] = tolerance_scale;
      return cmd_verify(common, tolerance_scale, only, effective);
    }
    return 1;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    switch (err.code()) {
      case ErrorCode::invalid_config:
      case ErrorCode::parse_error:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
