#include "acv/master.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acv {

namespace {

struct IntegralParts {
  double sqrt_delta;  // sqrt((a^2 + |u|^2 + 1)^2 - 4 |u|^2)
  double c;           // a^2 + |u|^2 + 1
};

IntegralParts integral_parts(double a, double u_abs) {
  // factored form keeps the discriminant nonnegative under roundoff
  double lo = a * a + (u_abs - 1.0) * (u_abs - 1.0);
  double hi = a * a + (u_abs + 1.0) * (u_abs + 1.0);
  if (lo <= 0.0)
    fail(ErrorCode::domain_violation,
         "integral: degenerate point a = 0, |u| = 1");
  return {std::sqrt(lo * hi), a * a + u_abs * u_abs + 1.0};
}

}  // namespace

double integral_i(double a, Complex u) {
  return 1.0 / integral_parts(a, std::abs(u)).sqrt_delta;
}

Complex integral_j(double a, Complex u) {
  auto parts = integral_parts(a, std::abs(u));
  // equals (1 - c / sqrt(delta)) / (2u) without the small-|u| cancellation
  return -2.0 * std::conj(u) /
         (parts.sqrt_delta * (parts.sqrt_delta + parts.c));
}

std::pair<double, Complex> uv_rhs(double h, Complex d) {
  double i_val = integral_i(h, d);
  Complex j_val = integral_j(h, d);
  double u = (h * h + std::norm(d)) * i_val + (d * j_val).real();
  Complex v = h * std::conj(j_val);
  return {u, v};
}

namespace {

struct RotatedResidual {
  double r1;
  double r2;
  double max_abs() const { return std::max(std::abs(r1), std::abs(r2)); }
};

RotatedResidual rotated_residual(double h, double dr, double rho, double t,
                                 double gamma) {
  auto [u, v] = uv_rhs(h, Complex(dr, 0.0));
  return {-t * h + rho * dr - (u - gamma), rho * h + t * dr - v.real()};
}

// one application of the solved-linear-part map
void fixed_point_map(double h, double dr, double rho, double t, double gamma,
                     double& out_h, double& out_dr) {
  auto [u, v] = uv_rhs(h, Complex(dr, 0.0));
  double denom = t * t + rho * rho;
  out_h = (-t * (u - gamma) + rho * v.real()) / denom;
  out_dr = (rho * (u - gamma) + t * v.real()) / denom;
}

}  // namespace

MasterSolution solve_master(Complex z, double t, double gamma,
                            const SolveOptions& opts) {
  if (!(t > 0.0))
    fail(ErrorCode::domain_violation, "solve_master: t must be positive");
  if (!(gamma > 0.0))
    fail(ErrorCode::domain_violation, "solve_master: gamma must be positive");

  const double rho = std::abs(z);
  const Complex phase = rho > 0.0 ? z / rho : Complex(1.0, 0.0);

  double t_stage =
      std::max({opts.t_start_floor, 4.0 * gamma, 4.0 * rho, t});
  double h = gamma / t_stage;
  double dr = 0.0;
  int total_iterations = 0;

  for (bool last = false; !last;) {
    if (t_stage <= t / opts.continuation_factor) {
      t_stage = t;
      last = true;
    }
    double omega = 1.0;
    double res = rotated_residual(h, dr, rho, t_stage, gamma).max_abs();
    int iter = 0;
    while (res > opts.tol) {
      if (++iter > opts.max_iterations_per_stage) {
        std::ostringstream os;
        os << "solve_master: no convergence at stage t = " << t_stage
           << " (z = " << z << ", gamma = " << gamma << ", residual = " << res
           << ", h = " << h << ", d = " << dr << ", iterations = " << iter
           << ")";
        fail(ErrorCode::no_convergence, os.str());
      }
      double fh, fdr;
      fixed_point_map(h, dr, rho, t_stage, gamma, fh, fdr);
      double trial_h = h + omega * (fh - h);
      double trial_dr = dr + omega * (fdr - dr);
      while (trial_h <= 0.0 && omega > 1e-8) {
        omega *= 0.5;
        trial_h = h + omega * (fh - h);
        trial_dr = dr + omega * (fdr - dr);
      }
      double trial_res =
          rotated_residual(trial_h, trial_dr, rho, t_stage, gamma).max_abs();
      if (trial_res < res) {
        h = trial_h;
        dr = trial_dr;
        res = trial_res;
        omega = std::min(1.0, 1.5 * omega);
      } else {
        omega = std::max(0.5 * omega, 1e-8);
        h = h + omega * (fh - h);
        dr = dr + omega * (fdr - dr);
        res = rotated_residual(h, dr, rho, t_stage, gamma).max_abs();
      }
    }
    total_iterations += iter;
    if (!last) t_stage *= opts.continuation_factor;
  }

  MasterSolution out;
  out.z = z;
  out.t = t;
  out.h = h;
  out.d = dr * phase;
  auto [u, v] = uv_rhs(out.h, out.d);
  out.res_u = std::abs(-t * out.h + std::conj(z) * out.d - (u - gamma));
  out.res_v = std::abs(z * out.h + t * out.d - v);
  out.iterations = total_iterations;
  return out;
}

LimitB limit_b(Complex z, double gamma) {
  if (z == Complex(0.0, 0.0))
    fail(ErrorCode::undefined_at_origin, "limit_b: z = 0 is outside the domain");
  LsdModel model(gamma);
  const double z2 = std::norm(z);
  const double inner2 = model.r_inner() * model.r_inner();
  const double outer2 = model.r_outer() * model.r_outer();
  const double tol = 1e-12;

  LimitB out;
  out.z = z;
  if (gamma > 1.0 && z2 < inner2 * (1.0 - tol)) {
    out.regime = Regime::inner_hole;
    out.b = -(gamma - 1.0) / std::conj(z);
  } else if (z2 > outer2 * (1.0 + tol)) {
    out.regime = Regime::outer;
    out.b = -gamma / std::conj(z);
  } else {
    out.regime = Regime::bulk;
    out.b = -model.g_inverse(std::clamp(z2, inner2, outer2)) / std::conj(z);
  }
  return out;
}

Complex stieltjes_limit(Complex z, double t, double gamma,
                        const SolveOptions& opts) {
  MasterSolution sol = solve_master(z, t, gamma, opts);
  return Complex(0.0, sol.h / gamma);
}

}  // namespace acv
