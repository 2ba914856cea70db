#pragma once

#include "acv/lsd.hpp"
#include "acv/types.hpp"

namespace acv {

/// Solution of the coupled trace equations at spectral point i*t:
///   -t h + conj(z) d = u(h, d) - gamma
///    z h +       t d = v(h, d)
/// with h > 0 and |d| <= gamma / t.
struct MasterSolution {
  Complex z;
  double t = 0.0;
  double h = 0.0;
  Complex d;
  double res_u = 0.0;
  double res_v = 0.0;
  int iterations = 0;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iterations_per_stage = 10000;
  double continuation_factor = 0.9;
  double t_start_floor = 10.0;
};

enum class Regime { inner_hole, bulk, outer };

/// Pointwise limit of d(z, it) as t -> 0.
struct LimitB {
  Complex z;
  Complex b;
  Regime regime = Regime::bulk;
};

/// Angular average of 1 / (a^2 + |1 + u e^{i theta}|^2), in closed form.
double integral_i(double a, Complex u);

/// Angular average of e^{i theta} / (a^2 + |1 + u e^{i theta}|^2), in closed
/// form; continuous limit 0 at u = 0.
Complex integral_j(double a, Complex u);

/// Right-hand sides (u, v) of the trace equations, assembled from the closed
/// forms: u = (h^2 + |d|^2) I + d J (real) and v = h conj(J).
std::pair<double, Complex> uv_rhs(double h, Complex d);

/// Damped fixed-point solve with geometric continuation in t, warm-started
/// from the large-t asymptote (h, d) = (gamma/t0, 0). The phase of z is
/// factored out, the system is solved on the real axis, and d is rotated
/// back.
MasterSolution solve_master(Complex z, double t, double gamma,
                            const SolveOptions& opts = {});

/// Piecewise t -> 0 limit of d, classified by |z|^2 against the ring
/// boundaries (gamma-1)^3/gamma and gamma (gamma+1). Boundary points take the
/// bulk branch. Uses the LSD inverse map in the bulk.
LimitB limit_b(Complex z, double gamma);

/// Limit Stieltjes transform of the symmetrized singular-value law of the
/// shifted ensemble at i*t: i h(z,t) / gamma.
Complex stieltjes_limit(Complex z, double t, double gamma,
                        const SolveOptions& opts = {});

}  // namespace acv
