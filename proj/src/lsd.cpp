#include "acv/lsd.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "acv/rng.hpp"

namespace acv {

namespace {
constexpr double kDomainSlack = 1e-9;
}

LsdModel::LsdModel(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorCode::domain_violation, "LsdModel: gamma must be positive");
  y_lo_ = std::max(0.0, gamma_ - 1.0);
  y_hi_ = gamma_;
  r_inner_ = gamma_ > 1.0 ? std::pow(gamma_ - 1.0, 1.5) / std::sqrt(gamma_) : 0.0;
  r_outer_ = std::sqrt(gamma_ * (gamma_ + 1.0));
  atom0_ = gamma_ > 1.0 ? 1.0 - 1.0 / gamma_ : 0.0;
}

double LsdModel::g(double y) const {
  if (y < y_lo_ - kDomainSlack || y > y_hi_ + kDomainSlack)
    fail(ErrorCode::domain_violation, "LsdModel::g: y outside [y_lo, y_hi]");
  y = std::clamp(y, y_lo_, y_hi_);
  double lin = 1.0 - gamma_ + 2.0 * y;
  return y * lin * lin / (y + 1.0);
}

double LsdModel::g_prime(double y) const {
  double lin = 1.0 - gamma_ + 2.0 * y;
  double yp1 = y + 1.0;
  return lin * (4.0 * y * y + 6.0 * y + 1.0 - gamma_) / (yp1 * yp1);
}

double LsdModel::g_inverse(double t) const {
  const double t_lo = r_inner_ * r_inner_;
  const double t_hi = r_outer_ * r_outer_;
  if (t < t_lo - kDomainSlack * std::max(1.0, t_hi) ||
      t > t_hi + kDomainSlack * std::max(1.0, t_hi))
    fail(ErrorCode::domain_violation,
         "LsdModel::g_inverse: t outside [r_inner^2, r_outer^2]");
  t = std::clamp(t, t_lo, t_hi);

  double a = y_lo_, b = y_hi_;
  double y = a + (b - a) * (t_hi > t_lo ? (t - t_lo) / (t_hi - t_lo) : 0.5);
  const double tol = 1e-13 * std::max(1.0, t);
  for (int iter = 0; iter < 200; ++iter) {
    double residual = g(y) - t;
    if (std::abs(residual) <= tol) return y;
    if (residual > 0.0)
      b = y;
    else
      a = y;
    double deriv = g_prime(y);
    double step = deriv > 0.0 ? y - residual / deriv : a - 1.0;
    y = (step > a && step < b) ? step : 0.5 * (a + b);
  }
  return y;
}

double LsdModel::cdf(double r) const {
  if (r < 0.0)
    fail(ErrorCode::domain_violation, "LsdModel::cdf: r must be nonnegative");
  if (r >= r_outer_) return 1.0;
  if (r <= r_inner_) return atom0_;
  return g_inverse(r * r) / gamma_;
}

double LsdModel::density(double r) const {
  if (r <= 0.0)
    fail(ErrorCode::domain_violation, "LsdModel::density: r must be positive");
  if (gamma_ == 1.0 && r < 1e-6)
    fail(ErrorCode::unbounded_density,
         "LsdModel::density: diverges at the origin for gamma = 1");
  if (r <= r_inner_ || r >= r_outer_) return 0.0;
  double y = g_inverse(r * r);
  return 1.0 / (gamma_ * M_PI * g_prime(y));
}

double LsdModel::quantile(double u) const {
  if (u < 0.0 || u > 1.0)
    fail(ErrorCode::domain_violation, "LsdModel::quantile: u outside [0, 1]");
  if (u <= atom0_) return 0.0;
  double y = std::clamp(gamma_ * u, y_lo_, y_hi_);
  return std::sqrt(g(y));
}

SpectralSample LsdModel::sample(int count, std::uint64_t seed) const {
  if (count < 1)
    fail(ErrorCode::domain_violation, "LsdModel::sample: count must be >= 1");
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SpectralSample s;
  s.points.resize(count);
  for (int i = 0; i < count; ++i) {
    double r = quantile(unit(rng));
    double theta = 2.0 * M_PI * unit(rng);
    s.points[i] = Complex(r * std::cos(theta), r * std::sin(theta));
  }
  s.kind = SpectralSample::Kind::eigenvalues;
  s.rows = count;
  s.cols = count;
  s.seed = seed;
  return s;
}

MpModel::MpModel(double ratio) : ratio_(ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    fail(ErrorCode::domain_violation, "MpModel: ratio must be positive");
  double sq = std::sqrt(ratio_);
  lo_ = (1.0 - sq) * (1.0 - sq);
  hi_ = (1.0 + sq) * (1.0 + sq);
  atom0_ = ratio_ > 1.0 ? 1.0 - 1.0 / ratio_ : 0.0;
}

double MpModel::density(double x) const {
  if (x <= lo_ || x >= hi_) return 0.0;
  return std::sqrt((hi_ - x) * (x - lo_)) / (2.0 * M_PI * ratio_ * x);
}

double MpModel::bulk_cdf(double x) const {
  // antiderivative of the density under x = 1 + ratio + 2 sqrt(ratio) cos(psi)
  if (x <= lo_) return 0.0;
  if (x >= hi_) return ratio_ > 1.0 ? 1.0 / ratio_ : 1.0;
  const double p = 1.0 + ratio_;
  const double q = 2.0 * std::sqrt(ratio_);
  const double kappa =
      std::abs(1.0 - std::sqrt(ratio_)) / (1.0 + std::sqrt(ratio_));
  const double c_atan = -std::abs(1.0 - ratio_) / (2.0 * ratio_);
  auto antideriv = [&](double psi) {
    return -std::sin(psi) / q + p * psi / (q * q) +
           c_atan * std::atan(kappa * std::tan(0.5 * psi));
  };
  double cosphi = std::clamp((x - p) / q, -1.0, 1.0);
  double phi = std::acos(cosphi);
  double at_pi = p * M_PI / (q * q) + c_atan * 0.5 * M_PI;
  return (2.0 / M_PI) * (at_pi - antideriv(phi));
}

double MpModel::cdf(double x) const {
  if (x < 0.0) return 0.0;
  return std::min(1.0, atom0_ + bulk_cdf(x));
}

double MpModel::quantile(double u) const {
  if (u < 0.0 || u > 1.0)
    fail(ErrorCode::domain_violation, "MpModel::quantile: u outside [0, 1]");
  if (u <= atom0_) return 0.0;
  double a = lo_, b = hi_;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (a + b);
    double residual = cdf(mid) - u;
    if (std::abs(residual) <= 1e-14 || b - a <= 1e-14 * hi_) {
      // one Newton polish where the density is usable
      double f = density(mid);
      if (f > 1e-12) mid = std::clamp(mid - residual / f, lo_, hi_);
      return mid;
    }
    if (residual > 0.0)
      b = mid;
    else
      a = mid;
  }
  return 0.5 * (a + b);
}

SpectralSample MpModel::sample(int count, std::uint64_t seed) const {
  if (count < 1)
    fail(ErrorCode::domain_violation, "MpModel::sample: count must be >= 1");
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealVector values(count);
  for (int i = 0; i < count; ++i) values[i] = quantile(unit(rng));
  std::sort(values.data(), values.data() + count, std::greater<double>());
  SpectralSample s;
  s.points = values.cast<Complex>();
  s.kind = SpectralSample::Kind::singular_values;
  s.rows = count;
  s.cols = count;
  s.seed = seed;
  return s;
}

}  // namespace acv
