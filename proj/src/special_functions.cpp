#include "sharpmax/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sharpmax {
namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kStepTolerance = 1e-14;
constexpr int kMaxIterations = 200;

// Bisection is run down to this bracket width before switching to Newton.
constexpr double kBisectionWidth = 1e-1;

struct Deficit {
  double value;  // 1 - H_p(1 + w)
  double slope;  // d/dw of value
};

// With a = (1 + w)^(p-1) - 1: 1 - H_p(1 + w) = (p-1) w (1 + a) - a.
Deficit deficit_with_slope(double w, double e) {
  const double a = std::expm1((e - 1.0) * std::log1p(w));
  return {(e - 1.0) * w * (1.0 + a) - a, e * (e - 1.0) * w * (1.0 + a) / (1.0 + w)};
}

}  // namespace

Exponent::Exponent(double p) : p_(p), q_(0.0) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "exponent must satisfy p > 1, got p=" << p;
    throw std::domain_error(msg.str());
  }
  q_ = p / (p - 1.0);
}

double h_poly(double z, const Exponent& p) {
  if (!(z >= 1.0 - kDomainSlack && z <= p.q() + kDomainSlack)) {
    std::ostringstream msg;
    msg << "h_poly: z=" << z << " outside [1, " << p.q() << "]";
    throw std::domain_error(msg.str());
  }
  const double e = p.p();
  // z^(p-1) * (p - (p-1) z); the factored form avoids one pow call.
  return std::pow(z, e - 1.0) * (e - (e - 1.0) * z);
}

double h_poly_derivative(double z, const Exponent& p) {
  const double e = p.p();
  return e * (e - 1.0) * std::pow(z, e - 2.0) * (1.0 - z);
}

double omega_p(double x, const Exponent& p) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "omega_p: x=" << x << " outside [0, 1]";
    throw std::domain_error(msg.str());
  }
  if (x == 1.0) return 1.0;
  if (x == 0.0) return p.q();

  // Solve 1 - H_p(1 + w) = 1 - x for w in [0, q - 1]. The left side is
  // increasing in w and evaluated without forming H_p(z) near 1, where the
  // inverse has a square-root singularity.
  const double e = p.p();
  const double target = 1.0 - x;
  double lo = 0.0;
  double hi = p.q() - 1.0;
  int iter = 0;
  while (hi - lo > kBisectionWidth && iter < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (deficit_with_slope(mid, e).value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iter;
  }

  // Near w = 0 the deficit is p(p-1)w^2/2; start Newton there when it lands
  // inside the bracket.
  double w = std::sqrt(2.0 * target / (e * (e - 1.0)));
  if (!(w > lo && w < hi)) w = 0.5 * (lo + hi);
  for (; iter < kMaxIterations; ++iter) {
    const Deficit d = deficit_with_slope(w, e);
    const double residual = d.value - target;
    if (residual == 0.0) break;
    if (residual < 0.0) {
      lo = w;
    } else {
      hi = w;
    }
    double next = d.slope > 0.0 ? w - residual / d.slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - w);
    w = next;
    if (step <= kStepTolerance) break;
  }
  return std::clamp(1.0 + w, 1.0, p.q());
}

double h_poly_deficit(double w, const Exponent& p) {
  const double e = p.p();
  const double log_z = std::log1p(w);
  // (p-1)(z^p - 1) - p (z^(p-1) - 1)
  return (e - 1.0) * std::expm1(e * log_z) - e * std::expm1((e - 1.0) * log_z);
}

double u_func(double x, const Exponent& p) {
  if (!(x > 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "u_func: x=" << x << " outside (0, 1]";
    throw std::domain_error(msg.str());
  }
  return std::pow(omega_p(x, p), p.p()) / x;
}

}  // namespace sharpmax
