#include "sharpmax/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sharpmax {
namespace {

constexpr double kAdmissibleSlack = 1e-12;
constexpr double kFeasibilityTolerance = 1e-12;
constexpr double kGoldenTolerance = 1e-13;

[[noreturn]] void fail_query(const char* what, const BellmanQuery& q) {
  std::ostringstream msg;
  msg << what << " (p=" << q.p.p() << ", f=" << q.f << ", F=" << q.F
      << ", k=" << q.k << ")";
  throw std::domain_error(msg.str());
}

double mass_off_k(double b, const BellmanQuery& q) {
  const double e = q.p.p();
  return std::pow(q.f - b, e) / std::pow(1.0 - q.k, e - 1.0);
}

// Walks from a feasible `inner` towards an infeasible `outer` and returns the
// last feasible point; h_k is monotone between the two.
double bisect_boundary(double inner, double outer, const BellmanQuery& q) {
  for (int i = 0; i < 200 && std::abs(outer - inner) > kFeasibilityTolerance;
       ++i) {
    const double mid = 0.5 * (inner + outer);
    if (h_k(mid, q) <= q.F) {
      inner = mid;
    } else {
      outer = mid;
    }
  }
  return inner;
}

}  // namespace

BellmanQuery::BellmanQuery(Exponent p_, double f_, double F_, double k_)
    : p(p_), f(f_), F(F_), k(k_) {
  if (!(f > 0.0) || !std::isfinite(f)) fail_query("f must be positive", *this);
  if (!(F > 0.0) || !std::isfinite(F)) fail_query("F must be positive", *this);
  if (std::pow(f, p.p()) > F * (1.0 + kAdmissibleSlack)) {
    fail_query("query violates f^p <= F", *this);
  }
  if (!(k > 0.0 && k <= 1.0)) fail_query("k must lie in (0, 1]", *this);
}

double BellmanQuery::moment_ratio() const {
  return std::min(1.0, std::pow(f, p.p()) / F);
}

bool BellmanQuery::is_constant_case() const {
  return std::pow(f, p.p()) >= F * (1.0 - kAdmissibleSlack);
}

double bellman_two_var(const BellmanQuery& q) {
  return q.F * std::pow(omega_p(q.moment_ratio(), q.p), q.p.p());
}

double h_k(double b, const BellmanQuery& q) {
  if (!(q.k < 1.0)) fail_query("h_k requires k < 1", q);
  if (!(b >= 0.0 && b <= q.f)) {
    std::ostringstream msg;
    msg << "h_k: B=" << b << " outside [0, " << q.f << "]";
    throw std::domain_error(msg.str());
  }
  const double e = q.p.p();
  return mass_off_k(b, q) + std::pow(b, e) / std::pow(q.k, e - 1.0);
}

FeasibleInterval feasible_interval(const BellmanQuery& q) {
  if (!(q.k < 1.0)) fail_query("feasible_interval requires k < 1", q);
  const double centre = q.k * q.f;
  if (q.is_constant_case()) return {centre, centre};

  const double lo = h_k(0.0, q) <= q.F ? 0.0 : bisect_boundary(centre, 0.0, q);
  const double hi = h_k(q.f, q) <= q.F ? q.f : bisect_boundary(centre, q.f, q);
  return {lo, hi};
}

double three_var_objective(double b, const BellmanQuery& q) {
  if (!(q.k < 1.0)) fail_query("three_var_objective requires k < 1", q);
  if (!(b >= 0.0 && b <= q.f)) {
    std::ostringstream msg;
    msg << "three_var_objective: B=" << b << " outside [0, " << q.f << "]";
    throw std::domain_error(msg.str());
  }
  const double e = q.p.p();
  if (q.is_constant_case()) {
    // Only B = k f is feasible; A = k f^p and the omega_p argument is one.
    if (std::abs(b - q.k * q.f) > 1e-9 * q.f) {
      std::ostringstream msg;
      msg << "three_var_objective: B=" << b << " is infeasible, F = f^p forces B = k f";
      throw std::domain_error(msg.str());
    }
    return q.k * std::pow(q.f, e);
  }
  const double a = q.F - mass_off_k(b, q);
  const double slack = kFeasibilityTolerance * std::max(1.0, q.F);
  if (a <= 0.0) {
    // At B = 0 the boundary case A = 0 is feasible and the objective vanishes.
    if (b == 0.0 && a >= -slack) return 0.0;
    std::ostringstream msg;
    msg << "three_var_objective: B=" << b << " is infeasible (A=" << a << ")";
    throw std::domain_error(msg.str());
  }
  const double head = std::pow(b, e) / std::pow(q.k, e - 1.0);
  if (head > a + slack) {
    std::ostringstream msg;
    msg << "three_var_objective: B=" << b << " is infeasible (h_k(B) > F)";
    throw std::domain_error(msg.str());
  }
  const double ratio = std::clamp(head / a, 0.0, 1.0);
  return a * std::pow(omega_p(ratio, q.p), e);
}

ThreeVarResult bellman_three_var(const BellmanQuery& q) {
  if (q.k == 1.0) return {bellman_two_var(q), q.f};
  if (q.is_constant_case()) {
    return {q.k * std::pow(q.f, q.p.p()), q.k * q.f};
  }

  const auto [lo, hi] = feasible_interval(q);
  const auto objective = [&q](double b) { return three_var_objective(b, q); };

  const int n = kThreeVarScanPoints;
  const double step = (hi - lo) / (n - 1);
  const auto grid_point = [&](int i) { return i == n - 1 ? hi : lo + i * step; };
  int best = 0;
  double best_value = objective(lo);
  for (int i = 1; i < n; ++i) {
    const double v = objective(grid_point(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  // Golden-section refinement inside the neighbouring grid cells.
  double a = grid_point(std::max(best - 1, 0));
  double b = grid_point(std::min(best + 1, n - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int i = 0; i < 200 && b - a > kGoldenTolerance; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    }
  }

  ThreeVarResult result{best_value, grid_point(best)};
  for (const double x : {x1, x2, a, b}) {
    const double v = objective(x);
    if (v > result.value) result = {v, x};
  }
  return result;
}

}  // namespace sharpmax
