#include "sharpmax/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "sharpmax/quadrature.hpp"

namespace sharpmax {
namespace {

constexpr double kWidthTolerance = 1e-9;
constexpr double kTightTolerance = 1e-12;
constexpr double kRelativeTolerance = 1e-10;
constexpr double kQuadratureTolerance = 1e-10;

// b^s - a^s for 0 < a < b, accurate when b is close to a.
double power_difference(double a, double b, double s) {
  return std::pow(a, s) * std::expm1(s * std::log1p((b - a) / a));
}

// Integral of t^(-j) over [a, b] for 0 < a < b and integer j >= 0.
double inverse_power_integral(double a, double b, int j) {
  if (j == 0) return b - a;
  if (j == 1) return std::log1p((b - a) / a);
  return -power_difference(a, b, 1.0 - j) / (j - 1);
}

bool is_small_integer(double e) {
  return e >= 0.0 && e <= 64.0 && e == std::floor(e);
}

}  // namespace

StepFunction1D::StepFunction1D(std::vector<double> widths,
                               std::vector<double> values)
    : widths_(std::move(widths)), values_(std::move(values)) {
  if (values_.empty() || widths_.size() != values_.size()) {
    throw std::invalid_argument("step function needs one width per value");
  }
  breaks_.reserve(widths_.size() + 1);
  breaks_.push_back(0.0);
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (!(widths_[i] > 0.0)) {
      throw std::invalid_argument("step function widths must be positive");
    }
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("step function values must be finite and >= 0");
    }
    breaks_.push_back(breaks_.back() + widths_[i]);
  }
  if (std::abs(breaks_.back() - 1.0) > kWidthTolerance) {
    std::ostringstream msg;
    msg << "step function widths sum to " << breaks_.back() << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  breaks_.back() = 1.0;
}

bool StepFunction1D::is_nonincreasing() const noexcept {
  return std::is_sorted(values_.rbegin(), values_.rend());
}

std::size_t StepFunction1D::piece_at(double t) const {
  if (!(t > 0.0)) {
    std::ostringstream msg;
    msg << "step function evaluated at t=" << t << " outside (0, 1]";
    throw std::domain_error(msg.str());
  }
  const auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), t);
  if (it == breaks_.end()) return values_.size() - 1;
  return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

double StepFunction1D::integral(double k) const {
  const std::size_t last = piece_at(k);
  double s = 0.0;
  for (std::size_t i = 0; i < last; ++i) s += values_[i] * widths_[i];
  const double w = k >= breaks_[last + 1] ? widths_[last] : k - breaks_[last];
  return s + values_[last] * w;
}

double StepFunction1D::integral_p(double k, double p) const {
  const std::size_t last = piece_at(k);
  double s = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    s += std::pow(values_[i], p) * widths_[i];
  }
  const double w = k >= breaks_[last + 1] ? widths_[last] : k - breaks_[last];
  return s + std::pow(values_[last], p) * w;
}

double StepFunction1D::level_measure(double y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > y) s += widths_[i];
  }
  return s;
}

StepFunction1D rearrange(const TreeFunction& phi) {
  const Tree& tree = phi.tree();
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(tree.leaf_count());
  for (std::size_t i = 0; i < tree.leaf_count(); ++i) {
    atoms.emplace_back(phi.value(i), tree.leaf_measure(i));
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<double> widths;
  std::vector<double> values;
  for (const auto& [v, m] : atoms) {
    if (!values.empty() && values.back() == v) {
      widths.back() += m;
    } else {
      values.push_back(v);
      widths.push_back(m);
    }
  }
  return StepFunction1D(std::move(widths), std::move(values));
}

double integrate_shifted_power(double v, double c, double a, double b,
                               double e) {
  if (!(b > a) || a < 0.0) return 0.0;
  if (c == 0.0) return std::pow(v, e) * (b - a);
  if (a == 0.0) {
    throw std::domain_error("integrate_shifted_power: c/t is singular at t=0");
  }
  if (v == 0.0) {
    const double ce = std::pow(c, e);
    if (e == 1.0) return ce * std::log1p((b - a) / a);
    return ce * power_difference(a, b, 1.0 - e) / (1.0 - e);
  }
  if (is_small_integer(e)) {
    // Binomial expansion of (v + c/t)^n; every term is nonnegative.
    const int n = static_cast<int>(e);
    double total = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
      total += binom * std::pow(v, n - j) * std::pow(c, j) *
               inverse_power_integral(a, b, j);
      binom = binom * (n - j) / (j + 1);
    }
    return total;
  }
  const auto integrand = [v, c, e](double t) { return std::pow(v + c / t, e); };
  const QuadratureResult q = gauss_kronrod(integrand, a, b, kQuadratureTolerance);
  if (!q.converged || !std::isfinite(q.value)) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b
        << "], estimated error " << q.error;
    throw std::runtime_error(msg.str());
  }
  return q.value;
}

HardyAverage::HardyAverage(StepFunction1D g) : g_(std::move(g)) {
  if (!g_.is_nonincreasing()) {
    throw std::invalid_argument("hardy average needs a nonincreasing function");
  }
  const auto v = g_.values();
  const auto w = g_.widths();
  const auto t = g_.breakpoints();
  offsets_.reserve(v.size());
  double cumulative = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    offsets_.push_back(i == 0 ? 0.0 : std::max(0.0, cumulative - v[i] * t[i]));
    cumulative += v[i] * w[i];
  }
}

double HardyAverage::operator()(double t) const {
  const std::size_t i = g_.piece_at(t);
  return g_.values()[i] + offsets_[i] / t;
}

double HardyAverage::integral_p(double k, double p) const {
  const std::size_t last = g_.piece_at(k);
  const auto v = g_.values();
  const auto t = g_.breakpoints();
  double s = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double right = i == last ? std::min(k, t[i + 1]) : t[i + 1];
    s += integrate_shifted_power(v[i], offsets_[i], t[i], right, p);
  }
  return s;
}

double HardyAverage::integral_weighted(double k, double e) const {
  const std::size_t last = g_.piece_at(k);
  const auto v = g_.values();
  const auto t = g_.breakpoints();
  double s = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    if (v[i] == 0.0) continue;
    const double right = i == last ? std::min(k, t[i + 1]) : t[i + 1];
    s += v[i] * integrate_shifted_power(v[i], offsets_[i], t[i], right, e);
  }
  return s;
}

VerificationReport check_weak_type(const TreeFunction& phi, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("check_weak_type: lambda must be positive");
  }
  const TreeFunction max_phi = maximal_operator(phi);
  const Tree& tree = phi.tree();
  double level = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < tree.leaf_count(); ++i) {
    if (max_phi.value(i) > lambda) {
      level += tree.leaf_measure(i);
      mass += phi.value(i) * tree.leaf_measure(i);
    }
  }
  VerificationReport r;
  r.check = "weak_type";
  r.parameters["lambda"] = lambda;
  r.lhs = level;
  r.rhs = mass / lambda;
  r.margin = r.rhs - r.lhs;
  r.passed = r.lhs <= r.rhs + kTightTolerance * std::max(1.0, r.rhs);
  return r;
}

VerificationReport check_lemma31(const TreeFunction& phi) {
  const StepFunction1D lhs = rearrange(maximal_operator(phi));
  const HardyAverage rhs(rearrange(phi));

  std::vector<double> grid;
  const auto lb = lhs.breakpoints();
  const auto rb = rhs.base().breakpoints();
  grid.insert(grid.end(), lb.begin() + 1, lb.end());
  grid.insert(grid.end(), rb.begin() + 1, rb.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? 0.0 : grid[i - 1];
    grid.push_back(0.5 * (left + grid[i]));
  }

  VerificationReport r;
  r.check = "lemma31";
  r.margin = std::numeric_limits<double>::infinity();
  r.passed = true;
  for (const double t : grid) {
    if (!(t > 0.0)) continue;
    const double l = lhs(t);
    const double h = rhs(t);
    if (l > h + kTightTolerance * std::max(1.0, h)) r.passed = false;
    if (h - l < r.margin) {
      r.margin = h - l;
      r.lhs = l;
      r.rhs = h;
      r.details["worst_t"] = t;
    }
  }
  r.details["grid_points"] = static_cast<double>(grid.size());
  return r;
}

VerificationReport check_lemma32(const TreeFunction& phi,
                                 std::span<const std::size_t> k_leaves,
                                 const Exponent& p) {
  if (k_leaves.empty()) {
    throw std::invalid_argument("check_lemma32: K must not be empty");
  }
  const Tree& tree = phi.tree();
  const TreeFunction max_phi = maximal_operator(phi);
  const double e = p.p();
  double k = 0.0;
  double lhs = 0.0;
  for (const std::size_t leaf : k_leaves) {
    const double m = tree.leaf_measure(leaf);
    k += m;
    lhs += std::pow(max_phi.value(leaf), e) * m;
  }
  k = std::min(k, 1.0);

  const StepFunction1D star = rearrange(phi);
  const double a = star.integral_p(k, e);
  const double b = star.integral(k);
  double ratio = 0.0;
  double rhs = 0.0;
  if (a > 0.0) {
    ratio = std::clamp(std::pow(b, e) / (std::pow(k, e - 1.0) * a), 0.0, 1.0);
    rhs = a * std::pow(omega_p(ratio, p), e);
  }

  VerificationReport r;
  r.check = "lemma32";
  r.parameters["p"] = e;
  r.parameters["k"] = k;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.details["A"] = a;
  r.details["B"] = b;
  r.details["omega_argument"] = ratio;
  r.passed = lhs <= rhs + kRelativeTolerance * std::max(1.0, rhs);
  return r;
}

VerificationReport check_corollary21(const TreeFunction& phi,
                                     const Exponent& p) {
  const double lhs = maximal_operator(phi).moment(p.p());
  const double rhs = HardyAverage(rearrange(phi)).integral_p(1.0, p.p());
  VerificationReport r;
  r.check = "corollary21";
  r.parameters["p"] = p.p();
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.passed = lhs <= rhs + kRelativeTolerance * std::max(1.0, rhs);
  return r;
}

VerificationReport check_conditions_i_iii(const TreeFunction& phi, double k,
                                          const Exponent& p) {
  if (!(k > 0.0 && k <= 1.0)) {
    throw std::invalid_argument("check_conditions_i_iii: k must lie in (0, 1]");
  }
  const double e = p.p();
  const double f = phi.integral();
  const double F = phi.moment(e);
  const StepFunction1D star = rearrange(phi);
  const double a = star.integral_p(k, e);
  const double b = star.integral(k);

  VerificationReport r;
  r.check = "conditions_i_iii";
  r.parameters["p"] = e;
  r.parameters["k"] = k;
  r.lhs = std::pow(b, e);
  r.rhs = std::pow(k, e - 1.0) * a;
  r.details["A"] = a;
  r.details["B"] = b;
  r.details["i"] = r.rhs - r.lhs;
  r.details["ii_A"] = F - a;
  r.details["ii_B"] = f - b;
  r.details["iii"] = std::pow(1.0 - k, e - 1.0) * std::max(0.0, F - a) -
                     std::pow(std::max(0.0, f - b), e);

  const double scale_moment = kRelativeTolerance * std::max(1.0, F);
  const double scale_mean = kRelativeTolerance * std::max(1.0, f);
  r.passed = r.details["i"] >= -scale_moment && r.details["ii_A"] >= -scale_moment &&
             r.details["ii_B"] >= -scale_mean && r.details["iii"] >= -scale_moment;
  r.margin = std::min({r.details["i"], r.details["ii_A"], r.details["ii_B"],
                       r.details["iii"]});
  return r;
}

}  // namespace sharpmax
