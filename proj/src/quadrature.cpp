#include "sharpmax/quadrature.hpp"

#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace sharpmax {
namespace {

// QUADPACK qk15 abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

std::pair<double, double> rule(const std::function<double(double)>& fn, double a,
                               double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fn(centre);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = fn(centre - dx) + fn(centre + dx);
    kronrod += kKronrod[i] * pair;
    if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
  }
  return {kronrod * half, std::abs(kronrod - gauss) * half};
}

}  // namespace

QuadratureResult gauss_kronrod(const std::function<double(double)>& fn, double a,
                               double b, double rel_tol, double abs_tol,
                               int max_depth) {
  struct Interval {
    double a;
    double b;
    int depth;
  };
  QuadratureResult out{0.0, 0.0, true};
  std::vector<Interval> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Interval cur = stack.back();
    stack.pop_back();
    const auto [value, error] = rule(fn, cur.a, cur.b);
    if (error <= rel_tol * std::abs(value) + abs_tol || cur.depth >= max_depth) {
      if (cur.depth >= max_depth && error > rel_tol * std::abs(value) + abs_tol) {
        out.converged = false;
      }
      out.value += value;
      out.error += error;
      continue;
    }
    const double mid = 0.5 * (cur.a + cur.b);
    stack.push_back({mid, cur.b, cur.depth + 1});
    stack.push_back({cur.a, mid, cur.depth + 1});
  }
  return out;
}

}  // namespace sharpmax
