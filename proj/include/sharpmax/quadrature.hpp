#pragma once

#include <functional>

namespace sharpmax {

struct QuadratureResult {
  double value;
  double error;
  bool converged;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b]: intervals are bisected until
/// |K15 - G7| <= rel_tol * |K15| + abs_tol on each, or `max_depth` is hit.
QuadratureResult gauss_kronrod(const std::function<double(double)>& fn, double a,
                               double b, double rel_tol, double abs_tol = 0.0,
                               int max_depth = 40);

}  // namespace sharpmax
