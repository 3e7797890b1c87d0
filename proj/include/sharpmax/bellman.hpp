#pragma once

#include "sharpmax/special_functions.hpp"

namespace sharpmax {

/// Admissible data (p, f, F, k): 0 < f^p <= F and 0 < k <= 1. The measure k is
/// ignored by the two-variable function.
struct BellmanQuery {
  Exponent p;
  double f;
  double F;
  double k = 1.0;

  BellmanQuery(Exponent p, double f, double F, double k = 1.0);

  /// f^p / F clamped into (0, 1].
  double moment_ratio() const;

  /// True when F = f^p up to rounding, i.e. only constants are admissible.
  bool is_constant_case() const;
};

/// {B in [0, f] : h_k(B) <= F}. Always contains k f.
struct FeasibleInterval {
  double lo;
  double hi;
};

struct ThreeVarResult {
  double value;
  double argmax_b;
};

/// F * omega_p(f^p / F)^p, the supremum of the integral of (M phi)^p.
double bellman_two_var(const BellmanQuery& q);

/// h_k(B) = (f-B)^p / (1-k)^(p-1) + B^p / k^(p-1); requires 0 < k < 1.
double h_k(double b, const BellmanQuery& q);

FeasibleInterval feasible_interval(const BellmanQuery& q);

/// A * omega_p(B^p / (k^(p-1) A))^p with A = F - (f-B)^p / (1-k)^(p-1).
double three_var_objective(double b, const BellmanQuery& q);

/// The supremum of three_var_objective over the feasible interval together
/// with one maximizer. For k = 1 this is the two-variable value at B = f.
///
/// The objective is not assumed unimodal: a uniform scan over the feasible
/// interval picks the best bracket and golden-section search refines it.
ThreeVarResult bellman_three_var(const BellmanQuery& q);

/// Grid size used by the scan stage of bellman_three_var.
inline constexpr int kThreeVarScanPoints = 4096;

}  // namespace sharpmax
