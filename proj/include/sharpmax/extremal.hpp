#pragma once

#include <cstddef>
#include <vector>

#include "sharpmax/bellman.hpp"
#include "sharpmax/report.hpp"
#include "sharpmax/special_functions.hpp"
#include "sharpmax/tree.hpp"

// Near-extremal functions for the Bellman values.
//
// The rearrangement g(t) = a f t^(a-1) has mean f, p-moment
// (a f)^p / (p (a - 1) + 1) and Hardy average g / a. Choosing 1/a = omega_p(f^p/F)
// makes the p-moment equal F and the integral of the Hardy average to the p
// equal F omega_p(f^p/F)^p. Placed on a nested chain of tree elements, the
// maximal function of the block-averaged g is its Hardy average at the chain
// scales, so the two-variable value is approached as the chain gets finer.

namespace sharpmax {

/// Power-law extremizer for mean f and p-moment F on a chain tree with child
/// fractions (1 - r, r) and `depth` levels.
struct ExtremalSpec {
  Exponent p;
  double f;
  double F;
  double a;
  double chain_ratio;
  int depth;
};

/// a = 1 / omega_p(f^p / F).
double power_law_exponent(const Exponent& p, double f, double F);

/// Fills in `a` and validates r in (0, 1), depth >= 1, p (a - 1) + 1 > 0.
ExtremalSpec make_extremal_spec(const Exponent& p, double f, double F,
                                double chain_ratio, int depth);

/// Leaf values of the chain extremizer in chain order: block m = I_m \ I_(m+1)
/// for m < depth gets the average of a f t^(a-1) over (r^(m+1), r^m]; the last
/// leaf I_depth gets the average over (0, r^depth], which keeps the mean exact.
std::vector<double> chain_values(double mean, double a, double r, int depth);

/// The chain extremizer on a fresh chain tree.
TreeFunction build_chain_extremizer(const ExtremalSpec& spec);

struct CompositeResult {
  TreeFunction phi;
  std::vector<std::size_t> k_leaves;  // leaf positions of K
  std::vector<NodeId> blocks;         // the disjoint tree elements forming K
  double k_achieved;
  double a_value;       // A = F - (f - B)^p / (1 - k)^(p-1)
  double target;        // A * omega_p(B^p / (k^(p-1) A))^p
  double lower_bound;   // integral of (M phi)^p over K
  double mean;          // integral of phi
  double moment;        // integral of phi^p
  bool delta_reached;   // lower_bound >= delta * target
};

/// phi = (f - B)/(1 - k) off K and a rescaled chain extremizer with mean B/k
/// and p-moment A/k on each element of K. K is chosen with split_measure on a
/// dyadic scaffold refined towards k.
CompositeResult build_composite(const BellmanQuery& q, double b, double delta,
                                double chain_ratio, int depth);

struct CertifyOptions {
  double epsilon = 0.05;
  double r_max = 0.99;
  int depth_max = 2000;
  double moment_tolerance = 0.01;
};

/// Sandwich certificate for B_p(f, F, k): the upper value V from
/// bellman_three_var against the composite lower bound at the maximizing B,
/// escalating (r, depth) until lower >= (1 - epsilon) V. Also requires the
/// moment drift within tolerance, check_lemma32 on the constructed function,
/// and the lower bound not exceeding the Bellman value at the achieved moments.
/// A report with passed = false means the escalation budget was exhausted.
VerificationReport certify_sharpness(const BellmanQuery& q,
                                     const CertifyOptions& options = {});

}  // namespace sharpmax
