#include "sharpmax/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "sharpmax/rearrangement.hpp"

namespace sharpmax {
namespace {

// Relative p-moment mass the truncated power-law head may carry when the
// escalation picks a depth.
constexpr double kTailMass = 1e-4;
constexpr double kRatioSchedule[] = {0.9, 0.95, 0.97, 0.98, 0.99};
constexpr double kSandwichTolerance = 1e-9;

// Adds a chain of `depth` levels below `top` and writes the chain values into
// `value_by_node`, indexed by node id.
void grow_chain(Tree::Builder& builder, NodeId top, double mean, double a,
                double r, int depth, std::vector<double>& value_by_node) {
  const std::vector<double> values = chain_values(mean, a, r, depth);
  const double fractions[] = {1.0 - r, r};
  NodeId cur = top;
  for (int m = 0; m < depth; ++m) {
    const auto ids = builder.add_children(cur, fractions);
    value_by_node.resize(builder.size(), 0.0);
    value_by_node[ids[0]] = values[m];
    cur = ids[1];
  }
  value_by_node.resize(builder.size(), 0.0);
  value_by_node[cur] = values[depth];
}

// Dyadic tree on (0, 1] whose only refined elements are those containing k in
// their interior. Terminates because k has a finite binary expansion.
Tree dyadic_scaffold(double k) {
  Tree::Builder builder;
  const double halves[] = {0.5, 0.5};
  NodeId cur = Tree::root();
  double lo = 0.0;
  double width = 1.0;
  while (k > lo && k < lo + width) {
    const auto ids = builder.add_children(cur, halves);
    width *= 0.5;
    if (k == lo + width) break;
    if (k < lo + width) {
      cur = ids[0];
    } else {
      cur = ids[1];
      lo += width;
    }
  }
  return std::move(builder).build();
}

}  // namespace

double power_law_exponent(const Exponent& p, double f, double F) {
  const BellmanQuery q(p, f, F);
  if (q.is_constant_case()) return 1.0;
  return 1.0 / omega_p(q.moment_ratio(), p);
}

ExtremalSpec make_extremal_spec(const Exponent& p, double f, double F,
                                double chain_ratio, int depth) {
  if (!(chain_ratio > 0.0 && chain_ratio < 1.0)) {
    throw std::invalid_argument("chain ratio must lie in (0, 1)");
  }
  if (depth < 1) throw std::invalid_argument("chain depth must be positive");
  const double a = power_law_exponent(p, f, F);
  if (!(p.p() * (a - 1.0) + 1.0 > 0.0)) {
    throw std::domain_error("power law is not p-integrable");
  }
  return ExtremalSpec{p, f, F, a, chain_ratio, depth};
}

std::vector<double> chain_values(double mean, double a, double r, int depth) {
  const double log_r = std::log(r);
  // Average of a t^(a-1) over (r^(m+1), r^m] is r^(m(a-1)) (1 - r^a) / (1 - r).
  const double block_factor = std::expm1(a * log_r) / std::expm1(log_r);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(depth) + 1);
  for (int m = 0; m < depth; ++m) {
    values.push_back(mean * std::exp(m * (a - 1.0) * log_r) * block_factor);
  }
  values.push_back(mean * std::exp(depth * (a - 1.0) * log_r));
  return values;
}

TreeFunction build_chain_extremizer(const ExtremalSpec& spec) {
  auto tree = std::make_shared<const Tree>(
      build_tree(chain_spec(spec.chain_ratio, spec.depth)));
  return TreeFunction(tree, chain_values(spec.f, spec.a, spec.chain_ratio,
                                         spec.depth));
}

CompositeResult build_composite(const BellmanQuery& q, double b, double delta,
                                double chain_ratio, int depth) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double e = q.p.p();
  const double k = q.k;
  double a_value = q.F;
  double target = 0.0;
  if (k < 1.0) {
    if (!(b > 0.0 && b <= q.f)) {
      std::ostringstream msg;
      msg << "build_composite: B=" << b << " must lie in (0, f]";
      throw std::domain_error(msg.str());
    }
    a_value = q.F - std::pow(q.f - b, e) / std::pow(1.0 - k, e - 1.0);
    target = three_var_objective(b, q);
  } else {
    if (b != q.f) throw std::domain_error("build_composite: k = 1 needs B = f");
    target = bellman_two_var(q);
  }
  if (!(a_value > 0.0)) throw std::domain_error("build_composite: A must be positive");

  // Per-unit-measure data of every K block.
  const double block_mean = b / k;
  const double block_moment = a_value / k;
  const ExtremalSpec block = make_extremal_spec(
      q.p, block_mean, std::max(block_moment, std::pow(block_mean, e)),
      chain_ratio, depth);
  const double outside = k < 1.0 ? (q.f - b) / (1.0 - k) : 0.0;

  const Tree scaffold = dyadic_scaffold(k);
  const MeasureSplit split = split_measure(scaffold, Tree::root(), k, 0.0);

  Tree::Builder builder(scaffold);
  std::vector<double> value_by_node(builder.size(), outside);
  for (const NodeId id : split.nodes) {
    if (block.a == 1.0) {
      value_by_node[id] = block_mean;  // constant block, no refinement needed
    } else {
      grow_chain(builder, id, block_mean, block.a, chain_ratio, depth, value_by_node);
    }
  }
  auto tree = std::make_shared<const Tree>(std::move(builder).build());

  std::vector<double> values;
  values.reserve(tree->leaf_count());
  for (const NodeId leaf : tree->leaves()) values.push_back(value_by_node[leaf]);
  TreeFunction phi(tree, std::move(values));

  std::vector<std::size_t> k_leaves;
  for (const NodeId id : split.nodes) {
    const auto under = tree->leaves_under(id);
    k_leaves.insert(k_leaves.end(), under.begin(), under.end());
  }
  std::sort(k_leaves.begin(), k_leaves.end());

  const TreeFunction max_phi = maximal_operator(phi);
  double lower = 0.0;
  for (const std::size_t leaf : k_leaves) {
    lower += std::pow(max_phi.value(leaf), e) * tree->leaf_measure(leaf);
  }

  CompositeResult out{std::move(phi), std::move(k_leaves), split.nodes,
                      split.achieved, a_value, target, lower, 0.0, 0.0, false};
  out.mean = out.phi.integral();
  out.moment = out.phi.moment(e);
  out.delta_reached = lower >= delta * target;
  return out;
}

VerificationReport certify_sharpness(const BellmanQuery& q,
                                     const CertifyOptions& options) {
  const double e = q.p.p();
  const ThreeVarResult best = bellman_three_var(q);
  const double upper = best.value;
  const double two_var = bellman_two_var(q);

  double b = best.argmax_b;
  if (q.k < 1.0 && b <= 0.0) {
    // The supremum at B = 0 is not attained; step into the feasible interval.
    const FeasibleInterval range = feasible_interval(q);
    b = range.lo + 1e-9 * (range.hi - range.lo);
  }

  // Block exponent decides how slowly the p-moment of the power law converges.
  double block_s = 1.0;
  if (!q.is_constant_case()) {
    const double block_mean = b / q.k;
    const double block_moment =
        q.k < 1.0 ? (q.F - std::pow(q.f - b, e) / std::pow(1.0 - q.k, e - 1.0)) / q.k
                  : q.F;
    const double a = power_law_exponent(q.p, block_mean,
                                        std::max(block_moment, std::pow(block_mean, e)));
    block_s = e * (a - 1.0) + 1.0;
  }

  VerificationReport report;
  report.check = "certify_sharpness";
  report.parameters = {{"p", e}, {"f", q.f}, {"F", q.F}, {"k", q.k},
                       {"epsilon", options.epsilon}};
  report.rhs = upper;
  report.details["argmax_B"] = b;
  report.details["two_var"] = two_var;

  int steps = 0;
  for (const double r : kRatioSchedule) {
    if (r > options.r_max) break;
    const double needed = std::ceil(std::log(kTailMass) / (block_s * std::log(r)));
    const int depth = static_cast<int>(
        std::clamp(needed, 1.0, static_cast<double>(options.depth_max)));
    ++steps;

    const CompositeResult c =
        build_composite(q, b, 1.0 - options.epsilon, r, depth);
    const double ratio = upper > 0.0 ? c.lower_bound / upper : 1.0;
    const double mean_drift = std::abs(c.mean - q.f) / q.f;
    const double moment_drift = std::abs(c.moment - q.F) / q.F;
    const VerificationReport lemma = check_lemma32(c.phi, c.k_leaves, q.p);

    const BellmanQuery achieved(q.p, c.mean, std::max(c.moment, std::pow(c.mean, e)),
                                std::min(c.k_achieved, 1.0));
    const double upper_achieved = bellman_three_var(achieved).value;
    const bool sandwich =
        c.lower_bound <= upper_achieved + kSandwichTolerance * std::max(1.0, upper_achieved) &&
        upper <= two_var + kSandwichTolerance * std::max(1.0, two_var);

    report.lhs = c.lower_bound;
    report.margin = ratio - (1.0 - options.epsilon);
    report.details["ratio"] = ratio;
    report.details["chain_ratio"] = r;
    report.details["depth"] = depth;
    report.details["k_achieved"] = c.k_achieved;
    report.details["mean_drift"] = mean_drift;
    report.details["moment_drift"] = moment_drift;
    report.details["lemma32_margin"] = lemma.margin;
    report.details["upper_at_achieved_moments"] = upper_achieved;
    report.details["escalation_steps"] = steps;
    report.passed = c.delta_reached && mean_drift <= options.moment_tolerance &&
                    moment_drift <= options.moment_tolerance && lemma.passed &&
                    sandwich;
    if (report.passed) break;
  }
  if (steps == 0) {
    throw std::invalid_argument("certify_sharpness: r_max admits no escalation step");
  }
  return report;
}

}  // namespace sharpmax
