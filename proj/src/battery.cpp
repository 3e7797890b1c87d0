#include "sharpmax/battery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "sharpmax/bellman.hpp"
#include "sharpmax/rearrangement.hpp"

namespace sharpmax {
namespace {

constexpr double kExponents[] = {1.5, 2.0, 3.0, 2.5};
constexpr double kBoundTolerance = 1e-9;

std::vector<double> random_fractions(int n, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform(0.05, 1.0);
    total += x;
  }
  for (double& x : w) x /= total;
  // Absorb rounding in the last fraction so that the sum is one.
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) head += w[i];
  w.back() = 1.0 - head;
  return w;
}

void record(std::map<std::string, CheckSummary>& summaries, BatteryResult& out,
            VerificationReport report, std::uint64_t seed) {
  report.seed = seed;
  CheckSummary& s = summaries[report.check];
  if (s.total == 0 || report.margin < s.worst.margin) s.worst = report;
  s.check = report.check;
  ++s.total;
  if (report.passed) {
    ++s.passed;
  } else {
    out.failures.push_back(std::move(report));
  }
}

VerificationReport bound_report(std::string name, double lhs, double rhs,
                                double p) {
  VerificationReport r;
  r.check = std::move(name);
  r.parameters["p"] = p;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.passed = lhs <= rhs + kBoundTolerance * std::max(1.0, rhs);
  return r;
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string to_string(BranchingProfile profile) {
  switch (profile) {
    case BranchingProfile::kDyadic:
      return "dyadic";
    case BranchingProfile::kTernary:
      return "ternary";
    case BranchingProfile::kMixed:
      return "mixed";
  }
  return "unknown";
}

Tree random_tree(BranchingProfile profile, int max_depth, std::size_t max_leaves,
                 Rng& rng) {
  const int depth = rng.integer(1, std::max(1, max_depth));
  Tree::Builder builder;
  std::deque<NodeId> queue{Tree::root()};
  std::size_t leaves = 1;
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    if (builder.node(id).depth >= depth) continue;
    const bool is_root = id == Tree::root();
    std::vector<double> fractions;
    switch (profile) {
      case BranchingProfile::kDyadic:
        fractions = {0.5, 0.5};
        break;
      case BranchingProfile::kTernary:
        if (!is_root && rng.uniform() < 0.3) continue;
        fractions = random_fractions(3, rng);
        break;
      case BranchingProfile::kMixed:
        if (!is_root && rng.uniform() < 0.35) continue;
        fractions = random_fractions(rng.integer(2, 4), rng);
        break;
    }
    if (leaves + fractions.size() - 1 > max_leaves) continue;
    leaves += fractions.size() - 1;
    for (const NodeId c : builder.add_children(id, fractions)) queue.push_back(c);
  }
  return std::move(builder).build();
}

TreeFunction random_function(std::shared_ptr<const Tree> tree, double max_value,
                             Rng& rng) {
  const bool integral_values = rng.uniform() < 0.2;
  std::vector<double> values(tree->leaf_count());
  for (double& v : values) {
    v = rng.uniform(0.0, max_value);
    if (integral_values) v = std::round(v);
  }
  return TreeFunction(std::move(tree), std::move(values));
}

BatteryResult run_battery(const BatteryOptions& options) {
  BatteryResult out;
  std::map<std::string, CheckSummary> summaries;
  constexpr BranchingProfile kProfiles[] = {BranchingProfile::kDyadic,
                                            BranchingProfile::kTernary,
                                            BranchingProfile::kMixed};
  for (int i = 0; i < options.trees; ++i) {
    const std::uint64_t seed = instance_seed(options.seed, static_cast<std::uint64_t>(i));
    Rng rng(seed);
    const std::size_t failures_before = out.failures.size();
    const BranchingProfile profile = kProfiles[i % 3];
    const Exponent p(kExponents[i % 4]);

    auto tree = std::make_shared<const Tree>(
        random_tree(profile, options.max_depth, options.max_leaves, rng));
    const TreeFunction phi = random_function(tree, options.max_value, rng);
    const TreeFunction max_phi = maximal_operator(phi);
    const double top = *std::max_element(max_phi.values().begin(), max_phi.values().end());

    if (top > 0.0) {
      record(summaries, out, check_weak_type(phi, rng.uniform(0.01, 1.2) * top), seed);
    }
    record(summaries, out, check_corollary21(phi, p), seed);
    record(summaries, out, check_lemma31(phi), seed);

    const double f = phi.integral();
    const double F = phi.moment(p.p());
    const double full = max_phi.moment(p.p());
    if (f > 0.0) {
      const double bound = bellman_two_var(BellmanQuery(p, f, std::max(F, std::pow(f, p.p()))));
      record(summaries, out, bound_report("bellman_two_var_bound", full, bound, p.p()), seed);
    }

    for (int j = 0; j < options.k_sets_per_tree; ++j) {
      const double density = rng.uniform(0.05, 0.95);
      std::vector<std::size_t> k_leaves;
      for (std::size_t leaf = 0; leaf < tree->leaf_count(); ++leaf) {
        if (rng.uniform() < density) k_leaves.push_back(leaf);
      }
      if (k_leaves.empty()) {
        k_leaves.push_back(static_cast<std::size_t>(
            rng.integer(0, static_cast<int>(tree->leaf_count()) - 1)));
      }
      const VerificationReport lemma = check_lemma32(phi, k_leaves, p);
      const double k = lemma.parameters.at("k");
      record(summaries, out, lemma, seed);
      record(summaries, out, check_conditions_i_iii(phi, k, p), seed);

      if (j == 0 && f > 0.0) {
        const BellmanQuery q(p, f, std::max(F, std::pow(f, p.p())), k);
        record(summaries, out,
               bound_report("bellman_three_var_bound", lemma.lhs,
                            bellman_three_var(q).value, p.p()),
               seed);
      }
    }
    ++out.trees;
    if (out.failures.size() == failures_before) ++out.trees_passed;
  }
  for (auto& [name, summary] : summaries) out.checks.push_back(std::move(summary));
  return out;
}

}  // namespace sharpmax
