#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sharpmax/report.hpp"
#include "sharpmax/tree.hpp"

// Seeded randomized batteries for the maximal-operator inequalities.

namespace sharpmax {

/// 64-bit Mersenne twister with a distribution-free uniform draw, so a seed
/// reproduces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Seed for instance `index` of a battery seeded with `seed`.
std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index);

enum class BranchingProfile {
  kDyadic,   // full binary tree, halves
  kTernary,  // three children with random fractions, random pruning
  kMixed,    // two to four children with random fractions, random pruning
};

std::string to_string(BranchingProfile profile);

/// Random tree of depth at most `max_depth` with at most about `max_leaves`
/// leaves.
Tree random_tree(BranchingProfile profile, int max_depth, std::size_t max_leaves,
                 Rng& rng);

/// Values i.i.d. uniform on [0, max_value]; with probability 1/5 they are
/// rounded to integers so that ties occur.
TreeFunction random_function(std::shared_ptr<const Tree> tree, double max_value,
                             Rng& rng);

struct BatteryOptions {
  std::uint64_t seed = 42;
  int trees = 1000;
  int max_depth = 12;
  std::size_t max_leaves = 4096;
  int k_sets_per_tree = 10;
  double max_value = 10.0;
};

struct CheckSummary {
  std::string check;
  int total = 0;
  int passed = 0;
  VerificationReport worst;  // smallest margin seen
};

struct BatteryResult {
  std::vector<CheckSummary> checks;
  std::vector<VerificationReport> failures;
  int trees = 0;
  int trees_passed = 0;  // trees on which every check passed

  bool all_passed() const noexcept { return failures.empty(); }
};

/// Per tree: check_weak_type at one random level, check_corollary21,
/// check_lemma31, check_lemma32 and check_conditions_i_iii on
/// `k_sets_per_tree` random leaf unions, plus the two- and three-variable
/// Bellman bounds. Profiles cycle dyadic, ternary, mixed; p cycles
/// 1.5, 2, 3, 2.5.
BatteryResult run_battery(const BatteryOptions& options);

}  // namespace sharpmax
