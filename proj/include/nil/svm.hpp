#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nil/poly.hpp"

namespace nil {

// Labeled samples in the common-variable space. Class weights multiply the
// box constraint C per side; seeding them with the opposite class size keeps
// unbalanced sets (one side may have a single sample) from being swamped.
struct TrainingSet {
  std::vector<std::vector<double>> pos;  // label +1
  std::vector<std::vector<double>> neg;  // label -1
  double weight_pos = 1.0;
  double weight_neg = 1.0;
};

struct SvmConfig {
  double C = 1e6;        // hard margin approximated by a large box constraint
  double kkt_tol = 1e-4;
  size_t max_passes = 0;  // bound on pair-optimization steps; 0 = 500 * |X|
  std::uint64_t seed = 0; // reserved; training is deterministic by selection rules
};

struct DualSolution {
  std::vector<double> alphas;        // over pos ++ neg ordering
  double b = 0.0;
  std::vector<size_t> support;       // indices with alpha meaningfully > 0
  double margin = 0.0;               // geometric margin of the trained classifier

  double decision(const TrainingSet& ts, const KernelParams& k,
                  std::span<const double> x) const;
};

// Sequential minimal optimization with deterministic working-set selection:
// first index by maximal KKT violation, second by maximal |E_i - E_j|, ties
// to the lowest index. Returns nullopt iff the trained classifier
// misclassifies any training point (inseparable in this feature space).
std::optional<DualSolution> train(const TrainingSet& ts, const KernelParams& k,
                                  const SvmConfig& cfg);

// 2 * min_i |h(x_i)| / ||w||, the full functional margin of the classifier.
double functional_margin(const DualSolution& sol, const TrainingSet& ts,
                         const KernelParams& k);

}  // namespace nil
