#pragma once

#include <cstddef>
#include <vector>

#include "haarboost/boosting.hpp"
#include "haarboost/features.hpp"

namespace haarboost {

enum class PartitionScheme { ByType, ByChunk };

struct FeaturePartition {
  PartitionScheme scheme = PartitionScheme::ByChunk;
  std::vector<FeatureRange> groups;
};

/// ByType: the five type ranges of the standard table, clipped to [0, total) with empty groups
/// dropped. ByChunk: `chunks` contiguous ranges, sizes differing by at most one, larger first.
/// Throws std::invalid_argument for total == 0 or chunks outside [1, total].
FeaturePartition partition(std::size_t total, PartitionScheme scheme, std::size_t chunks = 0);

/// Balanced contiguous split of an arbitrary range (the ByChunk rule applied at an offset).
std::vector<FeatureRange> split_range(FeatureRange range, std::size_t parts);

/// Scans every group with best_over_range on up to `worker_budget` threads, then merges the
/// per-group winners by (error, feature_index) after all groups finish. The result does not
/// depend on the partition, the budget, or completion order. If groups throw, the exception of
/// the lowest-numbered failing group is rethrown.
WeakClassifier parallel_best(const FeaturePartition& partition, const Dataset& data, const WeightVector& w,
                             std::size_t worker_budget, const FeatureTable& table = standard_features());

class ParallelExecutor final : public RoundExecutor {
 public:
  ParallelExecutor(const Dataset& data, FeaturePartition partition, std::size_t worker_budget,
                   const FeatureTable& table = standard_features());

  WeakClassifier best(const WeightVector& w, PhaseTiming& timing) override;
  std::string name() const override { return "par"; }

 private:
  const Dataset& data_;
  FeaturePartition partition_;
  std::size_t worker_budget_;
  const FeatureTable& table_;
};

}  // namespace haarboost
