#pragma once

// Internal sort-and-scan kernel shared by train_stump and best_over_range.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "haarboost/boosting.hpp"

namespace haarboost::detail {

/// Scratch buffers reused across features within one scan.
struct StumpScratch {
  std::vector<double> values;        // by example index
  std::vector<std::uint32_t> order;  // example indices sorted by (value, index)
  std::vector<std::int64_t> keys;
  std::vector<std::uint32_t> near_best;
};

/// Fits the stump given values and their sorted order. Returns nullopt without an exact fit
/// when the best prefix-sum error already exceeds prune_above by more than rounding slack,
/// since such a feature cannot win the (error, index) reduction.
std::optional<WeakClassifier> fit_sorted(StumpScratch& s, std::span<const std::uint8_t> labels,
                                         std::span<const double> weights,
                                         double prune_above = std::numeric_limits<double>::infinity());

}  // namespace haarboost::detail
