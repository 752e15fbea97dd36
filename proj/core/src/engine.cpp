#include "haarboost/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <optional>
#include <stdexcept>
#include <thread>

namespace haarboost {

std::vector<FeatureRange> split_range(FeatureRange range, std::size_t parts) {
  if (parts < 1 || parts > range.size()) {
    throw std::invalid_argument("cannot split " + std::to_string(range.size()) + " features into " +
                                std::to_string(parts) + " non-empty parts");
  }
  std::vector<FeatureRange> out;
  out.reserve(parts);
  const std::size_t base = range.size() / parts;
  const std::size_t extra = range.size() % parts;
  std::uint32_t begin = range.begin;
  for (std::size_t i = 0; i < parts; ++i) {
    const auto len = static_cast<std::uint32_t>(base + (i < extra ? 1 : 0));
    out.push_back({begin, begin + len});
    begin += len;
  }
  return out;
}

FeaturePartition partition(std::size_t total, PartitionScheme scheme, std::size_t chunks) {
  if (total == 0) throw std::invalid_argument("partition: no features");
  FeaturePartition p;
  p.scheme = scheme;
  if (scheme == PartitionScheme::ByChunk) {
    p.groups = split_range({0, static_cast<std::uint32_t>(total)}, chunks);
    return p;
  }
  const FeatureTable& table = standard_features();
  if (total > table.size()) throw std::invalid_argument("partition: total exceeds the feature table");
  for (FeatureType t : kFeatureTypes) {
    FeatureRange r = table.type_range(t);
    r.end = std::min<std::uint32_t>(r.end, static_cast<std::uint32_t>(total));
    if (!r.empty()) p.groups.push_back(r);
  }
  return p;
}

WeakClassifier parallel_best(const FeaturePartition& partition, const Dataset& data, const WeightVector& w,
                             std::size_t worker_budget, const FeatureTable& table) {
  const std::size_t groups = partition.groups.size();
  if (groups == 0) throw std::invalid_argument("parallel_best: empty partition");
  const std::size_t workers = std::clamp<std::size_t>(worker_budget, 1, groups);

  std::vector<std::optional<WeakClassifier>> results(groups);
  std::vector<std::exception_ptr> failures(groups);
  std::atomic<std::size_t> next{0};

  auto drain = [&] {
    for (std::size_t g = next.fetch_add(1); g < groups; g = next.fetch_add(1)) {
      try {
        results[g] = best_over_range(partition.groups[g], data, w, table);
      } catch (...) {
        failures[g] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(drain);
  }

  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  WeakClassifier best = *results[0];
  for (std::size_t g = 1; g < groups; ++g) {
    if (better(*results[g], best)) best = *results[g];
  }
  return best;
}

ParallelExecutor::ParallelExecutor(const Dataset& data, FeaturePartition partition, std::size_t worker_budget,
                                   const FeatureTable& table)
    : data_(data), partition_(std::move(partition)), worker_budget_(worker_budget), table_(table) {}

WeakClassifier ParallelExecutor::best(const WeightVector& w, PhaseTiming& timing) {
  const auto start = std::chrono::steady_clock::now();
  WeakClassifier out = parallel_best(partition_, data_, w, worker_budget_, table_);
  timing.scan_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace haarboost
