#include "doctest.h"
#include "haarboost/engine.hpp"
#include "haarboost/model_io.hpp"

using namespace haarboost;

namespace {

std::vector<std::uint32_t> sizes(const FeaturePartition& p) {
  std::vector<std::uint32_t> out;
  for (const auto& g : p.groups) out.push_back(g.size());
  return out;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("partition by type") {
    CHECK(sizes(partition(162'336, PartitionScheme::ByType)) ==
          std::vector<std::uint32_t>{27'600, 27'600, 43'200, 43'200, 20'736});
    CHECK(sizes(partition(10'000, PartitionScheme::ByType)) == std::vector<std::uint32_t>{10'000});
  }

  TEST_CASE("partition by chunk") {
    CHECK(sizes(partition(10, PartitionScheme::ByChunk, 3)) == std::vector<std::uint32_t>{4, 3, 3});
    CHECK(sizes(partition(10, PartitionScheme::ByChunk, 10)) == std::vector<std::uint32_t>(10, 1));
    const auto p = partition(10, PartitionScheme::ByChunk, 3);
    CHECK(p.groups.front().begin == 0);
    CHECK(p.groups.back().end == 10);
    for (std::size_t i = 1; i < p.groups.size(); ++i) CHECK(p.groups[i].begin == p.groups[i - 1].end);
    CHECK_THROWS(partition(10, PartitionScheme::ByChunk, 0));
    CHECK_THROWS(partition(10, PartitionScheme::ByChunk, 11));
    CHECK_THROWS(partition(0, PartitionScheme::ByType));
  }

  TEST_CASE("split_range at an offset") {
    const auto parts = split_range({55'200, 98'400}, 5);
    REQUIRE(parts.size() == 5);
    for (const auto& r : parts) CHECK(r.size() == 8'640);
    CHECK(parts[0].begin == 55'200);
    CHECK(parts[4].end == 98'400);
  }

  TEST_CASE("parallel_best is independent of budget and partition") {
    const Dataset d = synth(7, 50, 50);
    const WeightVector w = normalize(init_weights(d.stats()));
    const auto total = standard_features().size();
    const WeakClassifier seq = best_over_range({0, static_cast<std::uint32_t>(total)}, d, w);
    for (std::size_t budget : {1, 2, 5}) {
      CHECK(parallel_best(partition(total, PartitionScheme::ByType), d, w, budget) == seq);
    }
    CHECK(parallel_best(partition(total, PartitionScheme::ByChunk, 37), d, w, 3) == seq);
  }

  TEST_CASE("tied groups merge to the lower feature index") {
    std::vector<LabeledImage> flat;
    for (int i = 0; i < 4; ++i) flat.push_back({Image(24, 24, 1), static_cast<std::uint8_t>(i % 2)});
    const Dataset c = from_images({flat[1], flat[3], flat[0], flat[2]}, "flat");
    const WeightVector w = normalize(init_weights(c.stats()));
    FeaturePartition p{PartitionScheme::ByChunk, {{900, 1000}, {100, 200}, {500, 600}}};
    const WeakClassifier best = parallel_best(p, c, w, 3);
    CHECK(best.feature_index == 100);
  }

  TEST_CASE("group failures propagate") {
    const Dataset d = synth(7, 5, 5);
    const WeightVector w = normalize(init_weights(d.stats()));
    FeaturePartition p{PartitionScheme::ByChunk, {{0, 10}, {10, 999'999}}};
    CHECK_THROWS_AS(parallel_best(p, d, w, 2), std::invalid_argument);
  }

  TEST_CASE("sequential and parallel training give byte-identical models") {
    const Dataset d = synth(7, 40, 40);
    const std::uint32_t limit = 20'000;
    SequentialExecutor seq(d, {0, limit});
    const std::string expected = model_to_json(train(d, 5, seq).model);
    for (std::size_t budget : {1, 2, 4}) {
      ParallelExecutor par(d, partition(limit, PartitionScheme::ByChunk, 7), budget);
      CHECK(model_to_json(train(d, 5, par).model) == expected);
    }
  }
}
