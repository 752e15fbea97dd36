#include <cmath>
#include <random>

#include "doctest.h"
#include "haarboost/boosting.hpp"
#include "haarboost/error.hpp"
#include "support/oracles.hpp"

using namespace haarboost;

namespace {

FeatureRange all_features() { return {0, static_cast<std::uint32_t>(standard_features().size())}; }

std::vector<std::uint8_t> labels_of(const Dataset& d) {
  std::vector<std::uint8_t> out;
  for (const auto& e : d.examples()) out.push_back(e.y);
  return out;
}

}  // namespace

TEST_SUITE("boosting") {
  TEST_CASE("init_weights") {
    auto w = init_weights({2, 2});
    for (double x : w.w) CHECK(x == 0.25);
    CHECK(w.round == 1);
    w = init_weights({1, 3});
    CHECK(w.w[0] == 0.5);
    CHECK(w.w[1] == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(init_weights({4916, 7960}).w[0] == 1.0 / 9832);
    CHECK_THROWS_AS(init_weights({0, 3}), TrainingError);
  }

  TEST_CASE("normalize") {
    const auto w = normalize(WeightVector{{1, 1, 2}, 1});
    CHECK(w.w == std::vector<double>{0.25, 0.25, 0.5});
    const auto again = normalize(w);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(again.w[i] - w.w[i]) <= std::nextafter(w.w[i], 1.0) - w.w[i]);
    CHECK_THROWS_WITH_AS(normalize(WeightVector{{0.0, 0.0}, 1}), doctest::Contains("weight collapse"), TrainingError);
  }

  TEST_CASE("normalize sums to one over random vectors") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed);
      WeightVector w;
      const std::size_t n = 1 + rng() % 500;
      for (std::size_t i = 0; i < n; ++i) w.w.push_back(1e-6 + static_cast<double>(rng() % 1'000'000) / 1e3);
      double sum = 0;
      for (double x : normalize(w).w) sum += x;
      REQUIRE(std::abs(sum - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("train_stump: separable and two-point cases") {
    const std::vector<double> values{2, 3, 0, 1};
    const std::vector<std::uint8_t> labels{1, 1, 0, 0};
    const std::vector<double> w(4, 0.25);
    const WeakClassifier s = train_stump(values, labels, w);
    CHECK(s.error == 0.0);
    CHECK(s.theta == 1.5);
    CHECK(s.polarity == -1);

    const WeakClassifier t = train_stump(std::vector<double>{0, 1}, std::vector<std::uint8_t>{1, 0},
                                         std::vector<double>{0.5, 0.5});
    CHECK(t.error == 0.0);
    CHECK(t.polarity == 1);
    CHECK(t.theta == 0.5);
  }

  TEST_CASE("train_stump: identical values give the better constant classifier") {
    const std::vector<double> values(5, 3.0);
    const std::vector<std::uint8_t> labels{1, 0, 0, 0, 1};
    const std::vector<double> w{0.1, 0.2, 0.3, 0.1, 0.3};
    const WeakClassifier s = train_stump(values, labels, w);
    CHECK(s.error == doctest::Approx(0.4));  // all-negative: loses the positives' 0.4
    CHECK(s.theta < 3.0);
    for (double v : values) CHECK(s.classify(v) == 0);
  }

  TEST_CASE("train_stump equals the O(n^2) oracle on random weighted instances") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> values(64);
      std::vector<std::uint8_t> labels(64);
      std::vector<double> weights(64);
      const int spread = 1 + static_cast<int>(rng() % 40);  // small spreads force duplicate values
      for (int i = 0; i < 64; ++i) {
        values[i] = static_cast<double>(static_cast<int>(rng() % static_cast<unsigned>(2 * spread)) - spread);
        labels[i] = static_cast<std::uint8_t>(i < 32 ? 1 : rng() % 2);
        weights[i] = static_cast<double>(1 + rng() % 100000) / 100000.0;
      }
      const auto expected = oracle::stump(values, labels, weights);
      const WeakClassifier got = train_stump(values, labels, weights);
      REQUIRE(got.error == expected.error);
      REQUIRE(oracle::predict(values, got.theta, got.polarity) == expected.predictions);
      REQUIRE(got.theta == expected.theta);
      REQUIRE(got.polarity == expected.polarity);
    }
  }

  TEST_CASE("train_stump preconditions") {
    CHECK_THROWS(train_stump(std::vector<double>{1}, std::vector<std::uint8_t>{1}, std::vector<double>{1}));
    CHECK_THROWS(train_stump(std::vector<double>{1, 2}, std::vector<std::uint8_t>{1, 1}, std::vector<double>{1, 1}));
  }

  TEST_CASE("best_over_range: singleton and tie-break") {
    const Dataset d = synth(5, 20, 20);
    const WeightVector w = normalize(init_weights(d.stats()));
    const auto& table = standard_features();
    const WeakClassifier single = best_over_range({1234, 1235}, d, w);
    std::vector<double> values;
    for (auto v : feature_values(table[1234], d)) values.push_back(static_cast<double>(v));
    WeakClassifier direct = train_stump(values, labels_of(d), w.w);
    direct.feature_index = 1234;
    CHECK(single == direct);

    // On constant images every feature is constant, so every error ties and the lowest index wins.
    std::vector<LabeledImage> flat;
    for (int i = 0; i < 4; ++i) flat.push_back({Image(24, 24, 9), static_cast<std::uint8_t>(i < 2)});
    const Dataset c = from_images(flat, "flat");
    const WeakClassifier tie = best_over_range({500, 900}, c, normalize(init_weights(c.stats())));
    CHECK(tie.feature_index == 500);
    CHECK(tie.error == 0.5);
  }

  TEST_CASE("best_over_range matches an independent full scan") {
    const auto images = synth_images(7, 50, 50);
    const Dataset d = from_images(images, "synth");
    std::vector<haarboost::Image> pixels;
    std::vector<std::uint8_t> labels;
    for (const auto& li : images) {
      pixels.push_back(li.image);
      labels.push_back(li.label);
    }
    const WeightVector w = normalize(init_weights(d.stats()));
    const auto fs = enumerate(24);
    const auto expected = oracle::full_scan(pixels, labels, w.w, fs);
    const WeakClassifier got = best_over_range(all_features(), d, w);
    CHECK(got.error == expected.first);
    CHECK(got.feature_index == expected.second);
  }

  TEST_CASE("update_weights") {
    const Dataset d = synth(5, 10, 10);
    const WeightVector w = normalize(init_weights(d.stats()));
    WeakClassifier weak = best_over_range({0, 3000}, d, w);
    weak.error = 0.25;
    const WeightVector u = update_weights(w, weak, d);
    const auto values = feature_values(standard_features()[weak.feature_index], d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const bool correct = weak.classify(static_cast<double>(values[i])) == d[i].y;
      CHECK(u.w[i] == (correct ? w.w[i] * (0.25 / 0.75) : w.w[i]));
    }
    CHECK(beta_for(0.0) == 1e-10 / (1 - 1e-10));
    weak.error = 0.5;
    CHECK_THROWS_WITH_AS(update_weights(w, weak, d), doctest::Contains("no better than chance"), TrainingError);
  }

  TEST_CASE("post-update equilibrium: chosen stump sits at 0.5") {
    const Dataset d = synth(9, 60, 60);
    WeightVector w = normalize(init_weights(d.stats()));
    for (int t = 0; t < 4; ++t) {
      const WeakClassifier weak = best_over_range({0, 20000}, d, w);
      REQUIRE(weak.error > 1e-10);
      w = normalize(update_weights(w, weak, d));
      CHECK(std::abs(weighted_error(weak, d, w) - 0.5) <= 1e-9);
    }
  }

  TEST_CASE("T=1 on separable data gives zero training error") {
    const Dataset d = synth(7, 30, 30, SynthOptions{64, 96});
    SequentialExecutor seq(d, all_features());
    const TrainResult r = train(d, 1, seq);
    CHECK(r.model.rounds.size() == 1);
    CHECK(training_error(r.model, d) == 0.0);
    CHECK(r.timings.size() == 1);
  }

  TEST_CASE("training error is non-increasing at T in {1,3,5,10} and below the product bound") {
    const Dataset d = synth(7, 100, 100);
    SequentialExecutor seq(d, all_features());
    const TrainResult r = train(d, 10, seq);
    double prev = 1.0;
    for (int t : {1, 3, 5, 10}) {
      StrongClassifier prefix;
      prefix.rounds.assign(r.model.rounds.begin(), r.model.rounds.begin() + t);
      const double err = training_error(prefix, d);
      double bound = 1.0;
      for (int k = 0; k < t; ++k) {
        const double e = r.model.rounds[k].weak.error;
        bound *= 2.0 * std::sqrt(e * (1.0 - e));
      }
      CHECK(err <= prev);
      CHECK(err <= bound + 1e-9);
      prev = err;
    }
    for (const auto& rec : r.model.rounds) CHECK(rec.weak.error < 0.5);
  }

  TEST_CASE("classify") {
    const Dataset d = synth(3, 20, 20);
    SequentialExecutor seq(d, {0, 5000});
    const TrainResult one = train(d, 1, seq);
    const auto& rec = one.model.rounds[0];
    for (const auto& e : d.examples()) {
      CHECK(classify(one.model, e.x) == rec.weak.classify(static_cast<double>(evaluate(rec.feature, e.x))));
    }

    // Every round votes 1 on this image -> 1; every round votes 0 -> 0.
    StrongClassifier sc;
    RoundRecord always{{0, 1e9, 1, 0.1}, standard_features()[0], 0.2, 1.6};
    RoundRecord never{{0, -1e9, 1, 0.1}, standard_features()[0], 0.2, 1.6};
    sc.rounds = {always, always};
    CHECK(classify(sc, d[0].x) == 1);
    sc.rounds = {never, never};
    CHECK(classify(sc, d[0].x) == 0);
    // Vote exactly at half the total is a positive.
    sc.rounds = {always, never};
    CHECK(classify(sc, d[0].x) == 1);
    CHECK_THROWS(classify(sc, integral_of(Image(23, 24))));
  }

  TEST_CASE("train rejects zero rounds and tags failures with the round") {
    const Dataset d = synth(3, 5, 5);
    SequentialExecutor seq(d, {0, 10});
    CHECK_THROWS_AS(train(d, 0, seq), std::invalid_argument);

    struct Chance final : RoundExecutor {
      WeakClassifier best(const WeightVector&, PhaseTiming&) override { return {0, 0.0, 1, 0.5}; }
      std::string name() const override { return "chance"; }
    } chance;
    CHECK_THROWS_WITH_AS(train(d, 3, chance), doctest::Contains("round 1:"), TrainingError);
  }
}
