#include <cmath>
#include <random>

#include "doctest.h"
#include "haarboost/error.hpp"
#include "haarboost/model_io.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace haarboost;

TEST_SUITE("model_io") {
  TEST_CASE("save/load reproduces the model and its decisions") {
    const Dataset d = synth(4, 30, 30);
    SequentialExecutor seq(d, {0, 30'000});
    const StrongClassifier sc = train(d, 6, seq).model;
    test::TempDir dir;
    save_model(dir.path() / "m.json", sc);
    const StrongClassifier back = load_model(dir.path() / "m.json");
    REQUIRE(back.rounds.size() == sc.rounds.size());
    for (std::size_t i = 0; i < sc.rounds.size(); ++i) {
      CHECK(back.rounds[i].weak == sc.rounds[i].weak);
      CHECK(back.rounds[i].feature == sc.rounds[i].feature);
      CHECK(back.rounds[i].alpha == sc.rounds[i].alpha);
      CHECK(back.rounds[i].beta == sc.rounds[i].beta);
    }
    CHECK(model_to_json(back) == model_to_json(sc));

    std::mt19937_64 rng(8);
    for (int k = 0; k < 200; ++k) {
      const IntegralImage ii = integral_of(oracle::random_image(rng));
      REQUIRE(classify(back, ii) == classify(sc, ii));
    }
  }

  TEST_CASE("an independent evaluator walking the model file agrees with classify") {
    const auto images = synth_images(4, 25, 25);
    const Dataset d = from_images(images, "synth");
    SequentialExecutor seq(d, {0, 30'000});
    const StrongClassifier sc = train(d, 5, seq).model;
    const auto doc = nlohmann::json::parse(model_to_json(sc));
    for (std::size_t i = 0; i < images.size(); ++i) {
      double vote = 0, total = 0;
      for (const auto& r : doc.at("rounds")) {
        const auto& f = r.at("feature");
        HaarFeature hf{*feature_type_from_string(f.at("ftype").get<std::string>()),
                       {f.at("x").get<int>(), f.at("y").get<int>(), f.at("w").get<int>(), f.at("h").get<int>()},
                       0};
        const double value = static_cast<double>(oracle::feature_value(hf, images[i].image));
        const int p = r.at("polarity").get<int>();
        const double alpha = r.at("alpha").get<double>();
        vote += alpha * ((p * value < p * r.at("theta").get<double>()) ? 1 : 0);
        total += alpha;
      }
      REQUIRE(classify(sc, d[i].x) == (vote >= 0.5 * total ? 1 : 0));
    }
  }

  TEST_CASE("floats survive with 17 significant digits") {
    StrongClassifier sc;
    RoundRecord r;
    r.feature = standard_features()[77];
    r.weak = {77, 0.1 + 0.2, -1, 1.0 / 3.0};
    r.beta = std::nextafter(0.5, 1.0);
    r.alpha = std::log(1.0 / r.beta);
    sc.rounds.push_back(r);
    const std::string text = model_to_json(sc);
    CHECK(text.find("0.30000000000000004") != std::string::npos);
    const StrongClassifier back = model_from_json(text);
    CHECK(back.rounds[0].weak.theta == 0.1 + 0.2);
    CHECK(back.rounds[0].beta == r.beta);
  }

  TEST_CASE("malformed models are rejected") {
    CHECK_THROWS_AS(model_from_json("{"), LoadError);
    CHECK_THROWS_AS(model_from_json(R"({"window":24,"rounds":[]})"), LoadError);
    CHECK_THROWS_AS(model_from_json(
                        R"({"version":1,"window":24,"rounds":[{"feature":{"ftype":"Tilted","x":0,"y":0,"w":2,"h":1,"global_index":0},"theta":0,"polarity":1,"alpha":1,"beta":0.3,"error":0.2}]})"),
                    LoadError);
    CHECK_THROWS_AS(model_from_json(
                        R"({"version":1,"window":24,"rounds":[{"feature":{"ftype":"TwoRectHorizontal","x":23,"y":0,"w":2,"h":1,"global_index":0},"theta":0,"polarity":1,"alpha":1,"beta":0.3,"error":0.2}]})"),
                    LoadError);
  }
}
