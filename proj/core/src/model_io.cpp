#include "haarboost/model_io.hpp"

#include <fstream>
#include <iterator>

#include "exact_json.hpp"
#include "haarboost/error.hpp"
#include "model_json.hpp"

namespace haarboost {

using nlohmann::json;

namespace detail {

json model_document(const StrongClassifier& sc) {
  json rounds = json::array();
  for (const auto& r : sc.rounds) {
    const HaarFeature& f = r.feature;
    json feature = {{"ftype", std::string(to_string(f.type))},
                    {"x", f.bounds.x},
                    {"y", f.bounds.y},
                    {"w", f.bounds.w},
                    {"h", f.bounds.h},
                    {"global_index", f.global_index}};
    rounds.push_back({{"feature", std::move(feature)},
                      {"theta", r.weak.theta},
                      {"polarity", r.weak.polarity},
                      {"alpha", r.alpha},
                      {"beta", r.beta},
                      {"error", r.weak.error}});
  }
  return json{{"version", kModelVersion}, {"window", sc.window}, {"rounds", std::move(rounds)}};
}

StrongClassifier model_from_document(const json& doc) {
  try {
    if (!doc.is_object()) throw LoadError("model: expected a JSON object");
    if (!doc.contains("version")) throw LoadError("model: missing version field");
    if (doc.at("version").get<int>() != kModelVersion) throw LoadError("model: unsupported version");
    StrongClassifier sc;
    sc.window = doc.at("window").get<int>();
    if (sc.window < 3) throw LoadError("model: window must be at least 3");
    for (const json& r : doc.at("rounds")) {
      const json& jf = r.at("feature");
      RoundRecord rec;
      const auto type = feature_type_from_string(jf.at("ftype").get<std::string>());
      if (!type) throw LoadError("model: unknown feature type " + jf.at("ftype").dump());
      rec.feature.type = *type;
      rec.feature.bounds = Rect{jf.at("x").get<int>(), jf.at("y").get<int>(), jf.at("w").get<int>(),
                                jf.at("h").get<int>()};
      rec.feature.global_index = jf.at("global_index").get<std::uint32_t>();
      if (!rect_in_bounds(rec.feature.bounds, sc.window, sc.window) ||
          rec.feature.bounds.w % cells_x(*type) != 0 || rec.feature.bounds.h % cells_y(*type) != 0) {
        throw LoadError("model: feature " + std::to_string(rec.feature.global_index) + " has invalid bounds");
      }
      rec.weak.feature_index = rec.feature.global_index;
      rec.weak.theta = r.at("theta").get<double>();
      rec.weak.polarity = r.at("polarity").get<int>();
      if (rec.weak.polarity != 1 && rec.weak.polarity != -1) throw LoadError("model: polarity must be +1 or -1");
      rec.weak.error = r.at("error").get<double>();
      rec.alpha = r.at("alpha").get<double>();
      rec.beta = r.at("beta").get<double>();
      sc.rounds.push_back(rec);
    }
    return sc;
  } catch (const json::exception& e) {
    throw LoadError(std::string("model: ") + e.what());
  }
}

}  // namespace detail

std::string model_to_json(const StrongClassifier& sc) {
  return detail::dump_exact(detail::model_document(sc)) + "\n";
}

StrongClassifier model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(std::string("model: ") + e.what());
  }
  return detail::model_from_document(doc);
}

void save_model(const std::filesystem::path& path, const StrongClassifier& sc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write model");
  out << model_to_json(sc);
  if (!out) throw Error(path.string() + ": model write failed");
}

StrongClassifier load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string() + ": cannot open model");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return model_from_json(text);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace haarboost
