#include "haarboost/wire.hpp"

#include <charconv>

#include "exact_json.hpp"
#include "haarboost/error.hpp"
#include "model_json.hpp"

namespace haarboost {

using nlohmann::json;

std::string_view to_string(RoleKind r) {
  switch (r) {
    case RoleKind::Master: return "master";
    case RoleKind::SubMaster: return "submaster";
    case RoleKind::Worker: return "worker";
  }
  return "?";
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

RoleKind role_from(const std::string& s) {
  for (RoleKind r : {RoleKind::Master, RoleKind::SubMaster, RoleKind::Worker}) {
    if (to_string(r) == s) return r;
  }
  throw ProtocolError("HELLO: unknown role \"" + s + "\"");
}

std::uint64_t hash_from(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || p != s.data() + s.size() || s.size() != 16) {
    throw ProtocolError("ASSIGN: dataset_hash must be 16 hex digits");
  }
  return v;
}

}  // namespace

std::string_view message_type(const ClusterMessage& m) {
  return std::visit(Overloaded{
                        [](const HelloMsg&) { return std::string_view("HELLO"); },
                        [](const AssignMsg&) { return std::string_view("ASSIGN"); },
                        [](const WeightsMsg&) { return std::string_view("WEIGHTS"); },
                        [](const BestMsg&) { return std::string_view("BEST"); },
                        [](const ModelMsg&) { return std::string_view("MODEL"); },
                        [](const ErrorMsg&) { return std::string_view("ERROR"); },
                    },
                    m);
}

std::string encode(const ClusterMessage& m) {
  json j = std::visit(
      Overloaded{
          [](const HelloMsg& h) {
            return json{{"type", "HELLO"}, {"role", std::string(to_string(h.role))}, {"node", h.node}};
          },
          [](const AssignMsg& a) {
            return json{{"type", "ASSIGN"},
                        {"begin", a.range.begin},
                        {"end", a.range.end},
                        {"dataset_hash", hash_hex(a.dataset_hash)}};
          },
          [](const WeightsMsg& w) {
            json arr = json::array();
            for (double x : w.weights) arr.push_back(x);
            return json{{"type", "WEIGHTS"}, {"round", w.round}, {"weights", std::move(arr)}};
          },
          [](const BestMsg& b) {
            return json{{"type", "BEST"},
                        {"round", b.round},
                        {"feature_index", b.weak.feature_index},
                        {"theta", b.weak.theta},
                        {"polarity", b.weak.polarity},
                        {"error", b.weak.error}};
          },
          [](const ModelMsg& mm) { return json{{"type", "MODEL"}, {"model", detail::model_document(mm.model)}}; },
          [](const ErrorMsg& e) { return json{{"type", "ERROR"}, {"node", e.node}, {"message", e.message}}; },
      },
      m);
  return detail::dump_exact(j);
}

ClusterMessage decode(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ProtocolError("message without string \"type\" field");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    auto as_double = [](const json& v, const char* what) {
      if (!v.is_number()) throw ProtocolError(std::string(what) + " must be a number");
      return v.get<double>();
    };
    auto as_uint = [](const json& v, const char* what) {
      if (!v.is_number_unsigned()) throw ProtocolError(std::string(what) + " must be a non-negative integer");
      return v.get<std::uint64_t>();
    };
    auto as_round = [&](const json& v) {
      const auto r = as_uint(v, "round");
      if (r < 1 || r > 1'000'000'000) throw ProtocolError("round out of range");
      return static_cast<int>(r);
    };
    if (type == "HELLO") {
      detail::require_exact_keys(j, {"type", "role", "node"}, "HELLO");
      return HelloMsg{role_from(j.at("role").get<std::string>()), j.at("node").get<std::string>()};
    }
    if (type == "ASSIGN") {
      detail::require_exact_keys(j, {"type", "begin", "end", "dataset_hash"}, "ASSIGN");
      AssignMsg a;
      a.range.begin = static_cast<std::uint32_t>(as_uint(j.at("begin"), "begin"));
      a.range.end = static_cast<std::uint32_t>(as_uint(j.at("end"), "end"));
      if (a.range.empty()) throw ProtocolError("ASSIGN: empty feature range");
      a.dataset_hash = hash_from(j.at("dataset_hash").get<std::string>());
      return a;
    }
    if (type == "WEIGHTS") {
      detail::require_exact_keys(j, {"type", "round", "weights"}, "WEIGHTS");
      WeightsMsg w;
      w.round = as_round(j.at("round"));
      const json& arr = j.at("weights");
      if (!arr.is_array()) throw ProtocolError("WEIGHTS: weights must be an array");
      w.weights.reserve(arr.size());
      for (const json& x : arr) w.weights.push_back(as_double(x, "weight"));
      return w;
    }
    if (type == "BEST") {
      detail::require_exact_keys(j, {"type", "round", "feature_index", "theta", "polarity", "error"}, "BEST");
      BestMsg b;
      b.round = as_round(j.at("round"));
      b.weak.feature_index = static_cast<std::uint32_t>(as_uint(j.at("feature_index"), "feature_index"));
      b.weak.theta = as_double(j.at("theta"), "theta");
      b.weak.error = as_double(j.at("error"), "error");
      if (!j.at("polarity").is_number_integer()) throw ProtocolError("BEST: polarity must be an integer");
      b.weak.polarity = j.at("polarity").get<int>();
      if (b.weak.polarity != 1 && b.weak.polarity != -1) throw ProtocolError("BEST: polarity must be +1 or -1");
      return b;
    }
    if (type == "MODEL") {
      detail::require_exact_keys(j, {"type", "model"}, "MODEL");
      try {
        return ModelMsg{detail::model_from_document(j.at("model"))};
      } catch (const LoadError& e) {
        throw ProtocolError(std::string("MODEL: ") + e.what());
      }
    }
    if (type == "ERROR") {
      detail::require_exact_keys(j, {"type", "node", "message"}, "ERROR");
      return ErrorMsg{j.at("node").get<std::string>(), j.at("message").get<std::string>()};
    }
  } catch (const json::exception& e) {
    throw ProtocolError(type + ": " + e.what());
  }
  throw ProtocolError("unknown message type \"" + type + "\"");
}

}  // namespace haarboost
