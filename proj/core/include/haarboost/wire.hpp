#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "haarboost/boosting.hpp"

namespace haarboost {

enum class RoleKind { Master, SubMaster, Worker };

std::string_view to_string(RoleKind r);

struct HelloMsg {
  RoleKind role = RoleKind::Worker;
  std::string node;
};

struct AssignMsg {
  FeatureRange range;
  std::uint64_t dataset_hash = 0;
};

struct WeightsMsg {
  int round = 0;
  std::vector<double> weights;
};

struct BestMsg {
  int round = 0;
  WeakClassifier weak;
};

struct ModelMsg {
  StrongClassifier model;
};

struct ErrorMsg {
  std::string node;
  std::string message;
};

using ClusterMessage = std::variant<HelloMsg, AssignMsg, WeightsMsg, BestMsg, ModelMsg, ErrorMsg>;

/// "HELLO", "ASSIGN", "WEIGHTS", "BEST", "MODEL" or "ERROR".
std::string_view message_type(const ClusterMessage& m);

/// One JSON object without the trailing newline. Floats use 17 significant digits.
///   HELLO   {"type","role","node"}
///   ASSIGN  {"type","begin","end","dataset_hash"}   dataset_hash is 16 hex digits
///   WEIGHTS {"type","round","weights"}
///   BEST    {"type","round","feature_index","theta","polarity","error"}
///   MODEL   {"type","model"}                         model document as in model_io.hpp
///   ERROR   {"type","node","message"}
std::string encode(const ClusterMessage& m);

/// Strict inverse of encode. Unknown or missing fields, bad types and malformed JSON throw ProtocolError.
ClusterMessage decode(std::string_view line);

}  // namespace haarboost
