#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "haarboost/boosting.hpp"

namespace haarboost {

inline constexpr int kModelVersion = 1;

/// Model document:
///   {"version":1,"window":24,"rounds":[{"feature":{"ftype","x","y","w","h","global_index"},
///    "theta","polarity","alpha","beta","error"}, ...]}
/// Floats are written with 17 significant digits. Output is a single line plus '\n'.
std::string model_to_json(const StrongClassifier& sc);

/// Parses and validates a model document. Throws LoadError on any defect.
StrongClassifier model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const StrongClassifier& sc);
StrongClassifier load_model(const std::filesystem::path& path);

}  // namespace haarboost
