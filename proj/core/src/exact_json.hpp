#pragma once

#include <string>

#include "json.hpp"

namespace haarboost::detail {

/// Compact JSON with every float written as a 17-significant-digit decimal, which
/// round-trips any IEEE double exactly through strtod.
std::string dump_exact(const nlohmann::json& j);

/// Throws ProtocolError unless `j` is an object whose keys are exactly `allowed`.
void require_exact_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* what);

}  // namespace haarboost::detail
