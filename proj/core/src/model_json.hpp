#pragma once

#include "haarboost/boosting.hpp"
#include "json.hpp"

namespace haarboost::detail {

nlohmann::json model_document(const StrongClassifier& sc);
StrongClassifier model_from_document(const nlohmann::json& doc);

}  // namespace haarboost::detail
