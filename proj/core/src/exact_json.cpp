#include "exact_json.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "haarboost/error.hpp"

namespace haarboost::detail {

namespace {

void write(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        write(it.value(), out);
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        write(e, out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) throw std::invalid_argument("cannot serialize non-finite float");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_exact(const nlohmann::json& j) {
  std::string out;
  write(j, out);
  return out;
}

void require_exact_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw ProtocolError(std::string(what) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) throw ProtocolError(std::string(what) + ": unknown field \"" + it.key() + "\"");
  }
  for (const char* k : allowed) {
    if (!j.contains(k)) throw ProtocolError(std::string(what) + ": missing field \"" + k + "\"");
  }
}

}  // namespace haarboost::detail
