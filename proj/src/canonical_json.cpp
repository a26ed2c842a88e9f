#include "contactline/canonical_json.hpp"

#include <cmath>
#include <cstdio>

#include "contactline/error.hpp"

namespace contactline {

std::string format_double(double v)
{
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "non-finite value in report", {{"value", std::to_string(v)}});
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep floats recognisable as floats after a round trip
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

void dump(const nlohmann::json& j, std::string& out, int indent)
{
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
  case nlohmann::json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in + nlohmann::json(it.key()).dump() + ": ";
      dump(it.value(), out, indent + 1);
    }
    out += "\n" + pad + "}";
    return;
  }
  case nlohmann::json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad_in;
      dump(j[i], out, indent + 1);
    }
    out += "\n" + pad + "]";
    return;
  }
  case nlohmann::json::value_t::number_float:
    out += format_double(j.get<double>());
    return;
  default:
    out += j.dump();
  }
}

} // namespace

std::string canonical_dump(const nlohmann::json& j)
{
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

} // namespace contactline
