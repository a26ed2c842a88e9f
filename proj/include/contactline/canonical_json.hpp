#pragma once

#include <string>

#include <json.hpp>

namespace contactline {

/// Deterministic JSON text: sorted keys, two-space indent, floats with 17
/// significant digits. Non-finite numbers raise NonFinite.
std::string canonical_dump(const nlohmann::json& j);

/// %.17g formatting shared by CSV and JSON writers.
std::string format_double(double v);

} // namespace contactline
