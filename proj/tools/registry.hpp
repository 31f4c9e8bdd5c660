#pragma once

#include <string>

#include "contractio/conditions.hpp"
#include "contractio/metric.hpp"
#include "contractio/scalar.hpp"

namespace contractio::cli {

/// Built-in maps on the real line: half | affine:<k>:<c> | constant:<c>.
/// Throws ConfigError("map", ...) for anything else.
SelfMap<Scalar> real_map(const std::string& text);
bool is_harmonic(const std::string& map_name);

/// ri-ratio:<k> | t-over-1-plus-t | table:<t>:<v>,<t>:<v>,...
ControlFunction parse_phi(const std::string& text);

ConditionKind parse_condition(const std::string& name, const std::string* weight);

/// Exact parse; ConfigError naming `key` on failure.
Scalar number(const std::string& key, const std::string& text);

}  // namespace contractio::cli
