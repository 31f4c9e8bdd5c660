#include "registry.hpp"

#include "cli.hpp"
#include "contractio/case_studies.hpp"

namespace contractio::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Scalar number(const std::string& key, const std::string& text) {
  try {
    return Scalar::parse(text);
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + text + "'");
  }
}

bool is_harmonic(const std::string& map_name) { return map_name == "harmonic"; }

SelfMap<Scalar> real_map(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts[0] == "half" && parts.size() == 1) return cases::half_map();
  if (parts[0] == "affine" && parts.size() == 3) {
    return cases::affine_map(number("map", parts[1]), number("map", parts[2]));
  }
  if (parts[0] == "constant" && parts.size() == 2) return cases::constant_map(number("map", parts[1]));
  throw ConfigError("map", "unknown map '" + text + "' (half, harmonic, affine:<k>:<c>, constant:<c>)");
}

ControlFunction parse_phi(const std::string& text) {
  if (text == "t-over-1-plus-t") return ControlFunction::t_over_one_plus_t();
  if (text.rfind("ri-ratio:", 0) == 0) {
    const Scalar k = number("phi", text.substr(9));
    if (k.sign() < 0) throw ConfigError("phi", "ratio must be >= 0");
    return ControlFunction::ratio(k);
  }
  if (text.rfind("table:", 0) == 0) {
    std::vector<std::pair<Scalar, Scalar>> knots;
    for (const auto& knot : split(text.substr(6), ',')) {
      const auto tv = split(knot, ':');
      if (tv.size() != 2) throw ConfigError("phi", "table knot '" + knot + "' is not <t>:<value>");
      knots.emplace_back(number("phi", tv[0]), number("phi", tv[1]));
    }
    try {
      return ControlFunction::table(std::move(knots));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("phi", e.what());
    }
  }
  throw ConfigError("phi", "unknown control function '" + text + "' (ri-ratio:<k>, t-over-1-plus-t, table:...)");
}

ConditionKind parse_condition(const std::string& name, const std::string* weight) {
  if (name == "ri") return ConditionKind::ri();
  if (name == "bisht-max") return ConditionKind::bisht_max();
  if (name == "bisht-weighted") {
    if (!weight) throw ConfigError("a", "required for bisht-weighted");
    try {
      return ConditionKind::bisht_weighted(number("a", *weight));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("a", e.what());
    }
  }
  throw ConfigError("condition", "unknown condition '" + name + "' (ri, bisht-max, bisht-weighted)");
}

}  // namespace contractio::cli
