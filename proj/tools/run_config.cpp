#include <algorithm>
#include <array>
#include <set>

#include <json.hpp>

#include "cli.hpp"
#include "registry.hpp"

namespace contractio::cli {

using nlohmann::json;

namespace {

// Visits every serialised field as (key, member).
template <class Cfg, class V>
void visit_fields(Cfg& c, V&& v) {
  v("command", c.command);
  v("space", c.space);
  v("map", c.map);
  v("phi", c.phi);
  v("condition", c.condition);
  v("a", c.weight);
  v("sampler", c.sampler);
  v("seed", c.seed);
  v("budget", c.budget);
  v("points", c.points);
  v("lo", c.lo);
  v("hi", c.hi);
  v("x0", c.x0);
  v("n_max", c.n_max);
  v("tol", c.tol);
  v("window", c.window);
  v("max_iter", c.max_iter);
  v("divergence_threshold", c.divergence_threshold);
  v("burn_in", c.burn_in);
  v("stall_window", c.stall_window);
  v("t", c.t);
  v("levels", c.levels);
  v("per_window", c.per_window);
  v("sampling", c.sampling);
  v("ifs", c.ifs);
  v("eps", c.eps);
  v("seed_set", c.seed_set);
  v("pgm_width", c.pgm_width);
  v("pgm_height", c.pgm_height);
  v("out", c.out);
  v("report", c.report);
  v("pairs_log", c.pairs_log);
  v("pgm", c.pgm);
}

template <class T>
void emit(json& j, const char* key, const T& value) {
  j[key] = value;
}

template <class T>
void emit(json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
}

void read(const json& j, const char* key, std::string& out) {
  if (!j.is_string()) throw ConfigError(key, "expected a string");
  out = j.get<std::string>();
}

void read(const json& j, const char* key, std::uint64_t& out) {
  if (!j.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
  out = j.get<std::uint64_t>();
}

void read(const json& j, const char* key, double& out) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  out = j.get<double>();
}

void read(const json& j, const char* key, std::vector<std::string>& out) {
  if (!j.is_array()) throw ConfigError(key, "expected an array of strings");
  out.clear();
  for (const auto& e : j) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(e.dump());
    } else {
      throw ConfigError(key, "expected an array of strings");
    }
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(j, key, value);
  out = std::move(value);
}

const std::array<const char*, 5> kCommands{"refute", "check", "orbit", "limsup", "attractor"};
const std::array<const char*, 4> kSamplers{"exhaustive", "consecutive", "random", "orbit"};

template <std::size_t N>
bool one_of(const std::string& s, const std::array<const char*, N>& names) {
  return std::any_of(names.begin(), names.end(), [&](const char* n) { return s == n; });
}

}  // namespace

void RunConfig::validate() const {
  if (!one_of(command, kCommands)) {
    throw ConfigError("command", "unknown command '" + command + "' (refute, check, orbit, limsup, attractor)");
  }
  const bool harmonic = is_harmonic(map);
  if (!harmonic) real_map(map);
  if (!space.empty() && space != (harmonic ? "harmonic" : "real")) {
    throw ConfigError("space", "'" + space + "' does not match map '" + map + "'");
  }
  parse_phi(phi);
  parse_condition(condition, weight ? &*weight : nullptr);
  if (!one_of(sampler, kSamplers)) {
    throw ConfigError("sampler", "unknown sampler '" + sampler + "' (exhaustive, consecutive, random, orbit)");
  }
  if (command == "check" && sampler == "random" && !seed) {
    throw ConfigError("seed", "mandatory for the random sampler");
  }
  if (budget == 0) throw ConfigError("budget", "must be >= 1");
  if (n_max == 0) throw ConfigError("n_max", "must be >= 1");
  if (command == "check" || command == "orbit") {
    for (const auto& p : points) number("points", p);
    const Scalar l = number("lo", lo), h = number("hi", hi);
    if (!(l <= h)) throw ConfigError("hi", "must be >= lo");
    number("x0", x0);
  }
  if (number("tol", tol).sign() <= 0) throw ConfigError("tol", "must be > 0");
  if (window == 0) throw ConfigError("window", "must be >= 1");
  if (max_iter == 0) throw ConfigError("max_iter", "must be >= 1");
  if (divergence_threshold && number("divergence_threshold", *divergence_threshold).sign() <= 0) {
    throw ConfigError("divergence_threshold", "must be > 0");
  }
  if (command == "limsup" && number("t", t).sign() <= 0) throw ConfigError("t", "must be > 0");
  if (sampling != "grid" && sampling != "random") throw ConfigError("sampling", "expected grid or random");
  if (command == "limsup" && sampling == "random" && !seed) {
    throw ConfigError("seed", "mandatory for random limsup sampling");
  }
  if (levels == 0) throw ConfigError("levels", "must be >= 1");
  if (per_window == 0) throw ConfigError("per_window", "must be >= 1");
  if (eps && !(*eps >= 0.0)) throw ConfigError("eps", "must be >= 0");
  if (pgm_width == 0) throw ConfigError("pgm_width", "must be >= 1");
  if (pgm_height == 0) throw ConfigError("pgm_height", "must be >= 1");
}

std::string to_json(const RunConfig& cfg) {
  json j = json::object();
  visit_fields(cfg, [&](const char* key, const auto& member) { emit(j, key, member); });
  return j.dump(2);
}

void merge_json(RunConfig& base, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<file>", "top level must be an object");
  std::set<std::string> known;
  visit_fields(base, [&](const char* key, auto& member) {
    known.insert(key);
    if (auto it = j.find(key); it != j.end()) read(*it, key, member);
  });
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError(item.key(), "unknown key");
  }
}

RunConfig from_json(const std::string& text) {
  RunConfig cfg;
  merge_json(cfg, text);
  return cfg;
}

}  // namespace contractio::cli
