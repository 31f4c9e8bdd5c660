#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace contractio::cli {

/// Bad or inconsistent configuration; `key` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Everything one invocation needs. Numbers that feed exact arithmetic are
/// kept as text ("1/3", "1e-10") and parsed exactly at run time.
struct RunConfig {
  std::string command;  ///< refute | check | orbit | limsup | attractor

  // check / orbit
  std::string space;                 ///< "real" or "harmonic"; empty = implied by the map
  std::string map = "harmonic";      ///< half | harmonic | affine:<k>:<c> | constant:<c>
  std::string phi = "t-over-1-plus-t";  ///< ri-ratio:<k> | t-over-1-plus-t | table:<t>:<v>,...
  std::string condition = "ri";      ///< ri | bisht-max | bisht-weighted
  std::optional<std::string> weight; ///< a, required for bisht-weighted
  std::string sampler = "exhaustive";  ///< exhaustive | consecutive | random | orbit
  std::optional<std::uint64_t> seed;
  std::size_t budget = 1000;
  /// Explicit points: harmonic indices or real values.
  std::vector<std::string> points;
  /// Range for generated points: harmonic indices lo..hi, or the real
  /// interval [lo, hi] for random draws.
  std::string lo = "1";
  std::string hi = "10";
  std::string x0 = "1";
  std::size_t n_max = 20;

  // orbit stopping policy
  std::string tol = "1e-10";
  std::size_t window = 8;
  std::size_t max_iter = 100000;
  std::optional<std::string> divergence_threshold;
  std::optional<std::size_t> burn_in;
  std::size_t stall_window = 0;

  // limsup
  std::string t = "1";
  std::size_t levels = 8;
  std::size_t per_window = 64;
  std::string sampling = "grid";  ///< grid | random

  // attractor
  std::string ifs = "sierpinski";  ///< "sierpinski" or a JSON file path
  std::optional<double> eps;
  std::optional<std::string> seed_set;  ///< CSV path; default {fixed point of the first map}
  std::size_t pgm_width = 512;
  std::size_t pgm_height = 512;

  // outputs
  std::optional<std::string> out;        ///< report path (attractor: CSV path)
  std::optional<std::string> report;     ///< report path for every command
  std::optional<std::string> pairs_log;  ///< check: one JSON line per pair
  std::optional<std::string> pgm;

  /// Throws ConfigError.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

std::string to_json(const RunConfig& cfg);
/// Unknown keys and type mismatches are ConfigErrors naming the key.
RunConfig from_json(const std::string& text);
/// Overlays only the keys present in `text` onto `base`.
void merge_json(RunConfig& base, const std::string& text);

/// Executes the configured command. Exit status: 0 success (pass or
/// converged), 1 violation, divergence or undetermined, 2 configuration
/// error. The JSON report goes to the report path or to `out` stream.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Command-line entry point shared by the executable and the tests.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contractio::cli
