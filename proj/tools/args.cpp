#include <functional>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace contractio::cli {

namespace {

template <class T>
struct Unwrapped {
  using type = T;
};
template <class T>
struct Unwrapped<std::optional<T>> {
  using type = T;
};

// Options are parsed into scratch storage and copied onto the config only
// when given, so they override values loaded with --config.
class Flags {
 public:
  explicit Flags(CLI::App* sub) : sub_(sub) {}

  template <class T>
  Flags& add(const std::string& name, T RunConfig::*member, const std::string& help) {
    auto store = std::make_shared<typename Unwrapped<T>::type>();
    CLI::Option* opt = sub_->add_option(name, *store, help);
    if constexpr (std::is_same_v<T, std::vector<std::string>>) opt->delimiter(',');
    overlays_.push_back([opt, store, member](RunConfig& c) {
      if (opt->count() > 0) c.*member = *store;
    });
    return *this;
  }

  void apply(RunConfig& c) const {
    for (const auto& f : overlays_) f(c);
  }

 private:
  CLI::App* sub_;
  std::vector<std::function<void(RunConfig&)>> overlays_;
};

void add_map_flags(Flags& f) {
  f.add("--map", &RunConfig::map, "half | harmonic | affine:<k>:<c> | constant:<c>")
      .add("--space", &RunConfig::space, "real | harmonic (implied by --map)")
      .add("--x0", &RunConfig::x0, "start point (harmonic: index n of H_n)");
}

void add_phi_flag(Flags& f) {
  f.add("--phi", &RunConfig::phi, "ri-ratio:<k> | t-over-1-plus-t | table:<t>:<v>,...");
}

void add_policy_flags(Flags& f) {
  f.add("--tol", &RunConfig::tol, "step tolerance")
      .add("--window", &RunConfig::window, "consecutive small steps required")
      .add("--max-iter", &RunConfig::max_iter, "iteration cap")
      .add("--divergence-threshold", &RunConfig::divergence_threshold, "distance that signals divergence")
      .add("--burn-in", &RunConfig::burn_in, "first index eligible as divergence evidence")
      .add("--stall-window", &RunConfig::stall_window, "stop after this many non-improving steps (0 = off)");
}

}  // namespace

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-point toolkit for phi-contractions"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; command-line flags take precedence");

  struct Command {
    std::string name;
    CLI::App* sub;
    Flags flags;
  };
  std::vector<Command> commands;
  auto add_command = [&](const std::string& name, const std::string& help) -> Flags& {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back({name, sub, Flags(sub)});
    auto& f = commands.back().flags;
    f.add("--report", &RunConfig::report, "write the JSON report here instead of stdout");
    return f;
  };
  commands.reserve(5);

  add_command("refute", "evaluate the harmonic counterexample pair exactly")
      .add("--out", &RunConfig::out, "report path");

  auto& check = add_command("check", "search for pairs violating a contraction condition");
  add_map_flags(check);
  add_phi_flag(check);
  check.add("--condition", &RunConfig::condition, "ri | bisht-max | bisht-weighted")
      .add("--a", &RunConfig::weight, "weight for bisht-weighted, 0 < a < 1")
      .add("--sampler", &RunConfig::sampler, "exhaustive | consecutive | random | orbit")
      .add("--seed", &RunConfig::seed, "seed (mandatory for random)")
      .add("--budget", &RunConfig::budget, "maximum pairs to check")
      .add("--points", &RunConfig::points, "comma-separated points")
      .add("--lo", &RunConfig::lo, "lower end of the generated range")
      .add("--hi", &RunConfig::hi, "upper end of the generated range")
      .add("--n-max", &RunConfig::n_max, "orbit length for the orbit sampler")
      .add("--pairs-log", &RunConfig::pairs_log, "JSON lines, one per checked pair")
      .add("--out", &RunConfig::out, "report path");

  auto& orbit = add_command("orbit", "iterate a map and classify the orbit");
  add_map_flags(orbit);
  add_policy_flags(orbit);
  orbit.add("--out", &RunConfig::out, "report path");

  auto& limsup = add_command("limsup", "estimate the right upper limit of phi at t");
  add_phi_flag(limsup);
  limsup.add("--t", &RunConfig::t, "the point t > 0")
      .add("--levels", &RunConfig::levels, "number of window halvings")
      .add("--per-window", &RunConfig::per_window, "samples per window")
      .add("--sampling", &RunConfig::sampling, "grid | random")
      .add("--seed", &RunConfig::seed, "seed (mandatory for random)")
      .add("--out", &RunConfig::out, "report path");

  auto& attr = add_command("attractor", "approximate an IFS attractor by Hutchinson iteration");
  add_policy_flags(attr);
  attr.add("--ifs", &RunConfig::ifs, "sierpinski or a JSON file")
      .add("--eps", &RunConfig::eps, "grid resolution (default from the bounding box)")
      .add("--seed-set", &RunConfig::seed_set, "CSV seed set (default: first map's fixed point)")
      .add("--out", &RunConfig::out, "CSV path for the attractor points")
      .add("--pgm", &RunConfig::pgm, "PGM raster path")
      .add("--width", &RunConfig::pgm_width, "raster width")
      .add("--height", &RunConfig::pgm_height, "raster height");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      err << "error: config key '--config': cannot read '" << config_path << "'\n";
      return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      merge_json(cfg, text.str());
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }
  for (const auto& c : commands) {
    if (c.sub->parsed()) {
      cfg.command = c.name;
      c.flags.apply(cfg);
    }
  }
  return run(cfg, out, err);
}

}  // namespace contractio::cli
