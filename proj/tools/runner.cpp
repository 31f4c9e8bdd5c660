#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "contractio/case_studies.hpp"
#include "contractio/fractal.hpp"
#include "contractio/orbit.hpp"
#include "contractio/parallel.hpp"
#include "registry.hpp"

namespace contractio::cli {

using nlohmann::json;
using cases::HarmonicPoint;

namespace {

json tagged(const Scalar& s) {
  json j{{"realization", to_string(s.realization())}, {"value", s.to_string()}, {"approx", s.to_double()}};
  if (s.mixed()) j["mixed"] = true;
  return j;
}

json point_json(const HarmonicPoint& p) { return {{"index", p.n}, {"value", tagged(Scalar(p.value()))}}; }
json point_json(const Scalar& x) { return tagged(x); }

template <class P>
json witness_json(const ViolationWitness<P>& w) {
  return {{"x", point_json(w.x)},     {"y", point_json(w.y)},   {"lhs", tagged(w.lhs)},
          {"rhs", tagged(w.rhs)},     {"argument", tagged(w.argument)}, {"gap", tagged(w.gap)}};
}

std::string read_file(const std::string& key, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(key, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& report, const std::optional<std::string>& path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path) {
    write_file_atomic(*path, text);
  } else {
    out << text;
  }
}

std::uint64_t harmonic_index(const std::string& key, const std::string& text) {
  const Scalar v = number(key, text);
  if (!v.is_exact() || v.rational().get_den() != 1 || v.sign() <= 0 || !v.rational().get_num().fits_ulong_p()) {
    throw ConfigError(key, "harmonic points are positive integer indices, got '" + text + "'");
  }
  return v.rational().get_num().get_ui();
}

StoppingPolicy policy_of(const RunConfig& cfg) {
  StoppingPolicy p;
  p.tol_step = number("tol", cfg.tol);
  p.window = cfg.window;
  p.max_iter = cfg.max_iter;
  if (cfg.divergence_threshold) p.divergence_threshold = number("divergence_threshold", *cfg.divergence_threshold);
  p.burn_in = cfg.burn_in;
  p.stall_window = cfg.stall_window;
  return p;
}

const std::optional<std::string>& report_path(const RunConfig& cfg) { return cfg.report ? cfg.report : cfg.out; }

// The point type decides how configured points are read and drawn.
struct HarmonicDomain {
  using P = HarmonicPoint;
  SelfMap<P> f = cases::harmonic_self_map();
  P parse(const std::string& key, const std::string& text) const { return P{harmonic_index(key, text)}; }
  std::vector<P> range(const RunConfig& cfg) const {
    std::vector<P> pts;
    for (auto n = harmonic_index("lo", cfg.lo), hi = harmonic_index("hi", cfg.hi); n <= hi; ++n) pts.push_back(P{n});
    return pts;
  }
  std::function<P(std::mt19937_64&)> generator(const RunConfig& cfg) const {
    std::uniform_int_distribution<std::uint64_t> pick(harmonic_index("lo", cfg.lo), harmonic_index("hi", cfg.hi));
    return [pick](std::mt19937_64& rng) mutable { return P{pick(rng)}; };
  }
};

struct RealDomain {
  using P = Scalar;
  SelfMap<P> f;
  P parse(const std::string& key, const std::string& text) const { return number(key, text); }
  std::vector<P> range(const RunConfig&) const {
    throw ConfigError("points", "the real line needs explicit points for this sampler");
  }
  // Exact dyadic draws lo + (hi - lo)·k/2^32.
  std::function<P(std::mt19937_64&)> generator(const RunConfig& cfg) const {
    const Scalar lo = number("lo", cfg.lo);
    const Scalar span = number("hi", cfg.hi) - lo;
    const Scalar unit = Scalar(Rational(1, 1)) / Scalar(Rational(mpz_class("4294967296")));
    return [lo, span, unit](std::mt19937_64& rng) {
      const auto k = static_cast<unsigned long>(rng() >> 32);
      return lo + span * Scalar(Rational(k)) * unit;
    };
  }
};

template <class Domain>
int run_check(const RunConfig& cfg, const Domain& dom, std::ostream& out) {
  using P = typename Domain::P;
  const auto phi = parse_phi(cfg.phi);
  const auto kind = parse_condition(cfg.condition, cfg.weight ? &*cfg.weight : nullptr);

  auto explicit_or_range = [&] {
    if (cfg.points.empty()) return dom.range(cfg);
    std::vector<P> pts;
    for (const auto& s : cfg.points) pts.push_back(dom.parse("points", s));
    return pts;
  };
  PairSource<P> source;
  if (cfg.sampler == "exhaustive") {
    source = exhaustive_pairs(explicit_or_range());
  } else if (cfg.sampler == "consecutive") {
    source = consecutive_pairs(explicit_or_range());
  } else if (cfg.sampler == "random") {
    source = random_pairs<P>(dom.generator(cfg), *cfg.seed);
  } else {
    std::vector<P> pts{dom.parse("x0", cfg.x0)};
    for (std::size_t n = 0; n < cfg.n_max; ++n) {
      P next = dom.f(pts.back());
      if (std::find(pts.begin(), pts.end(), next) == pts.end()) pts.push_back(next);
    }
    source = exhaustive_pairs(std::move(pts));
    source.name = "orbit";
  }

  const auto report = falsify(dom.f, phi, kind, source, cfg.budget);
  json j{{"command", "check"},
         {"map", cfg.map},
         {"phi", phi.name()},
         {"condition", kind.name()},
         {"sampler", report.sampler},
         {"budget", cfg.budget},
         {"pairs_checked", report.pairs_checked},
         {"passes", report.passes},
         {"degenerate", report.degenerate},
         {"verdict", report.witnesses.empty() ? "none-found-within-budget" : "violations-found"}};
  if (cfg.seed) j["seed"] = *cfg.seed;
  j["witnesses"] = json::array();
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    json w = witness_json(report.witnesses[i]);
    w["pair_index"] = report.witness_indices[i];
    j["witnesses"].push_back(std::move(w));
  }

  if (cfg.pairs_log) {
    std::string log;
    for (const auto& rec : report.records) {
      json line{{"index", rec.index}, {"x", point_json(rec.x)}, {"y", point_json(rec.y)}};
      if (!rec.outcome) {
        line["outcome"] = "degenerate";
      } else if (const auto* w = std::get_if<ViolationWitness<P>>(&*rec.outcome)) {
        line["outcome"] = "violation";
        line["argument"] = tagged(w->argument);
        line["lhs"] = tagged(w->lhs);
        line["rhs"] = tagged(w->rhs);
        line["gap"] = tagged(w->gap);
      } else {
        const auto& pass = std::get<PairPass>(*rec.outcome);
        line["outcome"] = "pass";
        line["argument"] = tagged(pass.argument);
        line["lhs"] = tagged(pass.lhs);
        line["rhs"] = tagged(pass.rhs);
      }
      log += line.dump() + "\n";
    }
    write_file_atomic(*cfg.pairs_log, log);
  }
  emit(j, report_path(cfg), out);
  return report.witnesses.empty() ? 0 : 1;
}

template <class Domain>
int run_orbit(const RunConfig& cfg, const Domain& dom, std::ostream& out) {
  using P = typename Domain::P;
  const StoppingPolicy policy = policy_of(cfg);
  const auto result = iterate(dom.f, dom.parse("x0", cfg.x0), policy);
  const auto& orbit = result.orbit;

  json j{{"command", "orbit"},
         {"map", cfg.map},
         {"x0", point_json(orbit.x0())},
         {"steps", orbit.steps()},
         {"policy",
          {{"tol", tagged(policy.tol_step)},
           {"window", policy.window},
           {"max_iter", policy.max_iter},
           {"burn_in", policy.effective_burn_in()},
           {"stall_window", policy.stall_window}}}};
  if (!orbit.step_distances.empty()) j["final_step"] = tagged(orbit.step_distances.back());

  int status = 1;
  json v;
  if (const auto* c = std::get_if<Converged<P>>(&result.verdict)) {
    v = {{"kind", "converged"}, {"z", point_json(c->z)}, {"residual", tagged(c->residual)}, {"iterations", c->iterations}};
    status = 0;
  } else if (const auto* d = std::get_if<Diverging>(&result.verdict)) {
    v = {{"kind", "diverging"},
         {"m", d->m},
         {"n", d->n},
         {"point_m", point_json(orbit.points[d->m])},
         {"point_n", point_json(orbit.points[d->n])},
         {"distance", tagged(d->distance)},
         {"threshold", tagged(d->threshold)},
         {"iterations", d->iterations}};
  } else {
    const auto& u = std::get<Undetermined>(result.verdict);
    v = {{"kind", "undetermined"}, {"reason", u.reason}, {"iterations", u.iterations}};
  }
  j["verdict"] = std::move(v);
  emit(j, report_path(cfg), out);
  return status;
}

int run_refute(const RunConfig& cfg, std::ostream& out) {
  const auto r = cases::refute_counterexample();
  json j{{"command", "refute"},
         {"verdict", r.verdict},
         {"x", point_json(r.x)},
         {"y", point_json(r.y)},
         {"fx", point_json(r.fx)},
         {"fy", point_json(r.fy)},
         {"d_xy", tagged(r.d_xy)},
         {"lhs", tagged(r.lhs)},
         {"rhs", tagged(r.rhs)},
         {"gap", tagged(r.gap)},
         {"cross_check_agrees", r.cross_check_agrees}};
  j["witnesses"] = json::array();
  if (r.violated) {
    j["witnesses"].push_back(witness_json(ViolationWitness<HarmonicPoint>{r.x, r.y, r.lhs, r.rhs, r.d_xy, r.gap}));
  }
  emit(j, report_path(cfg), out);
  return r.violated ? 1 : 0;
}

int run_limsup(const RunConfig& cfg, std::ostream& out) {
  const auto phi = parse_phi(cfg.phi);
  const Scalar t = number("t", cfg.t);
  auto schedule = LimsupSchedule::standard(t, cfg.levels, cfg.per_window);
  if (cfg.sampling == "random") {
    schedule.mode = SamplingMode::SeededRandom;
    schedule.seed = *cfg.seed;
  }
  const auto est = estimate_limsup_right(phi, t, schedule);
  json windows = json::array();
  for (std::size_t k = 0; k < est.window_sup.size(); ++k) {
    windows.push_back({{"width", tagged(schedule.widths[k])}, {"sup", tagged(est.window_sup[k])}});
  }
  const bool ok = est.verdict == LimsupEstimate::Verdict::SatisfiedOnSamples;
  json j{{"command", "limsup"},
         {"phi", phi.name()},
         {"t", tagged(t)},
         {"sampling", cfg.sampling},
         {"windows", windows},
         {"final_estimate", tagged(est.final_estimate)},
         {"evaluations", est.evaluations},
         {"verdict", ok ? "satisfied-on-samples" : "violated-with-witness"}};
  if (cfg.seed && cfg.sampling == "random") j["seed"] = *cfg.seed;
  j["witnesses"] = json::array();
  if (est.witness) j["witnesses"].push_back({{"s", tagged(*est.witness)}, {"phi_s", tagged(phi(*est.witness))}});
  emit(j, report_path(cfg), out);
  return ok ? 0 : 1;
}

int run_attractor(const RunConfig& cfg, std::ostream& out) {
  using namespace fractal;
  IFS ifs = IFS::sierpinski();
  if (cfg.ifs != "sierpinski") {
    try {
      ifs = parse_ifs_json(read_file("ifs", cfg.ifs));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("ifs", e.what());
    }
  }
  const double eps = cfg.eps.value_or(ifs.default_resolution());
  CompactSet seed;
  if (cfg.seed_set) {
    std::istringstream in(read_file("seed_set", *cfg.seed_set));
    try {
      const CompactSet raw = read_csv(in);
      seed = CompactSet(raw.dim(), eps, raw.coords());
    } catch (const std::exception& e) {
      throw ConfigError("seed_set", e.what());
    }
  } else {
    const Eigen::VectorXd z = ifs.maps().front().fixed_point();
    seed = CompactSet(ifs.dim(), eps, std::vector<double>(z.data(), z.data() + z.size()));
  }
  const auto result = attractor(ifs, seed, policy_of(cfg));

  if (cfg.out) {
    std::ostringstream csv;
    write_csv(csv, result.set);
    write_file_atomic(*cfg.out, csv.str());
  }
  if (cfg.pgm) {
    std::ostringstream pgm;
    write_pgm(pgm, result.set, Viewport::fit(result.set, cfg.pgm_width, cfg.pgm_height));
    write_file_atomic(*cfg.pgm, pgm.str());
  }

  json steps = json::array();
  for (const auto& s : result.step_distances) steps.push_back(tagged(s));
  json v;
  if (result.converged()) {
    v = {{"kind", "converged"}, {"residual", tagged(std::get<Converged<CompactSet>>(result.verdict).residual)}};
  } else if (const auto* u = std::get_if<Undetermined>(&result.verdict)) {
    v = {{"kind", "undetermined"}, {"reason", u->reason}};
  } else {
    v = {{"kind", "diverging"}};
  }
  json j{{"command", "attractor"},
         {"ifs", cfg.ifs},
         {"dim", ifs.dim()},
         {"maps", ifs.maps().size()},
         {"max_lipschitz", ifs.max_lipschitz()},
         {"eps", eps},
         {"grid_error_bound", 2 * eps},
         {"seed_points", seed.size()},
         {"points", result.set.size()},
         {"iterations", result.iterations},
         {"step_distances", steps},
         {"verdict", v}};
  if (cfg.out) j["csv"] = *cfg.out;
  if (cfg.pgm) j["pgm"] = *cfg.pgm;
  emit(j, cfg.report, out);
  return result.converged() ? 0 : 1;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path + "': " + ec.message());
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (const char* env = std::getenv("CONTRACTIO_THREADS")) {
      try {
        set_thread_count(parse_thread_count(env));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("CONTRACTIO_THREADS", e.what());
      }
    }
    cfg.validate();
    if (cfg.command == "refute") return run_refute(cfg, out);
    if (cfg.command == "limsup") return run_limsup(cfg, out);
    if (cfg.command == "attractor") return run_attractor(cfg, out);
    if (is_harmonic(cfg.map)) {
      HarmonicDomain dom;
      return cfg.command == "check" ? run_check(cfg, dom, out) : run_orbit(cfg, dom, out);
    }
    RealDomain dom{real_map(cfg.map)};
    return cfg.command == "check" ? run_check(cfg, dom, out) : run_orbit(cfg, dom, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace contractio::cli
