#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "contractio/metric.hpp"

namespace contractio {

ControlFunction::ControlFunction(std::string name, Fn fn, bool domain_includes_zero, bool nondecreasing)
    : name_(std::move(name)), fn_(std::move(fn)), includes_zero_(domain_includes_zero),
      nondecreasing_(nondecreasing) {
  if (!fn_) throw std::invalid_argument("ControlFunction: empty function");
  if (includes_zero_ && !fn_(Scalar(0)).is_zero()) {
    throw std::invalid_argument("ControlFunction " + name_ + ": phi(0) must be 0 when 0 is in the domain");
  }
}

Scalar ControlFunction::operator()(const Scalar& t) const {
  if (t.sign() < 0) throw DomainError("phi " + name_ + " evaluated at negative t = " + t.to_string());
  if (t.is_zero() && !includes_zero_) throw DomainError("phi " + name_ + " is not defined at 0");
  return fn_(t);
}

ControlFunction ControlFunction::ratio(const Scalar& k, bool domain_includes_zero) {
  return ControlFunction("ri-ratio:" + k.to_string(), [k](const Scalar& t) { return k * t; },
                         domain_includes_zero, k.sign() >= 0);
}

ControlFunction ControlFunction::t_over_one_plus_t(bool domain_includes_zero) {
  return ControlFunction("t-over-1-plus-t", [](const Scalar& t) { return t / (Scalar(1) + t); },
                         domain_includes_zero, true);
}

ControlFunction ControlFunction::table(std::vector<std::pair<Scalar, Scalar>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("phi table needs at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].first.sign() < 0) throw std::invalid_argument("phi table: negative t");
    if (i > 0 && !(knots[i - 1].first < knots[i].first)) {
      throw std::invalid_argument("phi table: t values must be strictly increasing");
    }
  }
  bool monotone = true;
  for (std::size_t i = 1; i < knots.size(); ++i) monotone = monotone && !(knots[i].second < knots[i - 1].second);
  const bool includes_zero = knots.front().first.is_zero();

  auto fn = [knots](const Scalar& t) {
    std::size_t hi = 1;
    while (hi + 1 < knots.size() && knots[hi].first < t) ++hi;
    const auto& [t0, p0] = knots[hi - 1];
    const auto& [t1, p1] = knots[hi];
    return p0 + (p1 - p0) * (t - t0) / (t1 - t0);
  };
  return ControlFunction("table", fn, includes_zero, monotone);
}

const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::Identity: return "identity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::NonNegativity: return "non-negativity";
    case Axiom::Indiscernibility: return "indiscernibility";
    case Axiom::Triangle: return "triangle";
  }
  return "?";
}

std::optional<PhiWitness> check_phi_below_identity(const ControlFunction& phi,
                                                   const std::vector<Scalar>& t_samples) {
  for (const Scalar& t : t_samples) {
    if (t.is_zero() && !phi.domain_includes_zero()) {
      throw DomainError("check_phi_below_identity: t = 0 outside the domain of " + phi.name());
    }
    if (t.sign() <= 0) throw std::invalid_argument("check_phi_below_identity: samples must be > 0");
  }
  for (const Scalar& t : t_samples) {
    const Scalar v = phi(t);
    const bool codomain_bad = v.sign() < 0 || (v.is_zero() && !phi.domain_includes_zero());
    if (codomain_bad) return PhiWitness{PhiWitness::Kind::CodomainViolation, t, v};
    if (!(v < t)) return PhiWitness{PhiWitness::Kind::NotBelowIdentity, t, v};
  }
  return std::nullopt;
}

LimsupSchedule LimsupSchedule::standard(const Scalar& t, std::size_t levels, std::size_t per_window) {
  const Scalar floor_width = t.is_exact() ? Scalar::exact(1, 1000) : Scalar::real(1e-3);
  const Scalar d0 = max(t / Scalar(10), floor_width);
  LimsupSchedule s;
  Scalar width = d0;
  for (std::size_t k = 0; k <= levels; ++k) {
    s.widths.push_back(width);
    s.samples_per_window.push_back(per_window);
    width = width / Scalar(2);
  }
  return s;
}

void LimsupSchedule::validate() const {
  if (widths.empty()) throw std::invalid_argument("limsup schedule: no windows");
  if (widths.size() != samples_per_window.size()) {
    throw std::invalid_argument("limsup schedule: one sample count per window required");
  }
  for (std::size_t k = 0; k < widths.size(); ++k) {
    if (widths[k].sign() <= 0) throw std::invalid_argument("limsup schedule: widths must be > 0");
    if (k > 0 && !(widths[k] < widths[k - 1])) {
      throw std::invalid_argument("limsup schedule: widths must be strictly decreasing");
    }
    if (samples_per_window[k] == 0) throw std::invalid_argument("limsup schedule: empty window");
  }
}

LimsupEstimate estimate_limsup_right(const ControlFunction& phi, const Scalar& t,
                                     const LimsupSchedule& schedule) {
  if (t.sign() <= 0) throw std::invalid_argument("estimate_limsup_right: t must be > 0");
  schedule.validate();

  std::vector<Scalar> samples;
  for (std::size_t k = 0; k < schedule.widths.size(); ++k) {
    const Scalar& width = schedule.widths[k];
    const std::size_t n = schedule.samples_per_window[k];
    if (schedule.mode == SamplingMode::Grid) {
      for (std::size_t j = 1; j <= n; ++j) {
        samples.push_back(t + width * Scalar::exact(static_cast<long>(j), static_cast<long>(n)));
      }
    } else {
      std::seed_seq seq{schedule.seed, static_cast<std::uint64_t>(k)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double u = 1.0 - unit(rng);  // (0, 1]
        const Scalar frac = (t.is_exact() && width.is_exact()) ? Scalar(Rational(u)) : Scalar::real(u);
        samples.push_back(t + width * frac);
      }
    }
  }
  std::sort(samples.begin(), samples.end(), [](const Scalar& a, const Scalar& b) { return a < b; });
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  LimsupEstimate est;
  est.t = t;
  std::vector<Scalar> prefix_sup;
  prefix_sup.reserve(samples.size());
  for (const Scalar& s : samples) {
    const Scalar v = phi(s);
    ++est.evaluations;
    if (!est.witness && !(v < t)) est.witness = s;
    prefix_sup.push_back(prefix_sup.empty() ? v : max(prefix_sup.back(), v));
  }

  for (const Scalar& width : schedule.widths) {
    const Scalar bound = t + width;
    auto it = std::upper_bound(samples.begin(), samples.end(), bound,
                               [](const Scalar& a, const Scalar& b) { return a < b; });
    const auto count = static_cast<std::size_t>(it - samples.begin());
    // The grid always places a sample at t + width; random windows may not
    // reach below the smallest sample, in which case the window is empty.
    if (count == 0) {
      est.window_sup.push_back(Scalar::real(-std::numeric_limits<double>::infinity()));
    } else {
      est.window_sup.push_back(prefix_sup[count - 1]);
    }
  }
  est.final_estimate = est.window_sup.back();
  est.verdict = est.witness ? LimsupEstimate::Verdict::ViolatedWithWitness
                            : LimsupEstimate::Verdict::SatisfiedOnSamples;
  return est;
}

}  // namespace contractio
