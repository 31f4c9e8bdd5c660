#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "contractio/conditions.hpp"
#include "contractio/metric.hpp"

namespace contractio {

struct StoppingPolicy {
  Scalar tol_step = Scalar::real(1e-10);
  std::size_t window = 8;
  std::size_t max_iter = 100000;
  /// Defaults to 1000 times the first step distance.
  std::optional<Scalar> divergence_threshold;
  /// Defaults to max_iter / 10.
  std::optional<std::size_t> burn_in;
  /// When nonzero, stop with Undetermined once the smallest step distance
  /// seen has not improved for this many consecutive steps.
  std::size_t stall_window = 0;

  void validate() const;
  std::size_t effective_burn_in() const { return burn_in.value_or(max_iter / 10); }
};

/// The finite orbit segment [x0, f(x0), ..., f^N(x0)] with
/// step_distances[n] = d(points[n], points[n+1]).
template <Point P>
struct Orbit {
  std::vector<P> points;
  std::vector<Scalar> step_distances;

  const P& x0() const { return points.front(); }
  const P& last() const { return points.back(); }
  std::size_t steps() const { return step_distances.size(); }
};

template <Point P>
struct Converged {
  P z;
  Scalar residual;  ///< d(z, f(z)), recomputed
  std::size_t iterations;
};

/// d(points[m], points[n]) > threshold with m past burn-in. The pair always
/// compares the j-th and 2j-th terms of the sequence, counting x0 as the
/// first term (orbit indices m = j-1, n = 2j-1).
struct Diverging {
  std::size_t m;
  std::size_t n;
  Scalar distance;
  Scalar threshold;
  std::size_t iterations;
};

struct Undetermined {
  std::string reason;
  std::size_t iterations;
};

template <Point P>
using OrbitVerdict = std::variant<Converged<P>, Diverging, Undetermined>;

template <Point P>
struct OrbitResult {
  Orbit<P> orbit;
  OrbitVerdict<P> verdict;

  bool converged() const { return std::holds_alternative<Converged<P>>(verdict); }
  bool diverging() const { return std::holds_alternative<Diverging>(verdict); }
};

template <Point P>
Scalar fixed_point_residual(const SelfMap<P>& f, const P& z) {
  return f.d(z, f(z));
}

/// Picard iteration with a three-way classification:
///  - Converged once the last `window` step distances are all below
///    tol_step, or immediately on a zero step (f(x) = x exactly);
///  - Diverging when a term/double-term pair past burn-in is farther apart
///    than the divergence threshold;
///  - Undetermined at max_iter (or on a stall, if enabled).
/// The verdict is a computational classification, not a proof.
///
/// `stop` sees the orbit after every step that reached no verdict and may
/// end the run as Undetermined by returning a reason.
template <Point P, class Stop>
OrbitResult<P> iterate(const SelfMap<P>& f, const P& x0, const StoppingPolicy& policy, Stop&& stop) {
  policy.validate();
  OrbitResult<P> result{Orbit<P>{{x0}, {}}, Undetermined{"max_iter reached", 0}};
  auto& points = result.orbit.points;
  auto& steps = result.orbit.step_distances;

  std::optional<Scalar> threshold = policy.divergence_threshold;
  const std::size_t burn_in = policy.effective_burn_in();
  std::optional<Scalar> best_step;
  std::size_t since_best = 0;

  for (std::size_t it = 1; it <= policy.max_iter; ++it) {
    P next = f(points.back());
    Scalar step = f.d(points.back(), next);
    points.push_back(std::move(next));
    steps.push_back(step);
    if (!threshold) threshold = Scalar(1000) * step;

    if (step.is_zero()) {
      result.verdict = Converged<P>{points.back(), fixed_point_residual(f, points.back()), it};
      return result;
    }
    if (steps.size() >= policy.window) {
      bool small = true;
      for (std::size_t k = steps.size() - policy.window; k < steps.size() && small; ++k) {
        small = steps[k] < policy.tol_step;
      }
      if (small) {
        result.verdict = Converged<P>{points.back(), fixed_point_residual(f, points.back()), it};
        return result;
      }
    }

    const std::size_t n = points.size() - 1;
    if (n % 2 == 1) {
      const std::size_t m = (n - 1) / 2;
      if (m > burn_in) {
        Scalar d = f.d(points[m], points[n]);
        if (d > *threshold) {
          result.verdict = Diverging{m, n, std::move(d), *threshold, it};
          return result;
        }
      }
    }

    if (policy.stall_window > 0) {
      if (!best_step || step < *best_step) {
        best_step = step;
        since_best = 0;
      } else if (++since_best >= policy.stall_window) {
        result.verdict = Undetermined{"step distances stalled above tolerance", it};
        return result;
      }
    }
    if (std::optional<std::string> reason = stop(std::as_const(points))) {
      result.verdict = Undetermined{std::move(*reason), it};
      return result;
    }
  }
  result.verdict = Undetermined{"max_iter reached", policy.max_iter};
  return result;
}

template <Point P>
OrbitResult<P> iterate(const SelfMap<P>& f, const P& x0, const StoppingPolicy& policy) {
  return iterate(f, x0, policy, [](const std::vector<P>&) { return std::optional<std::string>{}; });
}

// ---------------------------------------------------------------------------
// Orbital-continuity redundancy checks

struct RedundancyCheck {
  std::size_t index;
  Scalar lhs;       ///< d(f^{k+1}(x0), f(z))
  Scalar rhs;
  Scalar argument;
  bool holds;
};

enum class RedundancyStatus {
  AllHold,         ///< every per-index inequality satisfied
  SomeFail,        ///< at least one failed; the underlying condition fails too
  ReachedExactly,  ///< the orbit sits on z with f(z) = z
  Undetermined,    ///< no admissible index to check
};
const char* to_string(RedundancyStatus s);

struct RedundancyReport {
  RedundancyStatus status = RedundancyStatus::Undetermined;
  std::vector<RedundancyCheck> checks;
  std::size_t failures = 0;
  std::size_t degenerate = 0;
  Scalar residual;      ///< d(z, f(z))
  Scalar final_slack;   ///< d(f^N(x0), z) + d(f^N(x0), f^{N+1}(x0)) at the last checked N
  std::optional<std::size_t> final_index;
  /// Weighted variant: slack(N) / (1 - max{a, 1-a}).
  std::optional<Scalar> implied_residual_bound;
  /// Weighted variant: indices n where r <= max{a,1-a}·r + slack(n) fails.
  std::size_t limiting_failures = 0;
  /// Set when some per-index inequality fails, i.e. the hypothesis itself
  /// fails on the orbit and the implication has no force.
  bool advisory = false;
  std::string note;

  bool all_hold() const { return status == RedundancyStatus::AllHold || status == RedundancyStatus::ReachedExactly; }
};

namespace detail {

template <Point P>
std::optional<std::size_t> reached_exactly_from(const Orbit<P>& orbit, const P& z) {
  const auto& pts = orbit.points;
  if (pts.size() < 2 || !(pts[pts.size() - 1] == z) || !(pts[pts.size() - 2] == z)) return std::nullopt;
  std::size_t n0 = pts.size() - 1;
  while (n0 > 0 && pts[n0 - 1] == z) --n0;
  return n0;
}

}  // namespace detail

/// For each n checks
///   d(f^{n+1}(x0), f(z)) <= max{d(f^n(x0), z), a·s_n + (1-a)·r, (1-a)·s_n + a·r}
/// with s_n the step distance and r = d(z, f(z)), then the limiting bound
/// r <= max{a, 1-a}·r + slack(n).
template <Point P>
RedundancyReport verify_redundancy_weighted(const SelfMap<P>& f, const Orbit<P>& orbit, const Scalar& a,
                                            const P& z) {
  const ConditionKind kind = ConditionKind::bisht_weighted(a);
  if (orbit.points.empty()) throw std::invalid_argument("verify_redundancy_weighted: empty orbit");

  RedundancyReport report;
  const P fz = f(z);
  report.residual = f.d(z, fz);
  if (auto n0 = detail::reached_exactly_from(orbit, z); n0 && report.residual.is_zero()) {
    report.status = RedundancyStatus::ReachedExactly;
    report.note = "orbit reaches z at index " + std::to_string(*n0) + "; fixed point by construction";
    return report;
  }

  const Scalar m = max(a, Scalar(1) - a);
  const Scalar& r = report.residual;
  for (std::size_t n = 0; n + 1 < orbit.points.size(); ++n) {
    const Scalar d_nz = f.d(orbit.points[n], z);
    const Scalar& s_n = orbit.step_distances[n];
    Scalar argument = condition_argument(kind, d_nz, s_n, r);
    Scalar lhs = f.d(orbit.points[n + 1], fz);
    const bool holds = !(lhs > argument);
    report.checks.push_back({n, std::move(lhs), argument, argument, holds});
    if (!holds) ++report.failures;

    const Scalar slack = d_nz + s_n;
    if (r > m * r + slack) ++report.limiting_failures;
    report.final_slack = slack;
    report.final_index = n;
  }
  if (report.checks.empty()) {
    report.status = RedundancyStatus::Undetermined;
    report.note = "orbit has a single point; nothing to check";
    return report;
  }
  report.implied_residual_bound = report.final_slack / (Scalar(1) - m);
  report.advisory = report.failures > 0;
  report.status = report.failures == 0 ? RedundancyStatus::AllHold : RedundancyStatus::SomeFail;
  if (report.advisory) report.note = "the weighted condition fails on some orbit pair; bound is advisory";
  return report;
}

template <Point P>
RedundancyReport verify_redundancy_weighted(const SelfMap<P>& f, const Orbit<P>& orbit, const Scalar& a) {
  return verify_redundancy_weighted(f, orbit, a, orbit.last());
}

/// Selects indices k with f^k(x0) != z along which d(f^k(x0), z) strictly
/// decreases (greedy scan; at least two are required to count as a
/// decreasing subsequence) and checks
///   d(f^{k+1}(x0), f(z)) <= φ(max{d(f^k(x0), z), s_k, d(z, f(z))}).
template <Point P>
RedundancyReport verify_redundancy_max(const SelfMap<P>& f, const Orbit<P>& orbit, const ControlFunction& phi,
                                       const P& z) {
  if (orbit.points.empty()) throw std::invalid_argument("verify_redundancy_max: empty orbit");
  RedundancyReport report;
  const P fz = f(z);
  report.residual = f.d(z, fz);
  if (auto n0 = detail::reached_exactly_from(orbit, z); n0 && report.residual.is_zero()) {
    report.status = RedundancyStatus::ReachedExactly;
    report.note = "orbit reaches z at index " + std::to_string(*n0) + "; fixed point by construction";
    return report;
  }

  std::vector<std::size_t> chosen;
  std::optional<Scalar> last;
  for (std::size_t k = 0; k + 1 < orbit.points.size(); ++k) {
    if (orbit.points[k] == z) continue;
    Scalar dist = f.d(orbit.points[k], z);
    if (!last || dist < *last) {
      chosen.push_back(k);
      last = std::move(dist);
    }
  }
  if (chosen.size() < 2) {
    report.status = RedundancyStatus::Undetermined;
    report.note = "no decreasing subsequence toward z in the orbit";
    return report;
  }

  const ConditionKind kind = ConditionKind::bisht_max();
  for (std::size_t k : chosen) {
    const Scalar d_kz = f.d(orbit.points[k], z);
    const Scalar& s_k = orbit.step_distances[k];
    const Scalar argument = condition_argument(kind, d_kz, s_k, report.residual);
    if (argument.is_zero() && !phi.domain_includes_zero()) {
      ++report.degenerate;
      continue;
    }
    Scalar lhs = f.d(orbit.points[k + 1], fz);
    Scalar rhs = phi(argument);
    const bool holds = !(lhs > rhs);
    report.checks.push_back({k, std::move(lhs), std::move(rhs), argument, holds});
    if (!holds) ++report.failures;
    report.final_slack = d_kz + s_k;
    report.final_index = k;
  }
  report.advisory = report.failures > 0;
  if (report.checks.empty()) {
    report.status = RedundancyStatus::Undetermined;
    report.note = "every selected index was degenerate";
  } else {
    report.status = report.failures == 0 ? RedundancyStatus::AllHold : RedundancyStatus::SomeFail;
  }
  if (report.advisory) report.note = "the max condition fails on some orbit pair; bound is advisory";
  return report;
}

template <Point P>
RedundancyReport verify_redundancy_max(const SelfMap<P>& f, const Orbit<P>& orbit, const ControlFunction& phi) {
  return verify_redundancy_max(f, orbit, phi, orbit.last());
}

}  // namespace contractio
