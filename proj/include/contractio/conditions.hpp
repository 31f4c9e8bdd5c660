#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "contractio/metric.hpp"
#include "contractio/parallel.hpp"

namespace contractio {

/// Which right-hand side a contraction inequality uses.
///
///   Ri              d(fx,fy) <= φ(d(x,y))
///   BishtWeighted a d(fx,fy) <= φ(max{d(x,y), a·d(x,fx)+(1-a)·d(y,fy),
///                                         (1-a)·d(x,fx)+a·d(y,fy)})
///   BishtMax        d(fx,fy) <= φ(max{d(x,y), d(x,fx), d(y,fy)})
class ConditionKind {
 public:
  enum class Variant { Ri, BishtWeighted, BishtMax };

  static ConditionKind ri() { return ConditionKind(Variant::Ri, Scalar(0)); }
  static ConditionKind bisht_max() { return ConditionKind(Variant::BishtMax, Scalar(0)); }
  /// Throws std::invalid_argument unless 0 < a < 1.
  static ConditionKind bisht_weighted(const Scalar& a);

  Variant variant() const { return variant_; }
  /// The weight a; only meaningful for BishtWeighted.
  const Scalar& weight() const { return weight_; }
  bool needs_self_distances() const { return variant_ != Variant::Ri; }
  std::string name() const;

 private:
  ConditionKind(Variant v, Scalar a) : variant_(v), weight_(std::move(a)) {}
  Variant variant_;
  Scalar weight_;
};

Scalar condition_argument(const ConditionKind& kind, const Scalar& d_xy, const Scalar& d_xfx,
                          const Scalar& d_yfy);

template <Point P>
struct ViolationWitness {
  P x;
  P y;
  Scalar lhs;       ///< d(f(x), f(y))
  Scalar rhs;       ///< φ(argument)
  Scalar argument;
  Scalar gap;       ///< lhs - rhs > 0
};

struct PairPass {
  Scalar lhs;
  Scalar rhs;
  Scalar argument;
};

template <Point P>
using PairOutcome = std::variant<PairPass, ViolationWitness<P>>;

template <Point P>
bool is_violation(const PairOutcome<P>& o) {
  return std::holds_alternative<ViolationWitness<P>>(o);
}

/// Evaluates one instance of the inequality. Exact whenever every distance
/// and φ value is an exact rational.
///
/// Throws DegeneratePair when φ excludes 0 and either x == y or the
/// condition argument is 0.
template <Point P>
PairOutcome<P> check_pair(const SelfMap<P>& f, const ControlFunction& phi, const ConditionKind& kind,
                          const P& x, const P& y) {
  if (!phi.domain_includes_zero() && x == y) {
    throw DegeneratePair("check_pair: x == y while phi is undefined at 0");
  }
  const P fx = f(x);
  const P fy = f(y);
  const Scalar d_xy = f.d(x, y);
  Scalar d_xfx, d_yfy;
  if (kind.needs_self_distances()) {
    d_xfx = f.d(x, fx);
    d_yfy = f.d(y, fy);
  }
  const Scalar argument = condition_argument(kind, d_xy, d_xfx, d_yfy);
  if (argument.is_zero() && !phi.domain_includes_zero()) {
    throw DegeneratePair("check_pair: condition argument is 0 while phi is undefined at 0");
  }
  Scalar lhs = f.d(fx, fy);
  Scalar rhs = phi(argument);
  if (lhs > rhs) {
    Scalar gap = lhs - rhs;
    return ViolationWitness<P>{x, y, std::move(lhs), std::move(rhs), argument, std::move(gap)};
  }
  return PairPass{std::move(lhs), std::move(rhs), argument};
}

// ---------------------------------------------------------------------------
// Pair sources

/// A deterministic, finite stream of candidate pairs. `draw(budget)` returns
/// at most `budget` pairs, always the same ones for the same budget.
template <Point P>
struct PairSource {
  std::string name;
  std::function<std::vector<std::pair<P, P>>(std::size_t budget)> draw;
};

/// All pairs (points[i], points[j]) with i < j, row-major.
template <Point P>
PairSource<P> exhaustive_pairs(std::vector<P> points) {
  return {"exhaustive", [points = std::move(points)](std::size_t budget) {
            std::vector<std::pair<P, P>> out;
            for (std::size_t i = 0; i < points.size() && out.size() < budget; ++i) {
              for (std::size_t j = i + 1; j < points.size() && out.size() < budget; ++j) {
                out.emplace_back(points[i], points[j]);
              }
            }
            return out;
          }};
}

/// (points[i], points[i+1]).
template <Point P>
PairSource<P> consecutive_pairs(std::vector<P> points) {
  return {"consecutive", [points = std::move(points)](std::size_t budget) {
            std::vector<std::pair<P, P>> out;
            for (std::size_t i = 0; i + 1 < points.size() && out.size() < budget; ++i) {
              out.emplace_back(points[i], points[i + 1]);
            }
            return out;
          }};
}

template <Point P>
PairSource<P> explicit_pairs(std::vector<std::pair<P, P>> pairs) {
  return {"explicit", [pairs = std::move(pairs)](std::size_t budget) {
            return std::vector<std::pair<P, P>>(pairs.begin(),
                                                pairs.begin() + std::min(budget, pairs.size()));
          }};
}

/// `budget` pairs drawn from `generate`, seeded with mt19937_64(seed).
template <Point P>
PairSource<P> random_pairs(std::function<P(std::mt19937_64&)> generate, std::uint64_t seed) {
  return {"random", [generate = std::move(generate), seed](std::size_t budget) {
            std::mt19937_64 rng(seed);
            std::vector<std::pair<P, P>> out;
            out.reserve(budget);
            for (std::size_t i = 0; i < budget; ++i) {
              P x = generate(rng);
              P y = generate(rng);
              out.emplace_back(std::move(x), std::move(y));
            }
            return out;
          }};
}

// ---------------------------------------------------------------------------
// Falsification

template <Point P>
struct PairRecord {
  std::size_t index;  ///< position in the sampler's stream
  P x;
  P y;
  /// Empty when the pair was degenerate.
  std::optional<PairOutcome<P>> outcome;
};

template <Point P>
struct FalsifyReport {
  std::string sampler;
  std::size_t pairs_checked = 0;
  std::size_t passes = 0;
  std::size_t degenerate = 0;
  /// Sorted by descending gap, then by sampler order. Empty means "nothing
  /// found within budget", never "condition proved".
  std::vector<ViolationWitness<P>> witnesses;
  std::vector<std::size_t> witness_indices;
  std::vector<PairRecord<P>> records;
};

template <Point P>
FalsifyReport<P> falsify(const SelfMap<P>& f, const ControlFunction& phi, const ConditionKind& kind,
                         const PairSource<P>& sampler, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("falsify: budget must be >= 1");
  const auto pairs = sampler.draw(budget);

  std::vector<std::optional<PairOutcome<P>>> outcomes(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        outcomes[i] = check_pair(f, phi, kind, pairs[i].first, pairs[i].second);
      } catch (const DegeneratePair&) {
        outcomes[i].reset();
      }
    }
  });

  FalsifyReport<P> report;
  report.sampler = sampler.name;
  report.pairs_checked = pairs.size();
  std::vector<std::size_t> hits;
  report.records.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!outcomes[i]) {
      ++report.degenerate;
    } else if (is_violation<P>(*outcomes[i])) {
      hits.push_back(i);
    } else {
      ++report.passes;
    }
    report.records.push_back(PairRecord<P>{i, pairs[i].first, pairs[i].second, outcomes[i]});
  }
  std::stable_sort(hits.begin(), hits.end(), [&](std::size_t a, std::size_t b) {
    const auto& ga = std::get<ViolationWitness<P>>(*outcomes[a]).gap;
    const auto& gb = std::get<ViolationWitness<P>>(*outcomes[b]).gap;
    if (ga > gb) return true;
    if (gb > ga) return false;
    return a < b;
  });
  for (std::size_t i : hits) {
    report.witnesses.push_back(std::get<ViolationWitness<P>>(*outcomes[i]));
    report.witness_indices.push_back(i);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Orbit-restricted check

template <Point P>
struct OrbitConditionReport {
  std::size_t orbit_length = 0;     ///< n_max + 1 computed points
  std::size_t distinct_points = 0;
  std::size_t pairs_checked = 0;
  std::size_t passes = 0;
  std::size_t degenerate = 0;
  std::vector<ViolationWitness<P>> violations;
  std::string note;
};

/// Checks every pair of distinct points among {x0, f(x0), ..., f^n_max(x0)},
/// the computable part of the orbit closure.
template <Point P>
OrbitConditionReport<P> verify_on_orbit(const SelfMap<P>& f, const ControlFunction& phi,
                                        const ConditionKind& kind, const P& x0, std::size_t n_max) {
  if (n_max == 0) throw std::invalid_argument("verify_on_orbit: n_max must be >= 1");
  std::vector<P> points{x0};
  for (std::size_t n = 0; n < n_max; ++n) points.push_back(f(points.back()));

  std::vector<P> distinct;
  for (const P& p : points) {
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  }

  OrbitConditionReport<P> report;
  report.orbit_length = points.size();
  report.distinct_points = distinct.size();
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      try {
        auto outcome = check_pair(f, phi, kind, distinct[i], distinct[j]);
        ++report.pairs_checked;
        if (auto* w = std::get_if<ViolationWitness<P>>(&outcome)) {
          report.violations.push_back(std::move(*w));
        } else {
          ++report.passes;
        }
      } catch (const DegeneratePair&) {
        ++report.degenerate;
      }
    }
  }
  if (distinct.size() < 2) {
    report.note = "orbit collapses to a single point; no pairs of distinct points to check";
  }
  return report;
}

}  // namespace contractio
