#pragma once

#include <cstdint>
#include <string>

#include "contractio/conditions.hpp"
#include "contractio/metric.hpp"

namespace contractio::cases {

/// H_n = 1 + 1/2 + ... + 1/n, identified by its index. The exact value is
/// recomputed (and memoised) on demand.
struct HarmonicPoint {
  std::uint64_t n = 1;

  Rational value() const;
  bool operator==(const HarmonicPoint&) const = default;
};

/// Exact H_n. Throws DomainError for n = 0.
Rational harmonic_value(std::uint64_t n);
HarmonicPoint harmonic_point(std::uint64_t n);
/// H_n -> H_{n+1}.
HarmonicPoint harmonic_map(const HarmonicPoint& p);
/// |H_a - H_b|, exact.
Scalar harmonic_distance(const HarmonicPoint& a, const HarmonicPoint& b);

MetricSpace<HarmonicPoint> harmonic_space();
SelfMap<HarmonicPoint> harmonic_self_map();
/// φ(t) = t/(1+t), the control function paired with the harmonic map.
ControlFunction harmonic_phi();

struct RefutationReport {
  HarmonicPoint x;
  HarmonicPoint y;
  HarmonicPoint fx;
  HarmonicPoint fy;
  Scalar d_xy;   ///< 5/6
  Scalar lhs;    ///< d(f(x), f(y)) = 7/12
  Scalar rhs;    ///< φ(d(x, y)) = 5/11
  Scalar gap;    ///< lhs - rhs = 17/132
  bool violated = false;
  /// check_pair on the same pair produced the identical witness.
  bool cross_check_agrees = false;
  std::string verdict;  ///< "Violation" or "Holds"
};

/// Exact evaluation of the pair x = H_1, y = H_3 under the Ri condition with
/// φ(t) = t/(1+t). Internal disagreement throws std::logic_error.
RefutationReport refute_counterexample();

struct NonCauchyEvidence {
  std::uint64_t n = 0;
  std::uint64_t m = 0;  ///< 2n
  Rational difference;  ///< H_{2n} - H_n
  Rational bound;       ///< 1/2
};

/// Returns n = N+1 and m = 2n with H_{2n} - H_n >= 1/2, checked exactly
/// before returning. Throws std::invalid_argument for N = 0.
NonCauchyEvidence demonstrate_non_cauchy(std::uint64_t N);

// Reference maps on the real line (points are Scalars, d(x,y) = |x - y|).
MetricSpace<Scalar> real_line();
/// x -> x/2.
SelfMap<Scalar> half_map();
/// x -> k·x + c.
SelfMap<Scalar> affine_map(const Scalar& k, const Scalar& c);
/// x -> c.
SelfMap<Scalar> constant_map(const Scalar& c);

}  // namespace contractio::cases
