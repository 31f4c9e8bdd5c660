#include "contractio/case_studies.hpp"

#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace contractio::cases {

namespace {

/// Prefix sums H_0 = 0, H_1, H_2, ... grown on demand. Growth is idempotent,
/// so readers never observe a partially written entry.
class HarmonicCache {
 public:
  Rational get(std::uint64_t n) {
    {
      std::shared_lock lock(mutex_);
      if (n < sums_.size()) return sums_[n];
    }
    std::unique_lock lock(mutex_);
    while (sums_.size() <= n) {
      const auto k = static_cast<unsigned long>(sums_.size());
      sums_.push_back(sums_.back() + Rational(1, k));
    }
    return sums_[n];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<Rational> sums_{Rational(0)};
};

HarmonicCache& cache() {
  static HarmonicCache c;
  return c;
}

// Short gaps are summed directly; this keeps step distances cheap on long
// orbits without materialising every prefix sum.
constexpr std::uint64_t kDirectSumGap = 32;

}  // namespace

Rational HarmonicPoint::value() const { return harmonic_value(n); }

Rational harmonic_value(std::uint64_t n) {
  if (n == 0) throw DomainError("harmonic_value: n must be >= 1");
  return cache().get(n);
}

HarmonicPoint harmonic_point(std::uint64_t n) {
  if (n == 0) throw DomainError("harmonic_point: n must be >= 1");
  return HarmonicPoint{n};
}

HarmonicPoint harmonic_map(const HarmonicPoint& p) { return HarmonicPoint{p.n + 1}; }

Scalar harmonic_distance(const HarmonicPoint& a, const HarmonicPoint& b) {
  const std::uint64_t lo = std::min(a.n, b.n);
  const std::uint64_t hi = std::max(a.n, b.n);
  if (lo == 0) throw DomainError("harmonic_distance: index 0 is not in the carrier");
  if (hi - lo <= kDirectSumGap) {
    Rational sum(0);
    for (std::uint64_t k = lo + 1; k <= hi; ++k) sum += Rational(1, static_cast<unsigned long>(k));
    sum.canonicalize();
    return Scalar(sum);
  }
  return Scalar(harmonic_value(hi) - harmonic_value(lo));
}

MetricSpace<HarmonicPoint> harmonic_space() {
  return {"harmonic", harmonic_distance, [](const HarmonicPoint& p) { return p.n >= 1; }};
}

SelfMap<HarmonicPoint> harmonic_self_map() { return {harmonic_space(), "harmonic", harmonic_map}; }

ControlFunction harmonic_phi() { return ControlFunction::t_over_one_plus_t(); }

RefutationReport refute_counterexample() {
  const auto f = harmonic_self_map();
  const auto phi = harmonic_phi();

  RefutationReport r;
  r.x = harmonic_point(1);
  r.y = harmonic_point(3);
  r.fx = f(r.x);
  r.fy = f(r.y);
  r.d_xy = f.d(r.x, r.y);
  r.lhs = f.d(r.fx, r.fy);
  r.rhs = phi(r.d_xy);
  r.gap = r.lhs - r.rhs;
  r.violated = r.lhs > r.rhs;
  r.verdict = r.violated ? "Violation" : "Holds";

  const auto outcome = check_pair(f, phi, ConditionKind::ri(), r.x, r.y);
  const auto* w = std::get_if<ViolationWitness<HarmonicPoint>>(&outcome);
  r.cross_check_agrees = (w != nullptr) == r.violated && w != nullptr && w->lhs.identical(r.lhs) &&
                         w->rhs.identical(r.rhs) && w->gap.identical(r.gap) && w->argument.identical(r.d_xy);
  if (!r.cross_check_agrees) throw std::logic_error("refute_counterexample: check_pair disagrees");
  if (!r.lhs.is_exact() || !r.rhs.is_exact()) throw std::logic_error("refute_counterexample: lost exactness");
  return r;
}

NonCauchyEvidence demonstrate_non_cauchy(std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("demonstrate_non_cauchy: N must be >= 1");
  NonCauchyEvidence e;
  e.n = N + 1;
  e.m = 2 * e.n;
  e.difference = harmonic_distance(HarmonicPoint{e.n}, HarmonicPoint{e.m}).rational();
  e.bound = Rational(1, 2);
  if (e.difference < e.bound) throw std::logic_error("demonstrate_non_cauchy: H_2n - H_n < 1/2");
  return e;
}

MetricSpace<Scalar> real_line() {
  return {"real-line", [](const Scalar& x, const Scalar& y) { return abs(x - y); }, {}};
}

SelfMap<Scalar> half_map() {
  return {real_line(), "half", [](const Scalar& x) {
            return x.is_exact() ? x / Scalar(2) : Scalar::real(x.to_double() / 2.0);
          }};
}

SelfMap<Scalar> affine_map(const Scalar& k, const Scalar& c) {
  return {real_line(), "affine:" + k.to_string() + ":" + c.to_string(),
          [k, c](const Scalar& x) { return k * x + c; }};
}

SelfMap<Scalar> constant_map(const Scalar& c) {
  return {real_line(), "constant:" + c.to_string(), [c](const Scalar&) { return c; }};
}

}  // namespace contractio::cases
