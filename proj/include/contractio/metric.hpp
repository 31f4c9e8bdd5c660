#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "contractio/errors.hpp"
#include "contractio/scalar.hpp"

namespace contractio {

template <class P>
concept Point = std::copyable<P> && std::equality_comparable<P>;

/// A carrier of opaque points with a distance function. Membership is
/// checkable only when `contains` is set.
template <Point P>
struct MetricSpace {
  std::string name;
  std::function<Scalar(const P&, const P&)> distance;
  std::function<bool(const P&)> contains;

  Scalar operator()(const P& x, const P& y) const { return distance(x, y); }
  bool membership_decidable() const { return static_cast<bool>(contains); }
};

/// f : X -> X over a metric space. Application verifies that the argument
/// and the image lie in the carrier whenever membership is decidable.
template <Point P>
struct SelfMap {
  MetricSpace<P> space;
  std::string name;
  std::function<P(const P&)> fn;

  P operator()(const P& x) const {
    if (space.membership_decidable() && !space.contains(x)) {
      throw DomainError(name + ": argument outside the carrier of " + space.name);
    }
    P y = fn(x);
    if (space.membership_decidable() && !space.contains(y)) {
      throw DomainError(name + ": image leaves the carrier of " + space.name);
    }
    return y;
  }
  Scalar d(const P& x, const P& y) const { return space.distance(x, y); }
};

/// The control function φ. When the domain excludes zero, evaluating at 0
/// is a DomainError; negative arguments are always a DomainError.
class ControlFunction {
 public:
  using Fn = std::function<Scalar(const Scalar&)>;

  /// Throws std::invalid_argument if the domain includes zero and φ(0) != 0.
  ControlFunction(std::string name, Fn fn, bool domain_includes_zero, bool nondecreasing = false);

  Scalar operator()(const Scalar& t) const;

  const std::string& name() const { return name_; }
  bool domain_includes_zero() const { return includes_zero_; }
  /// Caller-asserted monotonicity, required by the hyperspace lift.
  bool nondecreasing() const { return nondecreasing_; }

  /// φ(t) = k·t.
  static ControlFunction ratio(const Scalar& k, bool domain_includes_zero = true);
  /// φ(t) = t/(1+t).
  static ControlFunction t_over_one_plus_t(bool domain_includes_zero = true);
  /// Piecewise-linear interpolation through (t, φ(t)) knots sorted by t;
  /// beyond the last knot the final segment is extended. The domain includes
  /// zero iff the first knot is at t = 0.
  static ControlFunction table(std::vector<std::pair<Scalar, Scalar>> knots);

 private:
  std::string name_;
  Fn fn_;
  bool includes_zero_;
  bool nondecreasing_;
};

// ---------------------------------------------------------------------------
// Metric axioms on a finite sample

enum class Axiom { Identity, Symmetry, NonNegativity, Indiscernibility, Triangle };
const char* to_string(Axiom a);

template <Point P>
struct AxiomViolation {
  Axiom axiom;
  /// Identity: {x}. Symmetry, non-negativity, indiscernibility: {x, y}.
  /// Triangle: {x, z, y} with d(x,z) > d(x,y) + d(y,z).
  std::vector<P> witness;
  Scalar lhs;
  Scalar rhs;
};

template <Point P>
struct AxiomReport {
  std::size_t samples = 0;
  std::optional<AxiomViolation<P>> violation;
  bool all_hold() const { return !violation.has_value(); }
};

/// Relative slack applied to Float64 comparisons only; exact distances are
/// compared with zero tolerance.
struct AxiomTolerance {
  double relative = 1e-12;
};

namespace detail {

inline bool exceeds(const Scalar& lhs, const Scalar& rhs, const AxiomTolerance& tol) {
  if (lhs.is_exact() && rhs.is_exact()) return lhs > rhs;
  const double scale = std::max(std::abs(lhs.to_double()), std::abs(rhs.to_double()));
  return lhs.to_double() > rhs.to_double() + tol.relative * scale;
}

}  // namespace detail

/// Checks identity, symmetry, non-negativity, indiscernibility and the
/// triangle inequality, in that order, over all sample tuples; reports the
/// first violation found.
template <Point P>
AxiomReport<P> validate_metric_axioms(const MetricSpace<P>& space, const std::vector<P>& samples,
                                      AxiomTolerance tol = {}) {
  if (samples.empty()) throw std::invalid_argument("validate_metric_axioms: empty sample");
  AxiomReport<P> report;
  report.samples = samples.size();
  const std::size_t n = samples.size();

  std::vector<Scalar> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = space.distance(samples[i], samples[j]);
  }
  auto d = [&](std::size_t i, std::size_t j) -> const Scalar& { return dist[i * n + j]; };

  for (std::size_t i = 0; i < n; ++i) {
    if (!d(i, i).is_zero()) {
      report.violation = AxiomViolation<P>{Axiom::Identity, {samples[i]}, d(i, i), Scalar(0)};
      return report;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (detail::exceeds(d(i, j), d(j, i), tol) || detail::exceeds(d(j, i), d(i, j), tol)) {
        report.violation = AxiomViolation<P>{Axiom::Symmetry, {samples[i], samples[j]}, d(i, j), d(j, i)};
        return report;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j).sign() < 0) {
        report.violation =
            AxiomViolation<P>{Axiom::NonNegativity, {samples[i], samples[j]}, d(i, j), Scalar(0)};
        return report;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && d(i, j).is_zero() && !(samples[i] == samples[j])) {
        report.violation =
            AxiomViolation<P>{Axiom::Indiscernibility, {samples[i], samples[j]}, d(i, j), Scalar(0)};
        return report;
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) {
        const Scalar via = d(x, y) + d(y, z);
        if (detail::exceeds(d(x, z), via, tol)) {
          report.violation =
              AxiomViolation<P>{Axiom::Triangle, {samples[x], samples[z], samples[y]}, d(x, z), via};
          return report;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Hypotheses on φ

struct PhiWitness {
  enum class Kind {
    NotBelowIdentity,   ///< φ(t) >= t
    CodomainViolation,  ///< φ(t) < 0, or φ(t) = 0 when the codomain is (0, ∞)
  };
  Kind kind;
  Scalar t;
  Scalar phi_t;
};

/// Returns the first sample with φ(t) >= t or φ(t) outside the codomain.
/// Throws DomainError for t = 0 when φ excludes 0, std::invalid_argument for
/// any other non-positive sample.
std::optional<PhiWitness> check_phi_below_identity(const ControlFunction& phi,
                                                   const std::vector<Scalar>& t_samples);

enum class SamplingMode { Grid, SeededRandom };

/// Windows (t, t + δ_k] with δ_0 > δ_1 > ... > δ_K > 0.
struct LimsupSchedule {
  std::vector<Scalar> widths;
  std::vector<std::size_t> samples_per_window;
  SamplingMode mode = SamplingMode::Grid;
  std::uint64_t seed = 0;

  /// δ_k = δ_0·2^-k for k = 0..levels, 64 grid points per window,
  /// δ_0 = max(t/10, 1/1000).
  static LimsupSchedule standard(const Scalar& t, std::size_t levels = 8, std::size_t per_window = 64);
  void validate() const;
};

struct LimsupEstimate {
  enum class Verdict { SatisfiedOnSamples, ViolatedWithWitness };
  Scalar t;
  /// sup of φ over every sampled point in (t, t + δ_k], one entry per window.
  std::vector<Scalar> window_sup;
  Scalar final_estimate;
  Verdict verdict = Verdict::SatisfiedOnSamples;
  std::optional<Scalar> witness;  ///< a sampled s with φ(s) >= t
  std::size_t evaluations = 0;
};

/// Sample-based estimate of limsup_{s -> t+} φ(s). Every window's estimate
/// is taken over the union of all samples lying inside it, so the estimates
/// are non-increasing as the window shrinks.
LimsupEstimate estimate_limsup_right(const ControlFunction& phi, const Scalar& t,
                                     const LimsupSchedule& schedule);

}  // namespace contractio
