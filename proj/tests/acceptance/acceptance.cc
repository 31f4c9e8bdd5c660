// One line per acceptance criterion: "AC<n> PASS|FAIL <ms> ms  <detail>".
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "contractio/case_studies.hpp"
#include "contractio/conditions.hpp"
#include "contractio/fractal.hpp"
#include "contractio/orbit.hpp"

using namespace contractio;
using cases::HarmonicPoint;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Rational oracle_harmonic(unsigned long n) {
  Rational s(0);
  for (unsigned long k = 1; k <= n; ++k) s += Rational(1, k);
  s.canonicalize();
  return s;
}

Outcome refutation() {
  const auto start = Clock::now();
  const auto r = cases::refute_counterexample();
  const double ms = ms_since(start);
  const bool lhs = r.lhs.is_exact() && r.lhs.rational() == Rational(7, 12);
  const bool rhs = r.rhs.is_exact() && r.rhs.rational() == Rational(5, 11);
  const bool gap = r.gap.is_exact() && r.gap.rational() == Rational(29, 132);
  const bool pass = lhs && rhs && gap && r.verdict == "Violation" && ms < 1.0;
  std::ostringstream d;
  d << "lhs=" << r.lhs << " rhs=" << r.rhs << " gap=" << r.gap << " (required 29/132) verdict=" << r.verdict
    << " t=" << ms << "ms";
  return {pass, d.str()};
}

Outcome harmonic_divergence() {
  const auto start = Clock::now();
  StoppingPolicy p;
  p.max_iter = 10000;
  p.divergence_threshold = Scalar::exact(1, 2);
  const auto r = iterate(cases::harmonic_self_map(), HarmonicPoint{1}, p);
  const double ms = ms_since(start);
  const auto* d = std::get_if<Diverging>(&r.verdict);
  if (!d) return {false, "verdict is not Diverging"};
  const std::uint64_t n = r.orbit.points[d->m].n;
  const std::uint64_t m = r.orbit.points[d->n].n;
  const Rational diff = oracle_harmonic(m) - oracle_harmonic(n);
  const bool pass = m == 2 * n && diff >= Rational(1, 2) && d->distance.is_exact() &&
                    d->distance.rational() == diff && d->iterations <= 10000 && ms < 1000.0;
  std::ostringstream s;
  s << "evidence (H_" << n << ", H_" << m << ") difference~" << diff.get_d() << " after " << d->iterations
    << " steps, t=" << ms << "ms";
  return {pass, s.str()};
}

Outcome falsifier_completeness() {
  const auto start = Clock::now();
  std::vector<HarmonicPoint> pts;
  for (std::uint64_t n = 1; n <= 10; ++n) pts.push_back({n});
  const auto report = falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                              exhaustive_pairs(pts), 45);
  std::set<std::pair<std::uint64_t, std::uint64_t>> found, oracle;
  for (const auto& w : report.witnesses) found.insert({w.x.n, w.y.n});
  for (unsigned long i = 1; i <= 10; ++i) {
    for (unsigned long j = i + 1; j <= 10; ++j) {
      const Rational t = oracle_harmonic(j) - oracle_harmonic(i);
      if (oracle_harmonic(j + 1) - oracle_harmonic(i + 1) > t / (1 + t)) oracle.insert({i, j});
    }
  }
  const double ms = ms_since(start);
  const bool pass = !found.empty() && found.count({1, 3}) && found == oracle && ms < 1000.0;
  std::ostringstream s;
  s << found.size() << " witnesses, oracle " << oracle.size() << ", (H1,H3) "
    << (found.count({1, 3}) ? "present" : "missing") << ", t=" << ms << "ms";
  return {pass, s.str()};
}

Outcome genuine_contraction() {
  const auto start = Clock::now();
  const auto f = cases::half_map();
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 1000);
  const auto sampler = random_pairs<Scalar>(
      [num, den](std::mt19937_64& rng) mutable { return Scalar::exact(num(rng), den(rng)); }, 20240601);
  const auto rep = falsify(f, ControlFunction::ratio(Scalar::exact(1, 2)), ConditionKind::ri(), sampler, 10000);

  const auto conv = iterate(f, Scalar(1), StoppingPolicy{});
  const auto* c = std::get_if<Converged<Scalar>>(&conv.verdict);

  StoppingPolicy p;
  p.max_iter = 60;
  p.tol_step = Scalar(Rational(1, 1) / Rational(mpz_class(1) << 80));
  const auto steps = iterate(f, Scalar(1), p).orbit.step_distances;
  bool ratio_ok = steps.size() == 60;
  for (std::size_t n = 0; ratio_ok && n + 1 < steps.size(); ++n) {
    const Scalar q = steps[n + 1] / steps[n];
    ratio_ok = q.is_exact() && q.rational() == Rational(1, 2);
  }
  const double ms = ms_since(start);
  const bool pass = rep.pairs_checked == 10000 && rep.witnesses.empty() && c &&
                    c->residual < Scalar::real(1e-10) && ratio_ok && ms < 1000.0;
  std::ostringstream s;
  s << rep.witnesses.size() << " violations in " << rep.pairs_checked << " pairs, residual "
    << (c ? c->residual.to_double() : NAN) << ", exact ratio 1/2 over " << steps.size() << " steps: "
    << (ratio_ok ? "yes" : "no") << ", t=" << ms << "ms";
  return {pass, s.str()};
}

Outcome redundancy() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> kp(1, 18), cn(-40, 40), xn(-200, 200);
  std::bernoulli_distribution flip(0.5);
  int ok_cases = 0;
  std::string first_failure;
  for (int trial = 0; trial < 100; ++trial) {
    const Scalar k = Scalar::exact(flip(rng) ? kp(rng) : -kp(rng), 20);
    const auto f = cases::affine_map(k, Scalar::exact(cn(rng), 3));
    const auto phi = ControlFunction::ratio(abs(k));
    const Scalar x0 = Scalar::exact(xn(rng), 7);

    // Precondition: no condition violation on the orbit for any kind used.
    bool pre = true;
    for (const auto& kind : {ConditionKind::bisht_max(), ConditionKind::bisht_weighted(Scalar::exact(1, 4)),
                             ConditionKind::bisht_weighted(Scalar::exact(1, 2)),
                             ConditionKind::bisht_weighted(Scalar::exact(3, 4))}) {
      pre = pre && verify_on_orbit(f, phi, kind, x0, 12).violations.empty();
    }

    const auto run = iterate(f, x0, StoppingPolicy{});
    const auto* c = std::get_if<Converged<Scalar>>(&run.verdict);
    bool ok = pre && c && c->residual < Scalar::real(1e-8);
    if (ok) {
      for (long a : {1L, 2L, 3L}) {
        const auto rep = verify_redundancy_weighted(f, run.orbit, Scalar::exact(a, 4));
        ok = ok && rep.status == RedundancyStatus::AllHold && !(rep.residual > Scalar(2) * rep.final_slack);
      }
      const auto rep = verify_redundancy_max(f, run.orbit, phi);
      ok = ok && rep.status == RedundancyStatus::AllHold && !(rep.residual > Scalar(2) * rep.final_slack);
    }
    if (ok) {
      ++ok_cases;
    } else if (first_failure.empty()) {
      first_failure = " first failure: trial " + std::to_string(trial) + " k=" + k.to_string();
    }
  }
  const double ms = ms_since(start);
  std::ostringstream s;
  s << ok_cases << "/100 cases hold," << first_failure << " t=" << ms << "ms";
  return {ok_cases == 100 && ms < 10000.0, s.str()};
}

double oracle_directed(const fractal::CompactSet& a, const fractal::CompactSet& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = INFINITY;
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const double t = a.point(i)[k] - b.point(j)[k];
        s += t * t;
      }
      best = std::min(best, s);
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

Outcome hausdorff_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::size_t> size(1, 500), dim(1, 3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = dim(rng);
    auto make = [&] {
      std::vector<double> c(d * size(rng));
      for (double& v : c) v = u(rng);
      return fractal::CompactSet(d, 0.0, std::move(c));
    };
    const auto a = make();
    const auto b = make();
    const double pruned = fractal::hausdorff_distance(a, b, fractal::HausdorffMethod::Indexed).to_double();
    const double brute = fractal::hausdorff_distance(a, b, fractal::HausdorffMethod::BruteForce).to_double();
    const double oracle = std::max(oracle_directed(a, b), oracle_directed(b, a));
    if (pruned == brute && brute == oracle) ++agree;
  }
  const double ms = ms_since(start);
  std::ostringstream s;
  s << agree << "/200 pairs identical, t=" << ms << "ms";
  return {agree == 200 && ms < 10000.0, s.str()};
}

Outcome sierpinski() {
  using namespace fractal;
  const auto start = Clock::now();
  const double eps = std::ldexp(1.0, -7);
  const auto ifs = IFS::sierpinski();
  const StoppingPolicy policy;
  const auto a = attractor(ifs, CompactSet::from_points(2, eps, {{0, 0}}), policy);
  const auto b = attractor(ifs, CompactSet::from_points(2, eps, {{1, 0}, {0, 1}}), policy);

  // Grid snapping perturbs each image set by at most ε per side, so the
  // halving is checked as s_{n+1} <= s_n/2 + 4ε.
  bool halving = true;
  double worst_ratio = 0.0;
  for (const auto* r : {&a, &b}) {
    const auto& s = r->step_distances;
    for (std::size_t n = 0; n + 1 < s.size(); ++n) {
      halving = halving && s[n + 1].to_double() <= 0.5 * s[n].to_double() + 4 * eps;
      if (s[n].to_double() > 0) worst_ratio = std::max(worst_ratio, s[n + 1].to_double() / s[n].to_double());
    }
  }
  const double gap = a.converged() && b.converged() ? hausdorff_distance(a.set, b.set).to_double() : INFINITY;
  const double slope = a.converged() ? box_count_slope(a.set, eps, 5) : NAN;
  const double ms = ms_since(start);
  const bool pass = a.converged() && b.converged() && halving &&
                    gap <= 2 * policy.tol_step.to_double() + 4 * eps && slope >= 1.4 && slope <= 1.8 &&
                    ms < 30000.0;
  std::ostringstream s;
  s << "converged " << a.converged() << "/" << b.converged() << " in " << a.iterations << "/" << b.iterations
    << " steps, halving+4eps " << (halving ? "holds" : "fails") << " (max raw ratio " << worst_ratio
    << "), seed gap " << gap << ", box slope " << slope << ", " << a.set.size() << " points, t=" << ms << "ms";
  return {pass, s.str()};
}

Outcome dominance() {
  const auto start = Clock::now();
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> mag(0.1);
  std::vector<ConditionKind> weighted;
  for (int k = 1; k <= 9; ++k) weighted.push_back(ConditionKind::bisht_weighted(Scalar::real(k / 10.0)));
  const auto ri = ConditionKind::ri();
  const auto mx = ConditionKind::bisht_max();
  long violations = 0, checks = 0;
  for (int i = 0; i < 100000; ++i) {
    const Scalar dxy = Scalar::real(mag(rng)), dx = Scalar::real(mag(rng)), dy = Scalar::real(mag(rng));
    const Scalar lo = condition_argument(ri, dxy, dx, dy);
    const Scalar hi = condition_argument(mx, dxy, dx, dy);
    for (const auto& kind : weighted) {
      const Scalar w = condition_argument(kind, dxy, dx, dy);
      ++checks;
      if (lo > w || w > hi) ++violations;
    }
  }
  const double ms = ms_since(start);
  std::ostringstream s;
  s << violations << " ordering failures in " << checks << " comparisons, t=" << ms << "ms";
  return {violations == 0 && ms < 1000.0, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 exact refutation", refutation},
      {"AC2 harmonic orbit diverges", harmonic_divergence},
      {"AC3 falsifier completeness", falsifier_completeness},
      {"AC4 genuine contraction", genuine_contraction},
      {"AC5 redundancy verifiers", redundancy},
      {"AC6 Hausdorff oracle equivalence", hausdorff_equivalence},
      {"AC7 Sierpinski attractor", sierpinski},
      {"AC8 argument dominance", dominance},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
