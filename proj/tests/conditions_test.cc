#include <random>
#include <set>

#include <gtest/gtest.h>

#include "contractio/case_studies.hpp"
#include "contractio/conditions.hpp"
#include "contractio/parallel.hpp"

using namespace contractio;
using cases::HarmonicPoint;

namespace {

// Independent of the library's harmonic cache: plain term-by-term sums.
Rational oracle_harmonic(unsigned long n) {
  Rational s(0);
  for (unsigned long k = 1; k <= n; ++k) s += Rational(1, k);
  s.canonicalize();
  return s;
}

Scalar random_nonnegative(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(0, 1000);
  std::uniform_int_distribution<long> den(1, 97);
  return Scalar::exact(num(rng), den(rng));
}

}  // namespace

TEST(ConditionArgument, Examples) {
  EXPECT_EQ(condition_argument(ConditionKind::ri(), Scalar::exact(5, 6), Scalar(9), Scalar(9)),
            Scalar::exact(5, 6));
  EXPECT_EQ(condition_argument(ConditionKind::bisht_max(), Scalar(3), Scalar(1), Scalar(2)), Scalar(3));
  EXPECT_EQ(condition_argument(ConditionKind::bisht_weighted(Scalar::exact(1, 2)), Scalar(1), Scalar(4), Scalar(2)),
            Scalar(3));
}

TEST(ConditionKindTest, WeightMustBeStrictlyBetweenZeroAndOne) {
  EXPECT_THROW(ConditionKind::bisht_weighted(Scalar(1)), std::invalid_argument);
  EXPECT_THROW(ConditionKind::bisht_weighted(Scalar(0)), std::invalid_argument);
  EXPECT_NO_THROW(ConditionKind::bisht_weighted(Scalar::exact(1, 4)));
  EXPECT_EQ(ConditionKind::bisht_weighted(Scalar::exact(1, 4)).name(), "bisht-weighted(a=1/4)");
}

TEST(CheckPair, HarmonicRefutationWitness) {
  const auto outcome = check_pair(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                                  HarmonicPoint{1}, HarmonicPoint{3});
  const auto* w = std::get_if<ViolationWitness<HarmonicPoint>>(&outcome);
  ASSERT_NE(w, nullptr);
  EXPECT_EQ(w->lhs.rational(), Rational(7, 12));
  EXPECT_EQ(w->rhs.rational(), Rational(5, 11));
  EXPECT_EQ(w->argument.rational(), Rational(5, 6));
  EXPECT_EQ(w->gap.rational(), Rational(17, 132));
}

TEST(CheckPair, HalfMapWithSaturatingPhiPassesAtUnitDistance) {
  const auto outcome = check_pair(cases::half_map(), ControlFunction::t_over_one_plus_t(), ConditionKind::ri(),
                                  Scalar(0), Scalar(1));
  const auto* pass = std::get_if<PairPass>(&outcome);
  ASSERT_NE(pass, nullptr);
  EXPECT_EQ(pass->lhs, Scalar::exact(1, 2));
  EXPECT_EQ(pass->rhs, Scalar::exact(1, 2));
}

TEST(CheckPair, EqualPointsPassWhenZeroInDomain) {
  const auto outcome = check_pair(cases::half_map(), ControlFunction::t_over_one_plus_t(), ConditionKind::ri(),
                                  Scalar(3), Scalar(3));
  const auto* pass = std::get_if<PairPass>(&outcome);
  ASSERT_NE(pass, nullptr);
  EXPECT_TRUE(pass->lhs.is_zero());
  EXPECT_TRUE(pass->rhs.is_zero());
}

TEST(CheckPair, ZeroArgumentOutsideDomainIsDegenerate) {
  const auto phi = ControlFunction::ratio(Scalar::exact(1, 2), false);
  EXPECT_THROW(check_pair(cases::half_map(), phi, ConditionKind::ri(), Scalar(3), Scalar(3)), DegeneratePair);
  // Distinct points give a positive argument.
  EXPECT_NO_THROW(check_pair(cases::half_map(), phi, ConditionKind::bisht_max(), Scalar(0), Scalar(1)));
}

TEST(Falsify, HarmonicExhaustiveMatchesDoubleLoopOracle) {
  std::vector<HarmonicPoint> pts;
  for (std::uint64_t n = 1; n <= 10; ++n) pts.push_back({n});
  const auto report = falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                              exhaustive_pairs(pts), 1000);
  EXPECT_EQ(report.pairs_checked, 45u);

  std::set<std::pair<std::uint64_t, std::uint64_t>> expected;
  for (unsigned long m = 1; m <= 10; ++m) {
    for (unsigned long n = m + 1; n <= 10; ++n) {
      const Rational lhs = oracle_harmonic(n + 1) - oracle_harmonic(m + 1);
      const Rational t = oracle_harmonic(n) - oracle_harmonic(m);
      if (lhs > t / (1 + t)) expected.insert({m, n});
    }
  }
  std::set<std::pair<std::uint64_t, std::uint64_t>> found;
  for (const auto& w : report.witnesses) found.insert({w.x.n, w.y.n});
  EXPECT_EQ(found, expected);
  EXPECT_EQ(found.size(), 36u);
  EXPECT_TRUE(found.count({1, 3}));
}

TEST(Falsify, WitnessesSortedByDescendingGap) {
  std::vector<HarmonicPoint> pts;
  for (std::uint64_t n = 1; n <= 10; ++n) pts.push_back({n});
  const auto report = falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                              exhaustive_pairs(pts), 1000);
  ASSERT_FALSE(report.witnesses.empty());
  for (std::size_t i = 1; i < report.witnesses.size(); ++i) {
    EXPECT_FALSE(report.witnesses[i].gap > report.witnesses[i - 1].gap);
  }
  // Largest gap, from the brute-force oracle: pair (H1, H10).
  EXPECT_EQ(report.witnesses.front().x.n, 1u);
  EXPECT_EQ(report.witnesses.front().y.n, 10u);
  EXPECT_EQ(report.witnesses.front().gap.rational(), Rational(16020181, 18600120));
}

TEST(Falsify, HalfMapWithMatchingRatioFindsNothing) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  const auto sampler = random_pairs<Scalar>([u](std::mt19937_64& rng) mutable { return Scalar::real(u(rng)); }, 11);
  const auto report = falsify(cases::half_map(), ControlFunction::ratio(Scalar::exact(1, 2)), ConditionKind::ri(),
                              sampler, 5000);
  EXPECT_EQ(report.pairs_checked, 5000u);
  EXPECT_TRUE(report.witnesses.empty());
}

TEST(Falsify, ConsecutiveHarmonicPairsHoldWithEquality) {
  std::vector<HarmonicPoint> pts;
  for (std::uint64_t n = 1; n <= 51; ++n) pts.push_back({n});
  const auto report = falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                              consecutive_pairs(pts), 1000);
  EXPECT_EQ(report.pairs_checked, 50u);
  EXPECT_TRUE(report.witnesses.empty());
  for (const auto& rec : report.records) {
    const auto& pass = std::get<PairPass>(*rec.outcome);
    EXPECT_EQ(pass.lhs, pass.rhs);
  }
}

TEST(Falsify, BudgetMustBePositive) {
  EXPECT_THROW(falsify(cases::half_map(), ControlFunction::ratio(Scalar::exact(1, 2)), ConditionKind::ri(),
                       exhaustive_pairs<Scalar>({Scalar(0), Scalar(1)}), 0),
               std::invalid_argument);
}

TEST(Falsify, DeterministicForFixedSeed) {
  std::uniform_int_distribution<std::uint64_t> idx(1, 40);
  auto gen = [idx](std::mt19937_64& rng) mutable { return HarmonicPoint{idx(rng)}; };
  const auto a = falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                         random_pairs<HarmonicPoint>(gen, 5), 300);
  const auto b = falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                         random_pairs<HarmonicPoint>(gen, 5), 300);
  ASSERT_EQ(a.witnesses.size(), b.witnesses.size());
  EXPECT_EQ(a.witness_indices, b.witness_indices);
  EXPECT_EQ(a.degenerate, b.degenerate);  // x == y pairs pass (phi defined at 0)
}

TEST(VerifyOnOrbit, HalfMapMaxConditionHasNoViolations) {
  const auto report = verify_on_orbit(cases::half_map(), ControlFunction::ratio(Scalar::exact(9, 10)),
                                      ConditionKind::bisht_max(), Scalar(1), 20);
  EXPECT_EQ(report.orbit_length, 21u);
  EXPECT_EQ(report.pairs_checked, 210u);
  EXPECT_TRUE(report.violations.empty());
}

TEST(VerifyOnOrbit, HarmonicOrbitViolatesRi) {
  const auto report = verify_on_orbit(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                                      HarmonicPoint{1}, 10);
  EXPECT_GE(report.violations.size(), 1u);
}

TEST(VerifyOnOrbit, CollapsedOrbitHasNoPairs) {
  const auto report = verify_on_orbit(cases::constant_map(Scalar(2)), ControlFunction::t_over_one_plus_t(false),
                                      ConditionKind::ri(), Scalar(2), 1);
  EXPECT_EQ(report.distinct_points, 1u);
  EXPECT_EQ(report.pairs_checked, 0u);
  EXPECT_FALSE(report.note.empty());
}

TEST(ConditionProperty, MaxArgumentDominatesOthers) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    const Scalar dxy = random_nonnegative(rng), dx = random_nonnegative(rng), dy = random_nonnegative(rng);
    const Scalar a = Scalar::exact(std::uniform_int_distribution<long>(1, 99)(rng), 100);
    const Scalar ri = condition_argument(ConditionKind::ri(), dxy, dx, dy);
    const Scalar w = condition_argument(ConditionKind::bisht_weighted(a), dxy, dx, dy);
    const Scalar mx = condition_argument(ConditionKind::bisht_max(), dxy, dx, dy);
    ASSERT_FALSE(ri > w);
    ASSERT_FALSE(w > mx);
  }
}

TEST(ConditionProperty, WeightedIsSymmetricUnderSwap) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    const Scalar dxy = random_nonnegative(rng), dx = random_nonnegative(rng), dy = random_nonnegative(rng);
    const Scalar a = Scalar::exact(std::uniform_int_distribution<long>(1, 99)(rng), 100);
    const Scalar lhs = condition_argument(ConditionKind::bisht_weighted(a), dxy, dx, dy);
    const Scalar rhs = condition_argument(ConditionKind::bisht_weighted(Scalar(1) - a), dxy, dy, dx);
    ASSERT_TRUE(lhs.identical(rhs));
  }
}

TEST(ConditionProperty, MaxViolationImpliesViolationForEveryKind) {
  // Affine maps x -> kx + c on random exact pairs, nondecreasing φ.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-50, 50);
  const auto phi = ControlFunction::t_over_one_plus_t();
  int max_violations = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto f = cases::affine_map(Scalar::exact(num(rng), 25), Scalar::exact(num(rng), 7));
    const Scalar x = Scalar::exact(num(rng), 3), y = Scalar::exact(num(rng), 5);
    if (x == y) continue;
    const auto mx = check_pair(f, phi, ConditionKind::bisht_max(), x, y);
    if (!is_violation<Scalar>(mx)) continue;
    ++max_violations;
    EXPECT_TRUE(is_violation<Scalar>(check_pair(f, phi, ConditionKind::ri(), x, y)));
    for (long a : {1L, 3L, 5L, 7L, 9L}) {
      EXPECT_TRUE(is_violation<Scalar>(
          check_pair(f, phi, ConditionKind::bisht_weighted(Scalar::exact(a, 10)), x, y)));
    }
  }
  EXPECT_GT(max_violations, 0);
}

TEST(ConditionProperty, ExactWitnessReplaysIdentically) {
  std::vector<HarmonicPoint> pts;
  for (std::uint64_t n = 1; n <= 12; ++n) pts.push_back({n});
  const auto f = cases::harmonic_self_map();
  const auto phi = cases::harmonic_phi();
  const auto report = falsify(f, phi, ConditionKind::ri(), exhaustive_pairs(pts), 1000);
  for (const auto& w : report.witnesses) {
    const auto again = check_pair(f, phi, ConditionKind::ri(), w.x, w.y);
    const auto& r = std::get<ViolationWitness<HarmonicPoint>>(again);
    EXPECT_TRUE(r.gap.identical(w.gap));
    EXPECT_TRUE(r.lhs.identical(w.lhs));
  }
}

TEST(Falsify, IndependentOfThreadCount) {
  std::uniform_int_distribution<std::uint64_t> idx(1, 300);
  auto gen = [idx](std::mt19937_64& rng) mutable { return HarmonicPoint{idx(rng)}; };
  auto run = [&](std::size_t threads) {
    set_thread_count(threads);
    return falsify(cases::harmonic_self_map(), cases::harmonic_phi(), ConditionKind::ri(),
                   random_pairs<HarmonicPoint>(gen, 12), 2000);
  };
  const auto one = run(1);
  const auto four = run(4);
  set_thread_count(0);
  EXPECT_EQ(one.witness_indices, four.witness_indices);
  ASSERT_EQ(one.witnesses.size(), four.witnesses.size());
  for (std::size_t i = 0; i < one.witnesses.size(); ++i) EXPECT_TRUE(one.witnesses[i].gap.identical(four.witnesses[i].gap));
}
