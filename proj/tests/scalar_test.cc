#include <random>

#include <gtest/gtest.h>

#include "contractio/errors.hpp"
#include "contractio/scalar.hpp"

using contractio::Rational;
using contractio::Scalar;

TEST(ScalarTest, ExactRationalIsCanonical) {
  const Scalar s = Scalar::exact(10, -4);
  ASSERT_TRUE(s.is_exact());
  EXPECT_EQ(s.rational().get_num(), -5);
  EXPECT_EQ(s.rational().get_den(), 2);
  EXPECT_EQ(s.to_string(), "-5/2");
}

TEST(ScalarTest, ParseIsExactForDecimals) {
  EXPECT_EQ(Scalar::parse("0.1").rational(), Rational(1, 10));
  EXPECT_EQ(Scalar::parse("7/12").rational(), Rational(7, 12));
  EXPECT_EQ(Scalar::parse("-3").rational(), Rational(-3));
  EXPECT_EQ(Scalar::parse("1e-10").rational(), Rational(1, 10000000000L));
  EXPECT_EQ(Scalar::parse("2.5e2").rational(), Rational(250));
  EXPECT_THROW(Scalar::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Scalar::parse(""), std::invalid_argument);
  EXPECT_THROW(Scalar::parse("1/0"), contractio::DomainError);
}

TEST(ScalarTest, ExactArithmeticStaysExact) {
  const Scalar a = Scalar::exact(7, 12);
  const Scalar b = Scalar::exact(5, 11);
  const Scalar gap = a - b;
  ASSERT_TRUE(gap.is_exact());
  EXPECT_EQ(gap.rational(), Rational(17, 132));
  EXPECT_FALSE(gap.mixed());
  EXPECT_TRUE(a > b);
}

TEST(ScalarTest, MixingDowngradesAndFlags) {
  const Scalar q = Scalar::exact(1, 3);
  const Scalar x = Scalar::real(0.5);
  const Scalar r = q + x;
  EXPECT_FALSE(r.is_exact());
  EXPECT_TRUE(r.mixed());
  EXPECT_DOUBLE_EQ(r.to_double(), 1.0 / 3.0 + 0.5);
  // The flag survives later float-only arithmetic.
  EXPECT_TRUE((r * Scalar::real(2.0)).mixed());
  EXPECT_FALSE((x * Scalar::real(2.0)).mixed());
}

TEST(ScalarTest, ComparisonAcrossRealizationsIsExact) {
  // 0.1 as a double is slightly above 1/10.
  EXPECT_TRUE(Scalar::real(0.1) > Scalar::exact(1, 10));
  EXPECT_TRUE(Scalar::real(0.5) == Scalar::exact(1, 2));
  EXPECT_FALSE(Scalar::real(0.5).identical(Scalar::exact(1, 2)));
}

TEST(ScalarTest, DivisionByExactZeroIsDomainError) {
  EXPECT_THROW(Scalar(1) / Scalar(0), contractio::DomainError);
}

TEST(ScalarTest, SqrtExactOnPerfectSquares) {
  EXPECT_EQ(sqrt(Scalar::exact(25, 4)).rational(), Rational(5, 2));
  EXPECT_FALSE(sqrt(Scalar(2)).is_exact());
  EXPECT_THROW(sqrt(Scalar(-1)), contractio::DomainError);
}

TEST(ScalarProperty, AddThenSubtractRoundTripsExactly) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<long> den(1, 100000);
  for (int i = 0; i < 2000; ++i) {
    const Scalar a = Scalar::exact(num(rng), den(rng));
    const Scalar c = Scalar::exact(num(rng), den(rng));
    const Scalar back = (a + c) - c;
    ASSERT_TRUE(back.identical(a)) << a << " vs " << back;
  }
}
