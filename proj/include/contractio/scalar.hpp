#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace contractio {

/// Arbitrary-precision rational, always kept in canonical form
/// (gcd(num, den) = 1, den > 0).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// A number that is either an exact rational or an IEEE double.
///
/// Exact-with-exact arithmetic stays exact. Any operation touching a
/// Float64 operand produces a Float64; if the other operand was exact the
/// result is marked `mixed()` and the mark propagates through later
/// arithmetic so reports can flag the precision loss.
///
/// Comparisons are always exact: a double is compared against a rational by
/// converting the double to its exact rational value.
class Scalar {
 public:
  enum class Realization { ExactRational, Float64 };

  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q);  // NOLINT(google-explicit-constructor)
  Scalar(int v) : Scalar(Rational(v)) {}  // NOLINT
  Scalar(long v) : Scalar(Rational(v)) {}  // NOLINT

  static Scalar exact(long num, long den = 1);
  static Scalar real(double v);

  /// Parses "7/12", "-3", "0.25", "1e-10" as exact rationals. Decimal and
  /// exponent forms are converted exactly (0.1 becomes 1/10).
  static Scalar parse(std::string_view text);

  Realization realization() const {
    return std::holds_alternative<Rational>(value_) ? Realization::ExactRational
                                                    : Realization::Float64;
  }
  bool is_exact() const { return realization() == Realization::ExactRational; }
  bool mixed() const { return mixed_; }

  /// Throws std::logic_error for a Float64 scalar.
  const Rational& rational() const;
  double to_double() const;

  /// "num/den" (or "num" when den = 1) for exact values; "%.17g" otherwise.
  std::string to_string() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  /// Throws DomainError on division by zero.
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Same value, same realization, same mixed flag.
  bool identical(const Scalar& o) const;

 private:
  std::variant<Rational, double> value_;
  bool mixed_ = false;
};

Scalar abs(const Scalar& x);
Scalar max(const Scalar& a, const Scalar& b);
Scalar min(const Scalar& a, const Scalar& b);
/// Exact when both numerator and denominator are perfect squares, Float64
/// otherwise. Throws DomainError for negative input.
Scalar sqrt(const Scalar& x);

std::ostream& operator<<(std::ostream& os, const Scalar& s);
const char* to_string(Scalar::Realization r);

}  // namespace contractio
