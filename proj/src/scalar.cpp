#include "contractio/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "contractio/errors.hpp"

namespace contractio {

namespace {

Rational exact_of(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("non-finite double has no rational value");
  }
  return Rational(v);
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational r(p);
  return e < 0 ? Rational(1) / r : r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Scalar::Scalar(Rational q) : value_(std::move(q)) {
  std::get<Rational>(value_).canonicalize();
}

Scalar Scalar::exact(long num, long den) { return Scalar(make_rational(num, den)); }

Scalar Scalar::real(double v) {
  Scalar s;
  s.value_ = v;
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("not a number: '" + std::string(text) + "'"); };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Scalar num = parse(text.substr(0, slash));
    Scalar den = parse(text.substr(slash + 1));
    return num / den;
  }

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) throw bad();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    body = body.substr(0, e);
  }

  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw bad();
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) throw bad();
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(body)) throw bad();
    digits = std::string(body);
  }

  Rational q(mpz_class(digits, 10));
  q *= pow10(exponent);
  if (negative) q = -q;
  return Scalar(q);
}

const Rational& Scalar::rational() const {
  if (!is_exact()) throw std::logic_error("Scalar is Float64, not exact");
  return std::get<Rational>(value_);
}

double Scalar::to_double() const {
  if (is_exact()) return std::get<Rational>(value_).get_d();
  return std::get<double>(value_);
}

std::string Scalar::to_string() const {
  if (is_exact()) return std::get<Rational>(value_).get_str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

int Scalar::sign() const {
  if (is_exact()) return sgn(std::get<Rational>(value_));
  double v = std::get<double>(value_);
  return (v > 0) - (v < 0);
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  if (is_exact()) {
    std::get<Rational>(r.value_) = -std::get<Rational>(value_);
  } else {
    std::get<double>(r.value_) = -std::get<double>(value_);
  }
  return r;
}

namespace {

template <class ExactOp, class FloatOp>
Scalar combine(const Scalar& a, const Scalar& b, ExactOp exact_op, FloatOp float_op) {
  if (a.is_exact() && b.is_exact()) return Scalar(exact_op(a.rational(), b.rational()));
  return Scalar::real(float_op(a.to_double(), b.to_double()));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar r = combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); },
                     [](double x, double y) { return x + y; });
  r.mixed_ = !r.is_exact() && (a.mixed_ || b.mixed_ || a.is_exact() != b.is_exact());
  return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar r = combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); },
                     [](double x, double y) { return x - y; });
  r.mixed_ = !r.is_exact() && (a.mixed_ || b.mixed_ || a.is_exact() != b.is_exact());
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r = combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x * y); },
                     [](double x, double y) { return x * y; });
  r.mixed_ = !r.is_exact() && (a.mixed_ || b.mixed_ || a.is_exact() != b.is_exact());
  return r;
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_exact() && b.is_zero()) throw DomainError("division by exact zero");
  Scalar r = combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x / y); },
                     [](double x, double y) { return x / y; });
  r.mixed_ = !r.is_exact() && (a.mixed_ || b.mixed_ || a.is_exact() != b.is_exact());
  return r;
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (!a.is_exact() && !b.is_exact()) return a.to_double() <=> b.to_double();
  if (!a.is_exact() && !std::isfinite(a.to_double())) {
    double v = a.to_double();
    if (std::isnan(v)) return std::partial_ordering::unordered;
    return v < 0 ? std::partial_ordering::less : std::partial_ordering::greater;
  }
  if (!b.is_exact() && !std::isfinite(b.to_double())) {
    double v = b.to_double();
    if (std::isnan(v)) return std::partial_ordering::unordered;
    return v < 0 ? std::partial_ordering::greater : std::partial_ordering::less;
  }
  const Rational x = a.is_exact() ? a.rational() : exact_of(a.to_double());
  const Rational y = b.is_exact() ? b.rational() : exact_of(b.to_double());
  int c = cmp(x, y);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool operator==(const Scalar& a, const Scalar& b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

bool Scalar::identical(const Scalar& o) const {
  if (realization() != o.realization() || mixed_ != o.mixed_) return false;
  if (is_exact()) return rational() == o.rational();
  double x = to_double(), y = o.to_double();
  return x == y || (std::isnan(x) && std::isnan(y));
}

Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }

Scalar max(const Scalar& a, const Scalar& b) { return (b > a) ? b : a; }

Scalar min(const Scalar& a, const Scalar& b) { return (b < a) ? b : a; }

Scalar sqrt(const Scalar& x) {
  if (x.sign() < 0) throw DomainError("sqrt of negative value");
  if (x.is_exact()) {
    const Rational& q = x.rational();
    if (mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t())) {
      return Scalar(Rational(sqrt(q.get_num()), sqrt(q.get_den())));
    }
  }
  return Scalar::real(std::sqrt(x.to_double()));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

const char* to_string(Scalar::Realization r) {
  return r == Scalar::Realization::ExactRational ? "exact" : "float64";
}

}  // namespace contractio
