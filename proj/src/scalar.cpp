#include "momentdet/scalar.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace momentdet {

unsigned digits10_for_bits(unsigned bits) {
  // ln(2)/ln(10) = 0.30103...; +2 so the backend never carries fewer bits.
  return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
}

PrecisionGuard::PrecisionGuard(unsigned bits)
    : saved_digits_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits_); }

Rational rat_pow(const Rational& base, unsigned exp) {
  if (exp == 0) return Rational(1);
  Integer num = boost::multiprecision::pow(numerator(base), exp);
  Integer den = boost::multiprecision::pow(denominator(base), exp);
  return Rational(num) / Rational(den);
}

int sign(const Rational& q) { return q.sign(); }

Real to_real(const Rational& q) { return Real(q); }

namespace {

// GMP reads leading zeros as octal; normalize to plain base-10 digits.
Integer parse_integer10(std::string s) {
  std::string sign;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s[0] == '-') sign = "-";
    s.erase(0, 1);
  }
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;
  s.erase(0, i);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("cannot parse integer: " + s);
  return Integer(sign + s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_integer10(text.substr(0, slash));
    Integer den = parse_integer10(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(num) / Rational(den);
  }
  auto epos = text.find_first_of("eE");
  std::string mantissa = epos == std::string::npos ? text : text.substr(0, epos);
  long exp10 = epos == std::string::npos ? 0 : std::stol(text.substr(epos + 1));
  auto dot = mantissa.find('.');
  std::string digits = mantissa;
  if (dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exp10 -= static_cast<long>(mantissa.size() - dot - 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw std::invalid_argument("cannot parse rational: " + text);
  Rational out{parse_integer10(digits)};
  if (exp10 > 0)
    out *= rat_pow(Rational(10), static_cast<unsigned>(exp10));
  else if (exp10 < 0)
    out /= rat_pow(Rational(10), static_cast<unsigned>(-exp10));
  return out;
}

std::string rational_to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

PowerValue::PowerValue(Rational base, unsigned root)
    : base_(std::move(base)), root_(root) {
  if (root_ == 0) throw std::invalid_argument("PowerValue root must be >= 1");
  if (base_.sign() <= 0)
    throw std::invalid_argument("PowerValue base must be positive");
}

std::strong_ordering PowerValue::compare(const PowerValue& other) const {
  // a^(1/r) <=> b^(1/s)  iff  a^s <=> b^r  (both sides positive).
  Rational lhs = rat_pow(base_, other.root_);
  Rational rhs = rat_pow(other.base_, root_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

PowerValue PowerValue::mul(const PowerValue& other) const {
  if (root_ == other.root_) return PowerValue(base_ * other.base_, root_);
  unsigned lcm_root = std::lcm(root_, other.root_);
  Rational a = rat_pow(base_, lcm_root / root_);
  Rational b = rat_pow(other.base_, lcm_root / other.root_);
  return PowerValue(a * b, lcm_root);
}

PowerValue PowerValue::div(const PowerValue& other) const {
  if (root_ == other.root_) return PowerValue(base_ / other.base_, root_);
  unsigned lcm_root = std::lcm(root_, other.root_);
  Rational a = rat_pow(base_, lcm_root / root_);
  Rational b = rat_pow(other.base_, lcm_root / other.root_);
  return PowerValue(a / b, lcm_root);
}

Real PowerValue::to_real() const {
  Real b = momentdet::to_real(base_);
  if (root_ == 1) return b;
  return boost::multiprecision::pow(b, Real(1) / Real(root_));
}

std::string PowerValue::to_string() const {
  if (root_ == 1) return rational_to_string(base_);
  return rational_to_string(base_) + "^(1/" + std::to_string(root_) + ")";
}

const Rational& Scalar::rat() const {
  if (!is_rational())
    throw std::logic_error("Scalar::rat() called on a float scalar");
  return std::get<Rational>(v_);
}

Real Scalar::real() const {
  if (is_rational()) return to_real(std::get<Rational>(v_));
  return std::get<Real>(v_);
}

double Scalar::to_double() const { return static_cast<double>(real()); }

Scalar Scalar::operator-() const {
  if (is_rational()) return Scalar(Rational(-std::get<Rational>(v_)));
  return Scalar(Real(-std::get<Real>(v_)));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rat() + b.rat()));
  return Scalar(Real(a.real() + b.real()));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rat() - b.rat()));
  return Scalar(Real(a.real() - b.real()));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rat() * b.rat()));
  return Scalar(Real(a.real() * b.real()));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) {
    if (b.rat().sign() == 0) throw std::domain_error("division by zero");
    return Scalar(Rational(a.rat() / b.rat()));
  }
  return Scalar(Real(a.real() / b.real()));
}

std::strong_ordering Scalar::compare(const Scalar& other) const {
  if (is_rational() && other.is_rational()) {
    const Rational& a = rat();
    const Rational& b = other.rat();
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  Real a = real();
  Real b = other.real();
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Scalar::is_zero() const {
  return is_rational() ? rat().sign() == 0 : std::get<Real>(v_).is_zero();
}

bool Scalar::is_positive() const {
  return is_rational() ? rat().sign() > 0 : std::get<Real>(v_) > 0;
}

bool Scalar::is_negative() const {
  return is_rational() ? rat().sign() < 0 : std::get<Real>(v_) < 0;
}

Scalar Scalar::abs() const {
  return is_negative() ? -*this : *this;
}

std::string Scalar::to_string() const {
  if (is_rational()) return rational_to_string(rat());
  const Real& x = std::get<Real>(v_);
  // Enough digits to round-trip at the value's own precision.
  return x.str(static_cast<int>(x.precision()) + 3,
               std::ios_base::scientific);
}

Scalar Scalar::parse(const std::string& text, ScalarMode mode) {
  if (mode == ScalarMode::kRational) return Scalar(parse_rational(text));
  // mpfr does not read fraction literals; route them through the exact parser
  if (text.find('/') != std::string::npos)
    return Scalar(to_real(parse_rational(text)));
  return Scalar(Real(text));
}

}  // namespace momentdet
