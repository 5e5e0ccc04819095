#ifndef MOMENTDET_SCALAR_HPP
#define MOMENTDET_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace momentdet {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
// Variable-precision float; working precision is set through PrecisionGuard.
using Real = boost::multiprecision::mpfr_float;

enum class ScalarMode { kRational, kFloat };

constexpr unsigned kDefaultPrecisionBits = 256;

// Decimal digits needed so that the mpfr backend carries at least `bits` bits.
unsigned digits10_for_bits(unsigned bits);

// Scoped working precision for Real arithmetic (thread-local).
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits_;
};

struct InvalidSequenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational rat_pow(const Rational& base, unsigned exp);
int sign(const Rational& q);

Real to_real(const Rational& q);
// Parses "p/q", "p", decimal or scientific literals.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

// Exact positive value base^(1/root) with rational base. Closed under the
// operations the envelope needs (ratios of same-root values, integer roots of
// rationals) and comparable without leaving exact arithmetic.
class PowerValue {
 public:
  PowerValue() : base_(0), root_(1) {}
  PowerValue(Rational base, unsigned root);

  const Rational& base() const { return base_; }
  unsigned root() const { return root_; }
  bool is_rational() const { return root_ == 1; }

  // Three-way comparison via cross powers: a^(1/r) vs b^(1/s) as a^s vs b^r.
  std::strong_ordering compare(const PowerValue& other) const;
  bool operator==(const PowerValue& other) const {
    return compare(other) == std::strong_ordering::equal;
  }

  PowerValue mul(const PowerValue& other) const;  // requires compatible roots
  PowerValue div(const PowerValue& other) const;
  Real to_real() const;
  std::string to_string() const;

 private:
  Rational base_;  // > 0
  unsigned root_;  // >= 1
};

// Runtime-typed scalar: exact rational or working-precision float. Arithmetic
// between mixed operands promotes to float.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(int n) : v_(Rational(n)) {}                   // NOLINT(runtime/explicit)
  Scalar(long n) : v_(Rational(n)) {}                  // NOLINT(runtime/explicit)
  Scalar(unsigned long n) : v_(Rational(n)) {}         // NOLINT(runtime/explicit)
  Scalar(Rational q) : v_(std::move(q)) {}             // NOLINT(runtime/explicit)
  Scalar(Real x) : v_(std::move(x)) {}                 // NOLINT(runtime/explicit)
  explicit Scalar(double x) : v_(Real(x)) {}

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  ScalarMode mode() const {
    return is_rational() ? ScalarMode::kRational : ScalarMode::kFloat;
  }
  const Rational& rat() const;
  Real real() const;  // conversion at current working precision
  double to_double() const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  // Exact when both operands are rational.
  std::strong_ordering compare(const Scalar& other) const;
  bool operator==(const Scalar& other) const {
    return compare(other) == std::strong_ordering::equal;
  }
  bool operator<(const Scalar& other) const {
    return compare(other) == std::strong_ordering::less;
  }
  bool operator<=(const Scalar& other) const {
    return compare(other) != std::strong_ordering::greater;
  }
  bool operator>(const Scalar& other) const { return other < *this; }
  bool operator>=(const Scalar& other) const { return other <= *this; }

  bool is_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  Scalar abs() const;

  std::string to_string() const;  // round-trippable at working precision
  static Scalar parse(const std::string& text, ScalarMode mode);

 private:
  std::variant<Rational, Real> v_;
};

}  // namespace momentdet

#endif  // MOMENTDET_SCALAR_HPP
