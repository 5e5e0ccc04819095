#ifndef MOMENTDET_POLYNOMIAL_HPP
#define MOMENTDET_POLYNOMIAL_HPP

#include <utility>
#include <vector>

#include "momentdet/scalar.hpp"

namespace momentdet {

// Dense univariate polynomial with exact rational coefficients.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs);
  static RatPoly constant(const Rational& c);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& coeff(std::size_t i) const;

  Rational eval(const Rational& x) const;
  RatPoly derivative() const;
  RatPoly antiderivative() const;  // constant term 0
  RatPoly shift(const Rational& a) const;  // x -> p(x + a), Taylor shift

  RatPoly operator+(const RatPoly& o) const;
  RatPoly operator-(const RatPoly& o) const;
  RatPoly operator*(const RatPoly& o) const;
  RatPoly scaled(const Rational& s) const;
  bool operator==(const RatPoly& o) const { return c_ == o.c_; }

  // Conservative range of p over [lo, hi] by interval Horner.
  std::pair<Rational, Rational> eval_interval(const Rational& lo,
                                              const Rational& hi) const;

 private:
  std::vector<Rational> c_;  // c_[i] is the coefficient of x^i
  void normalize();
};

// Quotient and remainder of exact polynomial division.
std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& num, const RatPoly& den);
RatPoly poly_gcd(RatPoly a, RatPoly b);

// Sturm chain of the squarefree part of p.
std::vector<RatPoly> sturm_chain(const RatPoly& p);
// Number of distinct real roots of p in (a, b].
int roots_in(const std::vector<RatPoly>& chain, const Rational& a,
             const Rational& b);

struct RootInterval {
  Rational lo, hi;  // contains exactly one root; lo == hi when exact
};

// Isolating intervals for the distinct real roots of p inside (lo, hi),
// each refined by bisection to width <= `width`.
std::vector<RootInterval> isolate_roots(const RatPoly& p, const Rational& lo,
                                        const Rational& hi,
                                        const Rational& width);

}  // namespace momentdet

#endif  // MOMENTDET_POLYNOMIAL_HPP
