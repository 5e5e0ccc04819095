#include "momentdet/polynomial.hpp"

#include <algorithm>

namespace momentdet {

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  normalize();
}

RatPoly RatPoly::constant(const Rational& c) {
  return RatPoly(std::vector<Rational>{c});
}

void RatPoly::normalize() {
  while (!c_.empty() && c_.back().sign() == 0) c_.pop_back();
}

const Rational& RatPoly::coeff(std::size_t i) const {
  static const Rational kZero(0);
  return i < c_.size() ? c_[i] : kZero;
}

Rational RatPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return RatPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    d[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return RatPoly(std::move(d));
}

RatPoly RatPoly::antiderivative() const {
  if (c_.empty()) return RatPoly();
  std::vector<Rational> a(c_.size() + 1);
  a[0] = Rational(0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    a[i + 1] = c_[i] / Rational(static_cast<long>(i + 1));
  return RatPoly(std::move(a));
}

RatPoly RatPoly::shift(const Rational& a) const {
  if (c_.empty() || a.sign() == 0) return *this;
  // Horner form: p(x + a) built from the top coefficient down.
  std::vector<Rational> out{c_.back()};
  for (std::size_t i = c_.size() - 1; i-- > 0;) {
    out.push_back(Rational(0));
    for (std::size_t j = out.size() - 1; j > 0; --j)
      out[j] = out[j - 1] + out[j] * a;
    out[0] = out[0] * a + c_[i];
  }
  return RatPoly(std::move(out));
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
  std::vector<Rational> out(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
  return RatPoly(std::move(out));
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
  std::vector<Rational> out(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] -= o.c_[i];
  return RatPoly(std::move(out));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
  if (c_.empty() || o.c_.empty()) return RatPoly();
  std::vector<Rational> out(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
  return RatPoly(std::move(out));
}

RatPoly RatPoly::scaled(const Rational& s) const {
  std::vector<Rational> out(c_);
  for (auto& v : out) v *= s;
  return RatPoly(std::move(out));
}

std::pair<Rational, Rational> RatPoly::eval_interval(const Rational& lo,
                                                     const Rational& hi) const {
  // Interval Horner; conservative but exact-rational.
  Rational rlo(0), rhi(0);
  for (std::size_t i = c_.size(); i-- > 0;) {
    // [rlo, rhi] * [lo, hi]
    Rational a = rlo * lo, b = rlo * hi, c = rhi * lo, d = rhi * hi;
    Rational mlo = std::min(std::min(a, b), std::min(c, d));
    Rational mhi = std::max(std::max(a, b), std::max(c, d));
    rlo = mlo + c_[i];
    rhi = mhi + c_[i];
  }
  return {rlo, rhi};
}

std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& num,
                                        const RatPoly& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem(num.coeffs());
  std::vector<Rational> quot;
  int dn = num.degree(), dd = den.degree();
  if (dn < dd) return {RatPoly(), num};
  quot.assign(dn - dd + 1, Rational(0));
  const Rational& lead = den.coeffs().back();
  for (int i = dn; i >= dd; --i) {
    Rational f = rem[i] / lead;
    quot[i - dd] = f;
    if (f.sign() == 0) continue;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] -= f * den.coeffs()[j];
  }
  return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(Rational(1) / a.coeffs().back());  // monic
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain;
  if (p.is_zero() || p.degree() == 0) return chain;
  RatPoly g = poly_gcd(p, p.derivative());
  RatPoly sf = g.degree() > 0 ? poly_divmod(p, g).first : p;
  chain.push_back(sf);
  chain.push_back(sf.derivative());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    RatPoly r = poly_divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(r.scaled(Rational(-1)));
  }
  return chain;
}

namespace {

int sign_changes(const std::vector<RatPoly>& chain, const Rational& x) {
  int changes = 0, prev = 0;
  for (const RatPoly& p : chain) {
    int s = p.eval(x).sign();
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int roots_in(const std::vector<RatPoly>& chain, const Rational& a,
             const Rational& b) {
  if (chain.empty()) return 0;
  return sign_changes(chain, a) - sign_changes(chain, b);
}

std::vector<RootInterval> isolate_roots(const RatPoly& p, const Rational& lo,
                                        const Rational& hi,
                                        const Rational& width) {
  std::vector<RootInterval> out;
  if (p.is_zero() || p.degree() < 1 || !(lo < hi)) return out;
  std::vector<RatPoly> chain = sturm_chain(p);
  const RatPoly& sf = chain.front();

  // Work on half-open (a, b] cells; subdivide until each holds one root.
  std::vector<std::pair<Rational, Rational>> stack{{lo, hi}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    int k = roots_in(chain, a, b);
    if (k == 0) continue;
    if (k == 1) {
      Rational ra = a, rb = b;
      while (rb - ra > width) {
        Rational mid = (ra + rb) / 2;
        if (roots_in(chain, ra, mid) == 1)
          rb = mid;
        else
          ra = mid;
      }
      if (sf.eval(rb).sign() == 0)
        out.push_back({rb, rb});
      else
        out.push_back({ra, rb});
      continue;
    }
    Rational mid = (a + b) / 2;
    // An exact hit at the midpoint is its own isolated root.
    if (sf.eval(mid).sign() == 0) out.push_back({mid, mid});
    stack.push_back({a, mid});
    stack.push_back({mid, b});
  }
  std::sort(out.begin(), out.end(),
            [](const RootInterval& x, const RootInterval& y) {
              return x.lo < y.lo;
            });
  // Exact midpoint hits appear once from the cell test and once as a cell
  // boundary; drop duplicates.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const RootInterval& x, const RootInterval& y) {
                          return x.lo == y.lo && x.hi == y.hi;
                        }),
            out.end());
  return out;
}

}  // namespace momentdet
