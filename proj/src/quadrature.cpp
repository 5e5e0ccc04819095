#include "momentdet/quadrature.hpp"

namespace momentdet {

namespace {

Real simpson(const Real& h, const Real& fa, const Real& fm, const Real& fb) {
  return (fa + 4 * fm + fb) * h / 6;
}

struct Worker {
  const std::function<Real(const Real&)>& f;
  std::size_t evals = 0;
  Real err_total{0};

  Real eval(const Real& x) {
    ++evals;
    return f(x);
  }

  Real recurse(const Real& a, const Real& m, const Real& b, const Real& fa,
               const Real& fm, const Real& fb, const Real& whole,
               const Real& tol, int depth) {
    Real lm = (a + m) / 2;
    Real rm = (m + b) / 2;
    Real flm = eval(lm);
    Real frm = eval(rm);
    Real h2 = (b - a) / 2;
    Real left = simpson(h2, fa, flm, fm);
    Real right = simpson(h2, fm, frm, fb);
    Real err = (left + right - whole) / 15;
    if (depth <= 0 || abs(err) <= tol) {
      err_total += abs(err);
      return left + right + err;
    }
    return recurse(a, lm, m, fa, flm, fm, left, tol, depth - 1) +
           recurse(m, rm, b, fm, frm, fb, right, tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<Real(const Real&)>& f,
                                  const Real& a, const Real& b,
                                  const Real& tol, int max_depth) {
  QuadratureResult out;
  if (a == b) {
    out.value = Real(0);
    out.error_estimate = Real(0);
    return out;
  }
  Worker w{f};
  Real m = (a + b) / 2;
  Real fa = w.eval(a);
  Real fm = w.eval(m);
  Real fb = w.eval(b);
  Real whole = simpson(b - a, fa, fm, fb);
  out.value = w.recurse(a, m, b, fa, fm, fb, whole, tol, max_depth);
  out.error_estimate = w.err_total;
  out.evaluations = w.evals;
  return out;
}

}  // namespace momentdet
