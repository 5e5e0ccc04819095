#include "momentdet/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace momentdet {

namespace {

Real working_epsilon(int margin_digits = 2) {
  long digits = static_cast<long>(Real::default_precision());
  return pow(Real(10), static_cast<int>(-(digits - margin_digits)));
}

}  // namespace

PsdCertificate ldlt_psd_check(const RatMatrix& H) {
  const std::size_t n = H.rows();
  if (H.cols() != n) throw std::invalid_argument("PSD check needs a square matrix");
  PsdCertificate out;
  RatMatrix S = H;           // running Schur complement in the trailing block
  RatMatrix L(n, n);         // unit lower triangular
  for (std::size_t i = 0; i < n; ++i) L(i, i) = Rational(1);

  auto lift_witness = [&](std::vector<Rational> y) {
    // Solve L^T x = y so that x^T H x equals y's value on the Schur block.
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t ii = n; ii-- > 0;) {
      Rational acc = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) acc -= L(j, ii) * x[j];
      x[ii] = acc;
    }
    return x;
  };
  auto quad_form = [&H, n](const std::vector<Rational>& x) {
    Rational v(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v += x[i] * H(i, j) * x[j];
    return v;
  };

  for (std::size_t k = 0; k < n; ++k) {
    Rational d = S(k, k);
    if (d.sign() < 0) {
      std::vector<Rational> y(n, Rational(0));
      y[k] = Rational(1);
      out.witness = lift_witness(std::move(y));
      out.witness_value = quad_form(out.witness);
      return out;
    }
    if (d.sign() == 0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        if (S(k, j).sign() != 0) {
          // [[0, a],[a, b]] block: t e_k + e_j with 2 a t + b < 0.
          const Rational& a = S(k, j);
          const Rational& b = S(j, j);
          Rational babs = b.sign() < 0 ? Rational(-b) : b;
          Rational t = -(babs + 1) / (2 * a);
          std::vector<Rational> y(n, Rational(0));
          y[k] = t;
          y[j] = Rational(1);
          out.witness = lift_witness(std::move(y));
          out.witness_value = quad_form(out.witness);
          return out;
        }
      }
      continue;  // entire row/column already zero in the Schur block
    }
    ++out.rank;
    for (std::size_t i = k + 1; i < n; ++i) L(i, k) = S(i, k) / d;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        S(i, j) -= L(i, k) * S(k, j);
        S(j, i) = S(i, j);
      }
  }
  out.psd = true;
  return out;
}

EigenResult jacobi_eigen(RealMatrix A, bool want_vectors, int max_sweeps) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("eigen needs a square matrix");
  EigenResult out;
  RealMatrix V(n, n);
  for (std::size_t i = 0; i < n; ++i) V(i, i) = Real(1);

  Real eps = working_epsilon(4);
  Real scale(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scale = std::max(scale, Real(abs(A(i, j))));
  if (scale == 0) scale = Real(1);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Real off(0);
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += abs(A(p, q));
    if (off <= eps * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (abs(A(p, q)) <= eps * scale / Real(static_cast<long>(n * n)))
          continue;
        Real tau = (A(q, q) - A(p, p)) / (2 * A(p, q));
        Real t = (tau >= 0 ? Real(1) : Real(-1)) /
                 (abs(tau) + sqrt(1 + tau * tau));
        Real c = 1 / sqrt(1 + t * t);
        Real s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          Real aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          Real apj = A(p, j), aqj = A(q, j);
          A(p, j) = c * apj - s * aqj;
          A(q, j) = s * apj + c * aqj;
        }
        if (want_vectors) {
          for (std::size_t i = 0; i < n; ++i) {
            Real vip = V(i, p), viq = V(i, q);
            V(i, p) = c * vip - s * viq;
            V(i, q) = s * vip + c * viq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&A](std::size_t a, std::size_t b) {
    return A(a, a) < A(b, b);
  });
  out.values.reserve(n);
  for (std::size_t j : order) out.values.push_back(A(j, j));
  if (want_vectors) {
    out.vectors = RealMatrix(n, n);
    for (std::size_t jj = 0; jj < n; ++jj)
      for (std::size_t i = 0; i < n; ++i)
        out.vectors(i, jj) = V(i, order[jj]);
  }
  return out;
}

TridiagEigenResult tridiag_eigen(std::vector<Real> d, std::vector<Real> e) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (e.size() + 1 != n && n > 1)
    throw std::invalid_argument("offdiagonal must have n-1 entries");
  e.resize(n, Real(0));  // e[n-1] used as workspace

  // First row of the eigenvector matrix is enough for quadrature weights.
  std::vector<Real> z(n, Real(0));
  z[0] = Real(1);

  Real eps = working_epsilon(3);
  for (std::size_t l = 0; l < n; ++l) {
    for (int iter = 0; iter < 80; ++iter) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        Real dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      Real g = (d[l + 1] - d[l]) / (2 * e[l]);
      Real r = sqrt(g * g + 1);
      Real denom = g + (g >= 0 ? r : -r);
      g = d[m] - d[l] + e[l] / denom;
      Real s(1), c(1), p(0);
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        Real f = s * e[i];
        Real b = c * e[i];
        r = sqrt(f * f + g * g);
        e[i + 1] = r;
        if (r == 0) {
          d[i + 1] -= p;
          e[m] = Real(0);
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        Real zi = z[i], zi1 = z[i + 1];
        z[i + 1] = s * zi + c * zi1;
        z[i] = c * zi - s * zi1;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = Real(0);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&d](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagEigenResult out;
  out.values.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t j : order) {
    out.values.push_back(d[j]);
    out.first_components.push_back(z[j]);
  }
  return out;
}

std::optional<std::vector<Rational>> solve_exact(RatMatrix A,
                                                 std::vector<Rational> b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_exact needs square A and matching b");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && A(piv, k).sign() == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (A(i, k).sign() == 0) continue;
      Rational f = A(i, k) / A(k, k);
      for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
    x[i] = acc / A(i, i);
  }
  return x;
}

}  // namespace momentdet
