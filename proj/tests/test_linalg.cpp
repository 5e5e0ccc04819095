#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momentdet/linalg.hpp"

using namespace momentdet;

namespace {

RatMatrix hilbert(std::size_t n) {
  RatMatrix H(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      H(i, j) = Rational(1, static_cast<long>(i + j + 1));
  return H;
}

}  // namespace

TEST_CASE("exact LDL^T PSD decisions") {
  SUBCASE("Hilbert matrices are positive definite") {
    auto cert = ldlt_psd_check(hilbert(6));
    CHECK(cert.psd);
    CHECK(cert.rank == 6);
  }
  SUBCASE("indefinite 2x2 with witness") {
    RatMatrix H(2, 2);
    H(0, 0) = Rational(1);
    H(0, 1) = H(1, 0) = Rational(2);
    H(1, 1) = Rational(1);
    auto cert = ldlt_psd_check(H);
    REQUIRE_FALSE(cert.psd);
    CHECK(cert.witness_value.sign() < 0);
  }
  SUBCASE("zero pivot with nonzero row is indefinite") {
    RatMatrix H(2, 2);
    H(0, 1) = H(1, 0) = Rational(1);
    auto cert = ldlt_psd_check(H);
    REQUIRE_FALSE(cert.psd);
    CHECK(cert.witness_value.sign() < 0);
  }
  SUBCASE("singular PSD reports its rank") {
    // [[1,1],[1,1]] plus a zero row/column
    RatMatrix H(3, 3);
    H(0, 0) = H(0, 1) = H(1, 0) = H(1, 1) = Rational(1);
    auto cert = ldlt_psd_check(H);
    CHECK(cert.psd);
    CHECK(cert.rank == 1);
  }
  SUBCASE("random Gram matrices are PSD with matching rank") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 20; ++iter) {
      std::size_t n = 2 + rng() % 4, r = 1 + rng() % n;
      RatMatrix B(n, r);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j)
          B(i, j) = Rational(static_cast<long>(rng() % 11) - 5,
                             static_cast<long>(rng() % 4) + 1);
      RatMatrix H = B.multiply(B.transposed());
      auto cert = ldlt_psd_check(H);
      CHECK(cert.psd);
      CHECK(cert.rank <= r);
    }
  }
}

TEST_CASE("jacobi eigen solves small symmetric systems") {
  PrecisionGuard guard(256);
  RealMatrix A(2, 2);
  A(0, 0) = A(1, 1) = Real(2);
  A(0, 1) = A(1, 0) = Real(1);
  auto eig = jacobi_eigen(A, true);
  CHECK(abs(eig.values[0] - 1) < Real("1e-70"));
  CHECK(abs(eig.values[1] - 3) < Real("1e-70"));
  // eigenvector residual
  for (std::size_t j = 0; j < 2; ++j) {
    Real r0 = 2 * eig.vectors(0, j) + eig.vectors(1, j) -
              eig.values[j] * eig.vectors(0, j);
    CHECK(abs(r0) < Real("1e-70"));
  }
}

TEST_CASE("tridiagonal eigen matches the Chebyshev nodes") {
  PrecisionGuard guard(256);
  std::vector<Real> d(3, Real(0));
  std::vector<Real> e(2, Real(1) / 2);
  auto eig = tridiag_eigen(d, e);
  REQUIRE(eig.values.size() == 3);
  Real s2 = sqrt(Real(2)) / 2;
  CHECK(abs(eig.values[0] + s2) < Real("1e-70"));
  CHECK(abs(eig.values[1]) < Real("1e-70"));
  CHECK(abs(eig.values[2] - s2) < Real("1e-70"));
  Real sumsq(0);
  for (const Real& z : eig.first_components) sumsq += z * z;
  CHECK(abs(sumsq - 1) < Real("1e-70"));
}

TEST_CASE("exact linear solve") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 20; ++iter) {
    std::size_t n = 1 + rng() % 5;
    RatMatrix A(n, n);
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = Rational(static_cast<long>(rng() % 21) - 10,
                      static_cast<long>(rng() % 6) + 1);
      for (std::size_t j = 0; j < n; ++j)
        A(i, j) = Rational(static_cast<long>(rng() % 21) - 10,
                           static_cast<long>(rng() % 6) + 1);
    }
    std::vector<Rational> b(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b[i] += A(i, j) * x[j];
    auto sol = solve_exact(A, b);
    if (!sol) continue;  // hit a singular draw
    for (std::size_t i = 0; i < n; ++i) CHECK((*sol)[i] == x[i]);
  }
  RatMatrix S(2, 2);
  S(0, 0) = S(0, 1) = S(1, 0) = S(1, 1) = Rational(1);
  CHECK_FALSE(solve_exact(S, {Rational(1), Rational(2)}).has_value());
}
