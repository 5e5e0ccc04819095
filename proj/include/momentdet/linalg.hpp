#ifndef MOMENTDET_LINALG_HPP
#define MOMENTDET_LINALG_HPP

#include <optional>
#include <vector>

#include "momentdet/scalar.hpp"

namespace momentdet {

// Minimal dense matrix, column-major access by (row, col). Desk scale only.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T init = T(0))
      : rows_(rows), cols_(cols), a_(rows * cols, init) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }

  Matrix<T> multiply(const Matrix<T>& o) const {
    Matrix<T> out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& v = (*this)(i, k);
        if (v == T(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          out(i, j) += v * o(k, j);
      }
    return out;
  }

  Matrix<T> transposed() const {
    Matrix<T> out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using RatMatrix = Matrix<Rational>;
using RealMatrix = Matrix<Real>;

// Exact PSD decision for a symmetric rational matrix by LDL^T with zero-pivot
// handling: a zero pivot whose Schur row is nonzero certifies indefiniteness.
struct PsdCertificate {
  bool psd = false;
  std::size_t rank = 0;
  // When not PSD: a vector xi with xi^T H xi < 0, and its value.
  std::vector<Rational> witness;
  Rational witness_value;
};

PsdCertificate ldlt_psd_check(const RatMatrix& H);

// Cyclic Jacobi eigenvalue iteration for symmetric matrices at working
// precision. Returns eigenvalues ascending and, optionally, eigenvectors as
// columns.
struct EigenResult {
  std::vector<Real> values;
  RealMatrix vectors;  // column j pairs with values[j]
};

EigenResult jacobi_eigen(RealMatrix A, bool want_vectors, int max_sweeps = 64);

// Implicit-shift QL for a symmetric tridiagonal matrix (diag, offdiag);
// eigenvalues ascending with the first row of the eigenvector matrix (all
// that Gauss weights need).
struct TridiagEigenResult {
  std::vector<Real> values;
  std::vector<Real> first_components;
};

TridiagEigenResult tridiag_eigen(std::vector<Real> diag,
                                 std::vector<Real> offdiag);

// Exact solve of A x = b by Gaussian elimination; empty result when singular.
std::optional<std::vector<Rational>> solve_exact(RatMatrix A,
                                                 std::vector<Rational> b);

}  // namespace momentdet

#endif  // MOMENTDET_LINALG_HPP
