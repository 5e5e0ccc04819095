#ifndef MOMENTDET_QUADRATURE_HPP
#define MOMENTDET_QUADRATURE_HPP

#include <functional>

#include "momentdet/scalar.hpp"

namespace momentdet {

struct QuadratureResult {
  Real value;
  Real error_estimate;
  std::size_t evaluations = 0;
};

// Adaptive Simpson with Richardson error control; works at the current
// working precision. `tol` is the absolute per-interval tolerance.
QuadratureResult adaptive_simpson(const std::function<Real(const Real&)>& f,
                                  const Real& a, const Real& b,
                                  const Real& tol, int max_depth = 48);

}  // namespace momentdet

#endif  // MOMENTDET_QUADRATURE_HPP
