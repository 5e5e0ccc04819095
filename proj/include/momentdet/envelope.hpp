#ifndef MOMENTDET_ENVELOPE_HPP
#define MOMENTDET_ENVELOPE_HPP

#include <optional>
#include <vector>

#include "momentdet/sequence.hpp"

namespace momentdet {

struct LogConvexityReport {
  bool log_convex = true;
  std::optional<std::size_t> first_violation;  // least violating n
};

// Definition check: M_n^2 <= M_{n-1} M_{n+1} for 1 <= n <= N-1.
LogConvexityReport is_log_convex(const PositiveSequence& seq, std::size_t N);
// Equivalent characterizations, implemented independently: ratio monotonicity
// and discrete convexity of ln M_n (the latter at working precision).
LogConvexityReport log_convex_by_ratios(const PositiveSequence& seq,
                                        std::size_t N);
LogConvexityReport log_convex_by_logs(const PositiveSequence& seq,
                                      std::size_t N);

// Lower convex envelope of (n, ln M_n), n = 1..N, exponentiated. Values at
// non-vertex indices are exact roots of rationals in rational mode and kept
// as PowerValue; ln-values are always available at working precision.
class RegularizedSequence {
 public:
  RegularizedSequence(std::vector<std::size_t> support,
                      std::vector<PowerValue> exact_values,
                      std::vector<Real> log_values, std::vector<Scalar> raw,
                      ScalarMode mode, unsigned precision_bits);

  std::size_t window() const { return log_values_.size(); }
  const std::vector<std::size_t>& support() const { return support_; }
  bool is_exact() const { return !exact_values_.empty(); }
  ScalarMode mode() const { return mode_; }
  unsigned precision_bits() const { return precision_bits_; }

  // n in 1..window throughout.
  const PowerValue& exact_value(std::size_t n) const;
  Real log_value(std::size_t n) const { return log_values_.at(n - 1); }
  Real value_real(std::size_t n) const;
  Scalar value(std::size_t n) const;  // Rational where the root is trivial
  const Scalar& raw(std::size_t n) const { return raw_.at(n); }  // n in 0..window

  // M^c_{n-1} / M^c_n with M^c_0 := M_0; rational whenever representable.
  Scalar ratio(std::size_t n) const;
  Real ratio_real(std::size_t n) const;

  // Exact equality in rational mode; in float mode compares support and
  // ln-values to `rel_tol`.
  bool equals(const RegularizedSequence& other, double rel_tol = 0.0) const;

  PositiveSequence as_sequence() const;

 private:
  std::vector<std::size_t> support_;
  std::vector<PowerValue> exact_values_;  // empty in float mode
  std::vector<Real> log_values_;
  std::vector<Scalar> raw_;  // M_0..M_N
  ScalarMode mode_;
  unsigned precision_bits_;
};

// Primal route: monotone-chain lower hull on the points (n, ln M_n).
RegularizedSequence log_convex_regularize(const PositiveSequence& seq,
                                          std::size_t N);
// Dual route: upper envelope of the lines t -> n t - ln M_n, then the
// Legendre sup back, realized on the envelope's breakpoint slopes. Must agree
// with the primal route (exactly in rational mode).
RegularizedSequence regularize_via_legendre(const PositiveSequence& seq,
                                            std::size_t N);

struct TValue {
  Scalar value;
  std::size_t argmax = 0;
  bool truncated = false;  // maximizer sits at the window edge
};

// T(r) = max_{1<=n<=N} r^n / M_n for r >= 1, by direct scan.
TValue t_function(const PositiveSequence& seq, const Scalar& r, std::size_t N);

// Envelope-backed evaluator of ln T(e^t); exact within the window for all t.
class LogTEvaluator {
 public:
  explicit LogTEvaluator(const RegularizedSequence& reg);

  Real ln_t_at(const Real& t) const;
  std::size_t active_index(const Real& t) const;
  std::size_t active_pos(const Real& t) const;
  // Slope at which vertex k (0-based position in support) becomes active.
  Real break_slope(std::size_t k) const { return breaks_.at(k); }
  std::size_t segment_count() const { return breaks_.size(); }
  Real last_slope() const { return breaks_.empty() ? Real(0) : breaks_.back(); }
  const std::vector<std::size_t>& vertices() const { return verts_; }

 private:
  std::vector<std::size_t> verts_;
  std::vector<Real> ln_at_verts_;
  std::vector<Real> breaks_;  // breaks_[k]: slope where verts_[k+1] takes over
};

}  // namespace momentdet

#endif  // MOMENTDET_ENVELOPE_HPP
