#ifndef MOMENTDET_QA_CONDITIONS_HPP
#define MOMENTDET_QA_CONDITIONS_HPP

#include <array>
#include <optional>

#include "momentdet/envelope.hpp"
#include "momentdet/series_verdict.hpp"

namespace momentdet {

// beta_n = min_{n <= k <= N} M_k^(1/k); nondecreasing in n by construction.
struct BetaSequence {
  std::vector<Scalar> values;        // n = 1..N
  std::vector<PowerValue> exact;     // rational mode only
  std::vector<std::size_t> argmin;   // minimizing k per n
  bool window_truncated = false;     // some minimizer sits at k = N
};

BetaSequence beta_sequence(const PositiveSequence& seq, std::size_t N);

// Sum of 1/beta_n.
Verdict condition_b(const PositiveSequence& seq, std::size_t N,
                    const SeriesOptions& opts = {});
// Sum of (M_n^c)^(-1/n) over the regularized window.
Verdict condition_c(const PositiveSequence& seq, std::size_t N,
                    const SeriesOptions& opts = {});
// Sum of M^c_{n-1} / M^c_n (the n = 1 term uses M_0).
Verdict condition_e(const PositiveSequence& seq, std::size_t N,
                    const SeriesOptions& opts = {});

struct ConditionDResult {
  Verdict verdict;            // partial_sum carries the integral value
  Real quad_value;            // adaptive Simpson route
  Real segment_value;         // exact per-segment closed form, same truncation
  Real tau;                   // ln R actually integrated to
  Real coverage_slope;        // last envelope slope t_K
  bool beyond_coverage = false;
  // Rows (r, lnT(r)/r^2, cumulative integral) for CSV export.
  std::vector<std::array<Real, 3>> integrand_trace;
};

// Integral of ln T(r)/r^2 over [1, R] with growth-rate classification of the
// integrand. Default R = e^{t_K} keeps every sample inside the window's
// coverage, where the windowed T equals the true T.
ConditionDResult condition_d(const PositiveSequence& seq, std::size_t N,
                             std::optional<Real> R = std::nullopt,
                             const SeriesOptions& opts = {});

struct ConsistencyReport {
  Verdict b, c, e;
  ConditionDResult d;
  bool consistent = true;
  std::optional<SeriesStatus> consensus;
  std::string defect;  // set when two non-Inconclusive statuses disagree

  nlohmann::json to_json() const;
};

// Runs (b), (c), (d), (e); two contradictory non-Inconclusive statuses are
// a defect, since the conditions are equivalent for the limit series.
ConsistencyReport verdict_consistency(const PositiveSequence& seq,
                                      std::size_t N,
                                      std::optional<Real> R = std::nullopt,
                                      const SeriesOptions& opts = {});

struct IdentityCheckResult {
  Real lhs_quadrature;  // numeric integration of the windowed integrand
  Real lhs_segment;     // closed-form segment integration, same truncation
  Real rhs_sum;         // lnT(1) + 1 + sum_{n=1}^{N-1} M^c_n/M^c_{n+1}
  Real residual;        // |lhs_quadrature - rhs_sum|
  Real tau;             // ln R used for the left side
  std::size_t vertex_count;
};

// Both sides of the integral identity linking T to the envelope ratios,
// computed independently. With R "matched" (default e^{3 t_K}) the neglected
// boundary term e^{-tau} (lnT(e^tau) + N(tau)) vanishes as the window grows,
// so the residual shrinks with N. Requesting R strictly inside the coverage
// leaves an O(1) truncation mismatch and raises TruncationError.
IdentityCheckResult mandelbrojt_identity_check(
    const PositiveSequence& seq, std::size_t N,
    std::optional<Real> R = std::nullopt);

struct CarlemanInequalityResult {
  bool holds;
  Real lhs;  // sum of geometric means (a_1...a_n)^(1/n)
  Real rhs;  // e * sum of a_n
};

CarlemanInequalityResult carleman_inequality_check(const PositiveSequence& a,
                                                   std::size_t N);

}  // namespace momentdet

#endif  // MOMENTDET_QA_CONDITIONS_HPP
