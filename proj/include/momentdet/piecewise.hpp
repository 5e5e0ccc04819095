#ifndef MOMENTDET_PIECEWISE_HPP
#define MOMENTDET_PIECEWISE_HPP

#include <optional>

#include <nlohmann/json.hpp>

#include "momentdet/polynomial.hpp"
#include "momentdet/sequence.hpp"
#include "momentdet/series_verdict.hpp"

namespace momentdet {

struct SmoothnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact piecewise polynomial on the line, identically zero outside its
// breakpoint range. Pieces live on [b_i, b_{i+1}) with coefficients in the
// local variable x - b_i, which keeps the rationals small.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;  // the zero function
  PiecewisePolynomial(std::vector<Rational> breakpoints,
                      std::vector<RatPoly> pieces);

  static PiecewisePolynomial indicator(const Rational& a, const Rational& b);

  bool is_zero() const { return pieces_.empty(); }
  std::size_t piece_count() const { return pieces_.size(); }
  int degree() const;
  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<RatPoly>& pieces() const { return pieces_; }
  std::pair<Rational, Rational> support() const;

  Rational eval(const Rational& x) const;
  Rational left_limit(const Rational& x) const;
  Rational integral() const;  // total mass, exact
  bool is_continuous() const;

  // x -> (1/2g) * integral of p over [x-g, x+g]; exact, degree + 1.
  PiecewisePolynomial convolve_uniform(const Rational& g) const;

  // k-fold classical derivative; jumps must not be differentiated, so every
  // step requires continuity of the current function.
  PiecewisePolynomial derivative(std::size_t k = 1) const;

  bool operator==(const PiecewisePolynomial& o) const;

  struct SupNorm {
    Rational lower;  // attained by an exact evaluation
    Rational upper;  // certified bound from interval enclosures
    bool exact = false;
  };
  // Certified enclosure of sup |p|: piece endpoints exactly, interior
  // stationary points through Sturm isolation refined to width 2^-64 and
  // interval evaluation.
  SupNorm sup_norm() const;

  nlohmann::json to_json() const;
  static PiecewisePolynomial from_json(const nlohmann::json& j);
  // Columns: x, value (decimal), sampled uniformly across the support.
  void write_samples_csv(std::ostream& os, std::size_t samples) const;

 private:
  std::vector<Rational> breaks_;  // size = pieces + 1 when non-empty
  std::vector<RatPoly> pieces_;
  void merge_and_trim();
};

// The averaging recipe: widths mu_1..mu_count applied to the indicator of
// base_interval.
struct AveragingPlan {
  std::vector<Rational> mu;
  Rational base_lo, base_hi;

  Rational mu_total() const;
  static AveragingPlan centered(std::vector<Rational> mu);  // base [-sum, sum]
};

PiecewisePolynomial build_psi(const AveragingPlan& plan);

struct WitnessBoundRow {
  std::size_t order;       // k
  Rational sup_upper;      // certified upper bound of sup |D^k psi|
  Rational bound;          // 1/(mu_1...mu_k)
  bool verified;           // sup_upper <= bound certified
};

struct WitnessReport {
  bool feasible = false;
  Verdict ratio_verdict;       // verdict on the series sum mu_n
  std::string diagnosis;
  std::optional<AveragingPlan> plan;
  std::optional<PiecewisePolynomial> psi;
  std::vector<WitnessBoundRow> bounds;
};

// Builds the compactly supported witness for the class of `seq` from the
// envelope ratios mu_n = M^c_{n-1}/M^c_n, when their series is summable on
// the window evidence; otherwise reports infeasibility (the class is then
// quasi-analytic by the ratio condition). Requires exact rational mode.
WitnessReport witness_from_class(const PositiveSequence& seq, std::size_t N,
                                 const SeriesOptions& opts = {});

constexpr std::size_t kMaxAveragings = 12;

}  // namespace momentdet

#endif  // MOMENTDET_PIECEWISE_HPP
