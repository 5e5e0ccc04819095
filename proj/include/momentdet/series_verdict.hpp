#ifndef MOMENTDET_SERIES_VERDICT_HPP
#define MOMENTDET_SERIES_VERDICT_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentdet/scalar.hpp"

namespace momentdet {

// Divergence of an infinite series is undecidable from a window; the verdict
// is a three-valued judgment with the evidence attached.
enum class SeriesStatus { kDivergesLikely, kConvergesLikely, kInconclusive };

std::string to_string(SeriesStatus s);

struct SeriesOptions {
  double divergence_threshold = 1e3;  // partial sum at or above forces DivergesLikely
  double fit_tolerance = 0.1;         // decay exponent within 1 + tol still diverges
  double tail_fraction = 0.01;        // integral-test tail must stay below this share
  std::size_t min_window = 8;         // rate fitting needs a tail
  std::size_t min_tail_points = 4;

  nlohmann::json to_json() const;
  static SeriesOptions from_json(const nlohmann::json& j);
};

struct TraceRow {
  std::size_t index;
  Real term;
  Real cumulative;
};

struct Verdict {
  SeriesStatus status = SeriesStatus::kInconclusive;
  Scalar partial_sum;                  // exact when every term is rational
  std::size_t terms_used = 0;
  std::optional<double> rate_exponent;  // fitted p in term_n ~ c n^-p
  std::string rationale;
  bool window_truncated = false;
  std::vector<TraceRow> trace;

  nlohmann::json to_json() const;
};

// Terms are the series entries for indices start_index, start_index+1, ...;
// all must be strictly positive.
Verdict classify_series(const std::vector<Scalar>& terms,
                        const SeriesOptions& opts, unsigned precision_bits,
                        std::size_t start_index = 1);

// Columns: index, term, cumulative.
void write_trace_csv(std::ostream& os, const Verdict& v);

}  // namespace momentdet

#endif  // MOMENTDET_SERIES_VERDICT_HPP
