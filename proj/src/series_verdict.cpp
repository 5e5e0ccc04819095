#include "momentdet/series_verdict.hpp"

#include <cmath>

namespace momentdet {

std::string to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::kDivergesLikely:
      return "DivergesLikely";
    case SeriesStatus::kConvergesLikely:
      return "ConvergesLikely";
    case SeriesStatus::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

nlohmann::json SeriesOptions::to_json() const {
  return {{"divergence_threshold", divergence_threshold},
          {"fit_tolerance", fit_tolerance},
          {"tail_fraction", tail_fraction},
          {"min_window", min_window},
          {"min_tail_points", min_tail_points}};
}

SeriesOptions SeriesOptions::from_json(const nlohmann::json& j) {
  SeriesOptions o;
  o.divergence_threshold = j.value("divergence_threshold", o.divergence_threshold);
  o.fit_tolerance = j.value("fit_tolerance", o.fit_tolerance);
  o.tail_fraction = j.value("tail_fraction", o.tail_fraction);
  o.min_window = j.value("min_window", o.min_window);
  o.min_tail_points = j.value("min_tail_points", o.min_tail_points);
  return o;
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json j;
  j["status"] = to_string(status);
  j["partial_sum"] = partial_sum.to_string();
  j["terms_used"] = terms_used;
  if (rate_exponent)
    j["rate_exponent"] = *rate_exponent;
  else
    j["rate_exponent"] = nullptr;
  j["rationale"] = rationale;
  j["window_truncated"] = window_truncated;
  return j;
}

Verdict classify_series(const std::vector<Scalar>& terms,
                        const SeriesOptions& opts, unsigned precision_bits,
                        std::size_t start_index) {
  PrecisionGuard guard(precision_bits);
  Verdict v;
  v.terms_used = terms.size();

  bool all_rational = true;
  for (const Scalar& t : terms) {
    if (!t.is_positive())
      throw InvalidSequenceError("series terms must be strictly positive");
    all_rational = all_rational && t.is_rational();
  }

  Real cumulative(0);
  Rational exact_sum(0);
  v.trace.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Real t = terms[i].real();
    cumulative += t;
    if (all_rational) exact_sum += terms[i].rat();
    v.trace.push_back({start_index + i, t, cumulative});
  }
  v.partial_sum = all_rational ? Scalar(exact_sum) : Scalar(cumulative);

  double sum_d = static_cast<double>(cumulative);
  if (sum_d >= opts.divergence_threshold) {
    v.status = SeriesStatus::kDivergesLikely;
    v.rationale = "partial-sum-threshold";
    return v;
  }
  if (terms.size() < opts.min_window) {
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "window-too-small";
    return v;
  }

  // Log-log least squares of the term decay over the upper half-window; the
  // first half is treated as transient.
  std::size_t lo = terms.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = lo; i < terms.size(); ++i) {
    double x = std::log(static_cast<double>(start_index + i));
    double y = static_cast<double>(log(terms[i].real()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < opts.min_tail_points) {
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "too-few-tail-points";
    return v;
  }
  double denom = count * sxx - sx * sx;
  if (denom <= 0) {
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "degenerate-fit";
    return v;
  }
  double slope = (count * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / count;
  double p = -slope;
  v.rate_exponent = p;

  if (p <= 1.0 + opts.fit_tolerance) {
    v.status = SeriesStatus::kDivergesLikely;
    v.rationale = "rate-fit";
    return v;
  }

  // Integral-test tail estimate: sum_{n>N} c n^-p ~ c N^(1-p)/(p-1), in log
  // space so super-polynomial decay cannot overflow.
  double last_n = static_cast<double>(start_index + terms.size());
  double ln_tail = intercept + (1.0 - p) * std::log(last_n) - std::log(p - 1.0);
  double ln_budget = std::log(opts.tail_fraction * sum_d);
  if (ln_tail < ln_budget) {
    v.status = SeriesStatus::kConvergesLikely;
    v.rationale = "rate-fit+tail-bound";
    return v;
  }
  v.status = SeriesStatus::kInconclusive;
  v.rationale = "tail-not-dominated";
  return v;
}

void write_trace_csv(std::ostream& os, const Verdict& v) {
  os << "index,term,cumulative\n";
  for (const TraceRow& row : v.trace)
    os << row.index << "," << row.term.str(20, std::ios_base::scientific)
       << "," << row.cumulative.str(20, std::ios_base::scientific) << "\n";
}

}  // namespace momentdet
