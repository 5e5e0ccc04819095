#include "momentdet/qa_conditions.hpp"

#include <cmath>

#include "momentdet/quadrature.hpp"

namespace momentdet {

namespace {

void require_window(std::size_t N, std::size_t min) {
  if (N < min)
    throw WindowError("window too small: N = " + std::to_string(N) +
                      ", need >= " + std::to_string(min));
}

// Closed-form integral of lnT(e^t) e^{-t} over [t0, t1] on a segment where
// lnT(e^t) = v t - c: the antiderivative is -e^{-t} (v t - c + v).
Real segment_integral(long v, const Real& c, const Real& t0, const Real& t1) {
  Real f0 = exp(-t0) * (Real(v) * t0 - c + Real(v));
  Real f1 = exp(-t1) * (Real(v) * t1 - c + Real(v));
  return f0 - f1;
}

// Integral of the windowed integrand from 0 to tau via the envelope segments.
Real segment_route(const LogTEvaluator& lt, const RegularizedSequence& reg,
                   const Real& tau) {
  Real total(0);
  Real lo(0);
  const auto& verts = lt.vertices();
  for (std::size_t s = 0; s < verts.size(); ++s) {
    Real hi = s < lt.segment_count() ? lt.break_slope(s) : tau;
    if (hi > tau) hi = tau;
    if (hi > lo) {
      long v = static_cast<long>(verts[s]);
      Real c = reg.log_value(verts[s]);
      total += segment_integral(v, c, lo, hi);
      lo = hi;
    }
    if (lo >= tau) break;
  }
  if (lo < tau) {  // beyond the last breakpoint the top vertex stays active
    long v = static_cast<long>(verts.back());
    Real c = reg.log_value(verts.back());
    total += segment_integral(v, c, lo, tau);
  }
  return total;
}

// Numeric route: the integrand is smooth between envelope breakpoints, so
// adapt within each piece and sum.
QuadratureResult quadrature_route(const LogTEvaluator& lt, const Real& tau,
                                  const Real& tol) {
  auto integrand = [&lt](const Real& t) { return lt.ln_t_at(t) * exp(-t); };
  std::vector<Real> cuts{Real(0)};
  for (std::size_t s = 0; s < lt.segment_count(); ++s) {
    Real b = lt.break_slope(s);
    if (b > 0 && b < tau) cuts.push_back(b);
  }
  cuts.push_back(tau);
  Real piece_tol = tol / Real(static_cast<long>(cuts.size()));
  QuadratureResult total;
  total.value = Real(0);
  total.error_estimate = Real(0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureResult r =
        adaptive_simpson(integrand, cuts[i], cuts[i + 1], piece_tol);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
  }
  return total;
}

}  // namespace

BetaSequence beta_sequence(const PositiveSequence& seq, std::size_t N) {
  require_window(N, 1);
  PrecisionGuard guard(seq.precision_bits());
  BetaSequence out;
  out.values.resize(N);
  out.argmin.resize(N);
  bool exact = seq.mode() == ScalarMode::kRational;
  if (exact) out.exact.resize(N);

  if (exact) {
    PowerValue best(seq.at(N).rat(), static_cast<unsigned>(N));
    std::size_t best_k = N;
    for (std::size_t n = N; n >= 1; --n) {
      PowerValue cand(seq.at(n).rat(), static_cast<unsigned>(n));
      if (n == N || cand.compare(best) != std::strong_ordering::greater) {
        best = cand;
        best_k = n;
      }
      out.exact[n - 1] = best;
      out.argmin[n - 1] = best_k;
      out.values[n - 1] = best.is_rational() ? Scalar(best.base())
                                             : Scalar(best.to_real());
      if (n == 1) break;
    }
  } else {
    Real best_log = log(seq.at_real(N)) / Real(static_cast<long>(N));
    std::size_t best_k = N;
    for (std::size_t n = N; n >= 1; --n) {
      Real cand = log(seq.at_real(n)) / Real(static_cast<long>(n));
      if (n == N || cand <= best_log) {
        best_log = cand;
        best_k = n;
      }
      out.values[n - 1] = Scalar(Real(exp(best_log)));
      out.argmin[n - 1] = best_k;
      if (n == 1) break;
    }
  }
  for (std::size_t n = 0; n + 1 < N; ++n)
    if (out.argmin[n] == N) out.window_truncated = true;
  return out;
}

Verdict condition_b(const PositiveSequence& seq, std::size_t N,
                    const SeriesOptions& opts) {
  require_window(N, 1);
  PrecisionGuard guard(seq.precision_bits());
  BetaSequence beta = beta_sequence(seq, N);
  std::vector<Scalar> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n)
    terms.push_back(Scalar(1) / beta.values[n - 1]);
  Verdict v = classify_series(terms, opts, seq.precision_bits());
  v.window_truncated = beta.window_truncated;
  return v;
}

Verdict condition_c(const PositiveSequence& seq, std::size_t N,
                    const SeriesOptions& opts) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  RegularizedSequence reg = log_convex_regularize(seq, N);
  std::vector<Scalar> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    if (reg.is_exact()) {
      const PowerValue& pv = reg.exact_value(n);
      // (b^(1/r))^(-1/n) = (1/b)^(1/(r n))
      PowerValue term(Rational(1) / pv.base(),
                      pv.root() * static_cast<unsigned>(n));
      terms.push_back(term.is_rational() ? Scalar(term.base())
                                         : Scalar(term.to_real()));
    } else {
      terms.push_back(
          Scalar(Real(exp(-reg.log_value(n) / Real(static_cast<long>(n))))));
    }
  }
  return classify_series(terms, opts, seq.precision_bits());
}

Verdict condition_e(const PositiveSequence& seq, std::size_t N,
                    const SeriesOptions& opts) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  RegularizedSequence reg = log_convex_regularize(seq, N);
  std::vector<Scalar> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) terms.push_back(reg.ratio(n));
  return classify_series(terms, opts, seq.precision_bits());
}

ConditionDResult condition_d(const PositiveSequence& seq, std::size_t N,
                             std::optional<Real> R, const SeriesOptions& opts) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  ConditionDResult out;

  RegularizedSequence reg = log_convex_regularize(seq, N);
  LogTEvaluator lt(reg);
  out.coverage_slope = lt.last_slope();

  if (R) {
    if (*R < 1) throw std::invalid_argument("condition (d) requires R >= 1");
    out.tau = log(*R);
  } else {
    out.tau = out.coverage_slope;
  }
  out.beyond_coverage = out.tau > out.coverage_slope;

  Verdict& v = out.verdict;
  if (out.tau <= 0) {
    // No informative coverage (e.g. a constant window: every slope is zero).
    out.quad_value = Real(0);
    out.segment_value = Real(0);
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "empty-coverage";
    v.partial_sum = Scalar(Real(0));
    return out;
  }

  QuadratureResult quad = quadrature_route(lt, out.tau, Real("1e-10"));
  out.quad_value = quad.value;
  out.segment_value = segment_route(lt, reg, out.tau);

  // Trace rows and the rate fit sample the integrand uniformly in t = ln r.
  const std::size_t kSamples = 257;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  Real lo_fit = out.tau / 2;
  for (std::size_t i = 0; i < kSamples; ++i) {
    Real t = out.tau * Real(static_cast<long>(i)) /
             Real(static_cast<long>(kSamples - 1));
    Real lnT = lt.ln_t_at(t);
    out.integrand_trace.push_back(
        {Real(exp(t)), Real(lnT * exp(-2 * t)), segment_route(lt, reg, t)});
    if (t >= lo_fit && lnT > 0) {
      double x = static_cast<double>(t);  // ln r
      double y = static_cast<double>(log(lnT)) - 2 * x;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  }

  v.partial_sum = Scalar(out.quad_value);
  v.terms_used = count;
  v.window_truncated = out.beyond_coverage;

  double integral_d = static_cast<double>(out.quad_value);
  if (N < opts.min_window &&
      integral_d < opts.divergence_threshold) {  // rate fitting needs a tail
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "window-too-small";
    return out;
  }
  if (integral_d >= opts.divergence_threshold) {
    v.status = SeriesStatus::kDivergesLikely;
    v.rationale = "integral-threshold";
    return out;
  }
  if (count < std::max<std::size_t>(opts.min_tail_points, 2)) {
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "too-few-samples";
    return out;
  }
  double denom = count * sxx - sx * sx;
  if (denom <= 0) {
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "degenerate-fit";
    return out;
  }
  double slope = (count * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / count;
  double q = -slope;
  v.rate_exponent = q;

  if (q <= 1.0 + opts.fit_tolerance) {
    v.status = SeriesStatus::kDivergesLikely;
    v.rationale = "integrand-rate-fit";
    return out;
  }
  // Tail of the integral beyond R: integral of c r^-q = c R^(1-q)/(q-1).
  double tau_d = static_cast<double>(out.tau);
  double ln_tail = intercept + (1.0 - q) * tau_d - std::log(q - 1.0);
  if (out.beyond_coverage) {
    // Beyond coverage the windowed T underestimates the true T, so a
    // convergence claim would not be trustworthy.
    v.status = SeriesStatus::kInconclusive;
    v.rationale = "window-truncated";
    return out;
  }
  if (integral_d > 0 && ln_tail < std::log(opts.tail_fraction * integral_d)) {
    v.status = SeriesStatus::kConvergesLikely;
    v.rationale = "integrand-rate-fit+tail-bound";
    return out;
  }
  v.status = SeriesStatus::kInconclusive;
  v.rationale = "tail-not-dominated";
  return out;
}

nlohmann::json ConsistencyReport::to_json() const {
  nlohmann::json j;
  j["b"] = b.to_json();
  j["c"] = c.to_json();
  j["d"] = d.verdict.to_json();
  j["e"] = e.to_json();
  j["consistent"] = consistent;
  j["consensus"] = consensus ? to_string(*consensus) : "none";
  if (!defect.empty()) j["defect"] = defect;
  return j;
}

ConsistencyReport verdict_consistency(const PositiveSequence& seq,
                                      std::size_t N, std::optional<Real> R,
                                      const SeriesOptions& opts) {
  ConsistencyReport rep;
  rep.b = condition_b(seq, N, opts);
  rep.c = condition_c(seq, N, opts);
  rep.e = condition_e(seq, N, opts);
  rep.d = condition_d(seq, N, R, opts);

  std::array<std::pair<const char*, SeriesStatus>, 4> statuses = {
      std::pair{"b", rep.b.status}, std::pair{"c", rep.c.status},
      std::pair{"d", rep.d.verdict.status}, std::pair{"e", rep.e.status}};
  std::optional<SeriesStatus> agreed;
  for (const auto& [name, st] : statuses) {
    if (st == SeriesStatus::kInconclusive) continue;
    if (!agreed) {
      agreed = st;
    } else if (*agreed != st) {
      rep.consistent = false;
      rep.defect = std::string("conditions disagree: (") + name + ") reports " +
                   to_string(st) + " against " + to_string(*agreed);
    }
  }
  rep.consensus = rep.consistent
                      ? (agreed ? agreed
                                : std::optional<SeriesStatus>(
                                      SeriesStatus::kInconclusive))
                      : std::nullopt;
  return rep;
}

IdentityCheckResult mandelbrojt_identity_check(const PositiveSequence& seq,
                                               std::size_t N,
                                               std::optional<Real> R) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  RegularizedSequence reg = log_convex_regularize(seq, N);
  LogTEvaluator lt(reg);

  IdentityCheckResult out;
  Real t_K = lt.last_slope();
  if (R) {
    if (*R < 1)
      throw std::invalid_argument("identity check requires R >= 1");
    out.tau = log(*R);
    if (out.tau < t_K)
      throw TruncationError(
          "R truncates the integral inside the window coverage; the two "
          "sides would not pair up (need ln R >= " +
          t_K.str(8, std::ios_base::fixed) + ")");
  } else {
    Real floor_slope = t_K > 1 ? t_K : Real(1);
    out.tau = 3 * floor_slope;  // matched: boundary term ~ N tau e^{-tau}
  }
  out.vertex_count = lt.vertices().size();

  QuadratureResult quad = quadrature_route(lt, out.tau, Real("1e-12"));
  out.lhs_quadrature = quad.value;
  out.lhs_segment = segment_route(lt, reg, out.tau);

  Real rhs = lt.ln_t_at(Real(0)) + 1;  // lnT(1) + 1
  for (std::size_t n = 1; n + 1 <= N; ++n) rhs += reg.ratio_real(n + 1);
  out.rhs_sum = rhs;
  out.residual = abs(out.lhs_quadrature - out.rhs_sum);
  return out;
}

CarlemanInequalityResult carleman_inequality_check(const PositiveSequence& a,
                                                   std::size_t N) {
  require_window(N, 1);
  PrecisionGuard guard(a.precision_bits());
  Real lhs(0), sum(0), log_prod(0);
  for (std::size_t n = 1; n <= N; ++n) {
    Real an = a.at_real(n);
    log_prod += log(an);
    lhs += exp(log_prod / Real(static_cast<long>(n)));
    sum += an;
  }
  CarlemanInequalityResult out;
  out.lhs = lhs;
  out.rhs = exp(Real(1)) * sum;
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace momentdet
