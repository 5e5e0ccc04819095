#include "momentdet/piecewise.hpp"

#include <algorithm>

#include "momentdet/envelope.hpp"
#include "momentdet/qa_conditions.hpp"

namespace momentdet {

PiecewisePolynomial::PiecewisePolynomial(std::vector<Rational> breakpoints,
                                         std::vector<RatPoly> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breaks_.size() != pieces_.size() + 1 && !pieces_.empty())
    throw std::invalid_argument("breakpoints must outnumber pieces by one");
  if (!std::is_sorted(breaks_.begin(), breaks_.end()))
    throw std::invalid_argument("breakpoints must be sorted");
  merge_and_trim();
}

PiecewisePolynomial PiecewisePolynomial::indicator(const Rational& a,
                                                   const Rational& b) {
  if (!(a < b)) throw std::invalid_argument("empty indicator interval");
  return PiecewisePolynomial({a, b}, {RatPoly::constant(Rational(1))});
}

int PiecewisePolynomial::degree() const {
  int d = 0;
  for (const RatPoly& p : pieces_) d = std::max(d, p.degree());
  return d;
}

std::pair<Rational, Rational> PiecewisePolynomial::support() const {
  if (pieces_.empty()) return {Rational(0), Rational(0)};
  return {breaks_.front(), breaks_.back()};
}

Rational PiecewisePolynomial::eval(const Rational& x) const {
  if (pieces_.empty() || x < breaks_.front() || !(x < breaks_.back()))
    return Rational(0);
  std::size_t i =
      std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin();
  --i;
  return pieces_[i].eval(x - breaks_[i]);
}

Rational PiecewisePolynomial::left_limit(const Rational& x) const {
  if (pieces_.empty() || !(x > breaks_.front()) || x > breaks_.back())
    return Rational(0);
  std::size_t i =
      std::lower_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin();
  if (i == 0 || breaks_[i] != x) return eval(x);
  return pieces_[i - 1].eval(x - breaks_[i - 1]);
}

Rational PiecewisePolynomial::integral() const {
  Rational total(0);
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    total += pieces_[i].antiderivative().eval(breaks_[i + 1] - breaks_[i]);
  return total;
}

bool PiecewisePolynomial::is_continuous() const {
  if (pieces_.empty()) return true;
  if (pieces_.front().eval(Rational(0)).sign() != 0) return false;
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    Rational left = pieces_[i - 1].eval(breaks_[i] - breaks_[i - 1]);
    if (left != pieces_[i].eval(Rational(0))) return false;
  }
  return pieces_.back().eval(breaks_.back() - breaks_[breaks_.size() - 2]) ==
         Rational(0);
}

void PiecewisePolynomial::merge_and_trim() {
  if (pieces_.empty()) {
    breaks_.clear();
    return;
  }
  // merge adjacent pieces that continue the same polynomial
  std::vector<Rational> nb{breaks_.front()};
  std::vector<RatPoly> np;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!np.empty()) {
      RatPoly continued = np.back().shift(breaks_[i] - nb.back());
      if (continued == pieces_[i]) continue;  // same polynomial, drop the cut
    }
    if (!np.empty()) nb.push_back(breaks_[i]);
    np.push_back(pieces_[i]);
  }
  nb.push_back(breaks_.back());
  // trim zero pieces at both ends
  std::size_t lo = 0, hi = np.size();
  while (lo < hi && np[lo].is_zero()) ++lo;
  while (hi > lo && np[hi - 1].is_zero()) --hi;
  if (lo == hi) {
    breaks_.clear();
    pieces_.clear();
    return;
  }
  pieces_.assign(np.begin() + lo, np.begin() + hi);
  breaks_.assign(nb.begin() + lo, nb.begin() + hi + 1);
}

PiecewisePolynomial PiecewisePolynomial::convolve_uniform(
    const Rational& g) const {
  if (g.sign() <= 0)
    throw std::invalid_argument("averaging half-width must be positive");
  if (pieces_.empty()) return PiecewisePolynomial();

  // Antiderivative P with accumulated constants; P = 0 left of the support
  // and = mass right of it.
  std::vector<RatPoly> anti(pieces_.size());
  std::vector<Rational> cum(pieces_.size() + 1);
  cum[0] = Rational(0);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    anti[i] = pieces_[i].antiderivative();
    cum[i + 1] = cum[i] + anti[i].eval(breaks_[i + 1] - breaks_[i]);
  }
  const Rational mass = cum.back();

  // P(y) as a polynomial in the local variable s = x - u where y = x + off.
  auto P_local = [&](const Rational& u, const Rational& off) -> RatPoly {
    Rational y0 = u + off;  // y at s = 0
    if (y0 < breaks_.front()) return RatPoly();
    if (!(y0 < breaks_.back())) return RatPoly::constant(mass);
    std::size_t j =
        std::upper_bound(breaks_.begin(), breaks_.end(), y0) - breaks_.begin();
    --j;
    // anti_j(s + (y0 - b_j)) + cum_j
    RatPoly shifted = anti[j].shift(y0 - breaks_[j]);
    return shifted + RatPoly::constant(cum[j]);
  };

  std::vector<Rational> nb;
  nb.reserve(2 * breaks_.size());
  for (const Rational& b : breaks_) {
    nb.push_back(b - g);
    nb.push_back(b + g);
  }
  std::sort(nb.begin(), nb.end());
  nb.erase(std::unique(nb.begin(), nb.end()), nb.end());

  std::vector<RatPoly> np;
  np.reserve(nb.size() - 1);
  const Rational half(1, 2);
  for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
    RatPoly plus = P_local(nb[i], g);
    RatPoly minus = P_local(nb[i], -g);
    np.push_back((plus - minus).scaled(half / g));
  }
  return PiecewisePolynomial(std::move(nb), std::move(np));
}

PiecewisePolynomial PiecewisePolynomial::derivative(std::size_t k) const {
  PiecewisePolynomial cur = *this;
  for (std::size_t step = 0; step < k; ++step) {
    if (!cur.is_continuous())
      throw SmoothnessError(
          "differentiating past the smoothness order: the function has "
          "jumps, the derivative would be distributional");
    std::vector<RatPoly> np;
    np.reserve(cur.pieces_.size());
    for (const RatPoly& p : cur.pieces_) np.push_back(p.derivative());
    cur = PiecewisePolynomial(cur.breaks_, std::move(np));
  }
  return cur;
}

bool PiecewisePolynomial::operator==(const PiecewisePolynomial& o) const {
  return breaks_ == o.breaks_ && pieces_ == o.pieces_;
}

PiecewisePolynomial::SupNorm PiecewisePolynomial::sup_norm() const {
  SupNorm out{Rational(0), Rational(0), true};
  if (pieces_.empty()) return out;
  const Rational width = Rational(1) / rat_pow(Rational(2), 64);

  Rational lower(0);
  auto consider_exact = [&lower](const Rational& v) {
    Rational a = v.sign() < 0 ? Rational(-v) : v;
    if (a > lower) lower = a;
  };

  // First pass: exact values at all piece endpoints give the floor.
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    consider_exact(pieces_[i].eval(Rational(0)));
    consider_exact(pieces_[i].eval(breaks_[i + 1] - breaks_[i]));
  }

  // Second pass: pieces whose coarse interval range already sits at or below
  // the floor cannot move the sup; the rest get stationary points isolated.
  Rational upper = lower;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const RatPoly& p = pieces_[i];
    if (p.degree() < 2) continue;  // extrema at endpoints only
    Rational len = breaks_[i + 1] - breaks_[i];
    auto [clo, chi] = p.eval_interval(Rational(0), len);
    Rational coarse = std::max(Rational(-clo), chi);
    if (coarse <= lower) continue;
    for (const RootInterval& r :
         isolate_roots(p.derivative(), Rational(0), len, width)) {
      if (r.lo == r.hi) {
        consider_exact(p.eval(r.lo));
      } else {
        auto [lo, hi] = p.eval_interval(r.lo, r.hi);
        Rational abs_hi = std::max(Rational(-lo), hi);
        if (abs_hi > upper) upper = abs_hi;
        consider_exact(p.eval((r.lo + r.hi) / 2));
      }
    }
  }
  if (lower > upper) upper = lower;
  out.lower = lower;
  out.upper = upper;
  out.exact = out.lower == out.upper;
  return out;
}

nlohmann::json PiecewisePolynomial::to_json() const {
  nlohmann::json j;
  j["degree"] = degree();
  nlohmann::json bs = nlohmann::json::array();
  for (const Rational& b : breaks_) bs.push_back(rational_to_string(b));
  j["breakpoints"] = std::move(bs);
  nlohmann::json ps = nlohmann::json::array();
  for (const RatPoly& p : pieces_) {
    nlohmann::json cs = nlohmann::json::array();
    for (const Rational& c : p.coeffs()) cs.push_back(rational_to_string(c));
    ps.push_back(std::move(cs));
  }
  j["pieces"] = std::move(ps);
  j["variable"] = "local";  // coefficients are in x - left_breakpoint
  return j;
}

PiecewisePolynomial PiecewisePolynomial::from_json(const nlohmann::json& j) {
  std::vector<Rational> breaks;
  for (const auto& b : j.at("breakpoints"))
    breaks.push_back(parse_rational(b.get<std::string>()));
  std::vector<RatPoly> pieces;
  for (const auto& pc : j.at("pieces")) {
    std::vector<Rational> cs;
    for (const auto& c : pc) cs.push_back(parse_rational(c.get<std::string>()));
    pieces.emplace_back(std::move(cs));
  }
  return PiecewisePolynomial(std::move(breaks), std::move(pieces));
}

void PiecewisePolynomial::write_samples_csv(std::ostream& os,
                                            std::size_t samples) const {
  os << "x,value\n";
  if (pieces_.empty() || samples < 2) return;
  PrecisionGuard guard(kDefaultPrecisionBits);
  auto [lo, hi] = support();
  for (std::size_t i = 0; i < samples; ++i) {
    Rational x = lo + (hi - lo) * Rational(static_cast<long>(i)) /
                          Rational(static_cast<long>(samples - 1));
    Real xv = to_real(x), fv = to_real(eval(x));
    os << xv.str(17, std::ios_base::scientific) << ","
       << fv.str(17, std::ios_base::scientific) << "\n";
  }
}

Rational AveragingPlan::mu_total() const {
  Rational s(0);
  for (const Rational& m : mu) s += m;
  return s;
}

AveragingPlan AveragingPlan::centered(std::vector<Rational> mu) {
  AveragingPlan plan;
  plan.mu = std::move(mu);
  Rational total = plan.mu_total();
  plan.base_lo = -total;
  plan.base_hi = total;
  return plan;
}

PiecewisePolynomial build_psi(const AveragingPlan& plan) {
  if (plan.mu.empty())
    throw std::invalid_argument("averaging plan needs at least one width");
  if (plan.mu.size() > kMaxAveragings)
    throw BudgetError("averaging count exceeds the practical cap of " +
                      std::to_string(kMaxAveragings));
  for (const Rational& m : plan.mu)
    if (m.sign() <= 0)
      throw std::invalid_argument("averaging widths must be positive");
  PiecewisePolynomial cur =
      PiecewisePolynomial::indicator(plan.base_lo, plan.base_hi);
  for (const Rational& m : plan.mu) cur = cur.convolve_uniform(m);
  return cur;
}

WitnessReport witness_from_class(const PositiveSequence& seq, std::size_t N,
                                 const SeriesOptions& opts) {
  if (N < 2) throw WindowError("witness construction needs N >= 2");
  if (seq.mode() != ScalarMode::kRational)
    throw InvalidSequenceError(
        "witness construction runs the exact pipeline; rational mode only");

  WitnessReport rep;
  // Feasibility looks at the ratio series on a longer probe window: the
  // question is about the tail of sum mu_n, not about the build size.
  std::size_t probe = std::max<std::size_t>(N, 100);
  Verdict probe_verdict;
  try {
    probe_verdict = condition_e(seq, probe, opts);
  } catch (const WindowError&) {
    probe_verdict = condition_e(seq, N, opts);
  }
  rep.ratio_verdict = probe_verdict;

  if (probe_verdict.status != SeriesStatus::kConvergesLikely) {
    rep.feasible = false;
    rep.diagnosis =
        probe_verdict.status == SeriesStatus::kDivergesLikely
            ? "ratio series diverges on the window: the class is "
              "quasi-analytic by the ratio condition, no compactly "
              "supported witness exists"
            : "ratio series inconclusive on the window";
    return rep;
  }

  if (N > kMaxAveragings)
    throw BudgetError("witness stage count " + std::to_string(N) +
                      " exceeds the practical cap of " +
                      std::to_string(kMaxAveragings));

  RegularizedSequence reg = log_convex_regularize(seq, N);
  std::vector<Rational> mu;
  mu.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    Scalar r = reg.ratio(n);
    if (!r.is_rational())
      throw InvalidSequenceError(
          "envelope ratio at n = " + std::to_string(n) +
          " is irrational; the exact witness pipeline needs rational ratios");
    mu.push_back(r.rat());
  }

  AveragingPlan plan = AveragingPlan::centered(mu);
  PiecewisePolynomial psi = build_psi(plan);

  rep.feasible = true;
  rep.plan = plan;
  rep.psi = psi;
  rep.diagnosis = "witness built; derivative bounds certified below";

  Rational prod(1);
  for (std::size_t k = 1; k + 1 <= N; ++k) {
    prod *= mu[k - 1];
    PiecewisePolynomial dk = psi.derivative(k);
    auto sn = dk.sup_norm();
    WitnessBoundRow row;
    row.order = k;
    row.sup_upper = sn.upper;
    row.bound = Rational(1) / prod;
    row.verified = sn.upper <= row.bound;
    rep.bounds.push_back(row);
  }
  return rep;
}

}  // namespace momentdet
