#include "momentdet/envelope.hpp"

#include <algorithm>
#include <numeric>

namespace momentdet {

namespace {

void require_window(std::size_t N, std::size_t min) {
  if (N < min)
    throw WindowError("window too small: N = " + std::to_string(N) +
                      ", need >= " + std::to_string(min));
}

// Sign of (j-i)*lnM_k + (k-j)*lnM_i - (k-i)*lnM_j, i < j < k; positive means
// the middle point lies strictly below the (i,k) chord. Exact via cross powers.
int chord_sign_exact(const Rational& mi, const Rational& mj,
                     const Rational& mk, std::size_t i, std::size_t j,
                     std::size_t k) {
  Rational lhs = rat_pow(mk, static_cast<unsigned>(j - i)) *
                 rat_pow(mi, static_cast<unsigned>(k - j));
  Rational rhs = rat_pow(mj, static_cast<unsigned>(k - i));
  if (lhs > rhs) return 1;
  if (lhs < rhs) return -1;
  return 0;
}

// Same sign, at working precision; ties within ~2 ulps count as collinear.
int chord_sign_float(const Real& li, const Real& lj, const Real& lk,
                     std::size_t i, std::size_t j, std::size_t k,
                     unsigned bits) {
  Real a = Real(static_cast<long>(j - i)) * (lk - li);
  Real b = Real(static_cast<long>(k - i)) * (lj - li);
  Real cross = a - b;
  Real scale = std::max(Real(abs(a)), Real(abs(b)));
  Real eps = boost::multiprecision::ldexp(scale, 2 - static_cast<int>(bits));
  if (cross > eps) return 1;
  if (cross < -eps) return -1;
  return 0;
}

struct HullInput {
  std::vector<Rational> rats;  // M_1..M_N when exact
  std::vector<Real> logs;      // ln M_1..ln M_N, always
  bool exact = false;
  unsigned bits = kDefaultPrecisionBits;

  int chord_sign(std::size_t i, std::size_t j, std::size_t k) const {
    // indices are 1-based sequence positions
    if (exact)
      return chord_sign_exact(rats[i - 1], rats[j - 1], rats[k - 1], i, j, k);
    return chord_sign_float(logs[i - 1], logs[j - 1], logs[k - 1], i, j, k,
                            bits);
  }
};

HullInput collect(const PositiveSequence& seq, std::size_t N) {
  HullInput in;
  in.exact = seq.mode() == ScalarMode::kRational;
  in.bits = seq.precision_bits();
  in.logs.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    const Scalar& v = seq.at(n);
    if (in.exact) in.rats.push_back(v.rat());
    in.logs.push_back(log(v.real()));
  }
  return in;
}

// Builds the regularized values from a vertex list (shared by both routes).
RegularizedSequence assemble(const PositiveSequence& seq, std::size_t N,
                             std::vector<std::size_t> verts,
                             const HullInput& in) {
  std::vector<Real> log_values(N);
  std::vector<PowerValue> exact_values;
  if (in.exact) exact_values.resize(N);

  for (std::size_t s = 0; s + 1 < verts.size(); ++s) {
    std::size_t i = verts[s], k = verts[s + 1];
    for (std::size_t n = i; n < k; ++n) {
      Real li = in.logs[i - 1], lk = in.logs[k - 1];
      log_values[n - 1] =
          (Real(static_cast<long>(k - n)) * li +
           Real(static_cast<long>(n - i)) * lk) /
          Real(static_cast<long>(k - i));
      if (in.exact) {
        unsigned a = static_cast<unsigned>(k - n);
        unsigned b = static_cast<unsigned>(n - i);
        unsigned r = static_cast<unsigned>(k - i);
        unsigned g = std::gcd(std::gcd(a, b), r);
        exact_values[n - 1] = PowerValue(
            rat_pow(in.rats[i - 1], a / g) * rat_pow(in.rats[k - 1], b / g),
            r / g);
      }
    }
  }
  std::size_t last = verts.back();
  log_values[last - 1] = in.logs[last - 1];
  if (in.exact) exact_values[last - 1] = PowerValue(in.rats[last - 1], 1);

  std::vector<Scalar> raw;
  raw.reserve(N + 1);
  for (std::size_t n = 0; n <= N; ++n) raw.push_back(seq.at(n));

  return RegularizedSequence(std::move(verts), std::move(exact_values),
                             std::move(log_values), std::move(raw), seq.mode(),
                             seq.precision_bits());
}

}  // namespace

LogConvexityReport is_log_convex(const PositiveSequence& seq, std::size_t N) {
  require_window(N, 2);
  LogConvexityReport rep;
  for (std::size_t n = 1; n + 1 <= N; ++n) {
    const Scalar sq = seq.at(n) * seq.at(n);
    const Scalar prod = seq.at(n - 1) * seq.at(n + 1);
    if (sq > prod) {
      rep.log_convex = false;
      rep.first_violation = n;
      return rep;
    }
  }
  return rep;
}

LogConvexityReport log_convex_by_ratios(const PositiveSequence& seq,
                                        std::size_t N) {
  require_window(N, 2);
  LogConvexityReport rep;
  Scalar prev_ratio = seq.at(1) / seq.at(0);
  for (std::size_t n = 2; n <= N; ++n) {
    Scalar ratio = seq.at(n) / seq.at(n - 1);
    if (ratio < prev_ratio) {
      rep.log_convex = false;
      rep.first_violation = n - 1;
      return rep;
    }
    prev_ratio = ratio;
  }
  return rep;
}

LogConvexityReport log_convex_by_logs(const PositiveSequence& seq,
                                      std::size_t N) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  LogConvexityReport rep;
  std::vector<Real> l(N + 1);
  for (std::size_t n = 0; n <= N; ++n) l[n] = log(seq.at_real(n));
  for (std::size_t n = 1; n + 1 <= N; ++n) {
    Real second = l[n - 1] + l[n + 1] - 2 * l[n];
    Real scale = std::max(std::max(Real(abs(l[n - 1])), Real(abs(l[n + 1]))),
                          std::max(Real(2 * abs(l[n])), Real(1)));
    Real eps = boost::multiprecision::ldexp(
        scale, 2 - static_cast<int>(seq.precision_bits()));
    if (second < -eps) {
      rep.log_convex = false;
      rep.first_violation = n;
      return rep;
    }
  }
  return rep;
}

RegularizedSequence::RegularizedSequence(std::vector<std::size_t> support,
                                         std::vector<PowerValue> exact_values,
                                         std::vector<Real> log_values,
                                         std::vector<Scalar> raw,
                                         ScalarMode mode,
                                         unsigned precision_bits)
    : support_(std::move(support)),
      exact_values_(std::move(exact_values)),
      log_values_(std::move(log_values)),
      raw_(std::move(raw)),
      mode_(mode),
      precision_bits_(precision_bits) {}

const PowerValue& RegularizedSequence::exact_value(std::size_t n) const {
  if (!is_exact())
    throw std::logic_error("exact envelope values unavailable in float mode");
  return exact_values_.at(n - 1);
}

Real RegularizedSequence::value_real(std::size_t n) const {
  if (is_exact()) return exact_values_.at(n - 1).to_real();
  return exp(log_values_.at(n - 1));
}

Scalar RegularizedSequence::value(std::size_t n) const {
  if (is_exact()) {
    const PowerValue& pv = exact_values_.at(n - 1);
    if (pv.is_rational()) return Scalar(pv.base());
    return Scalar(pv.to_real());
  }
  return Scalar(value_real(n));
}

Scalar RegularizedSequence::ratio(std::size_t n) const {
  if (n == 0 || n > window()) throw WindowError("ratio index out of window");
  if (is_exact()) {
    PowerValue prev = n == 1 ? PowerValue(raw_[0].rat(), 1)
                             : exact_values_.at(n - 2);
    PowerValue q = prev.div(exact_values_.at(n - 1));
    if (q.is_rational()) return Scalar(q.base());
    return Scalar(q.to_real());
  }
  return Scalar(ratio_real(n));
}

Real RegularizedSequence::ratio_real(std::size_t n) const {
  if (n == 0 || n > window()) throw WindowError("ratio index out of window");
  Real prev = n == 1 ? log(raw_[0].real()) : log_values_.at(n - 2);
  return exp(prev - log_values_.at(n - 1));
}

bool RegularizedSequence::equals(const RegularizedSequence& other,
                                 double rel_tol) const {
  if (window() != other.window()) return false;
  if (is_exact() && other.is_exact()) {
    if (support_ != other.support_) return false;
    for (std::size_t n = 1; n <= window(); ++n)
      if (!(exact_values_[n - 1] == other.exact_values_[n - 1])) return false;
    return true;
  }
  Real tol(rel_tol);
  for (std::size_t n = 1; n <= window(); ++n) {
    Real a = log_values_[n - 1], b = other.log_values_[n - 1];
    Real scale = std::max(std::max(Real(abs(a)), Real(abs(b))), Real(1));
    if (abs(a - b) > tol * scale) return false;
  }
  return true;
}

PositiveSequence RegularizedSequence::as_sequence() const {
  std::vector<Scalar> values;
  values.reserve(window() + 1);
  values.push_back(raw_[0]);
  bool all_rational = true;
  for (std::size_t n = 1; n <= window(); ++n) {
    values.push_back(value(n));
    all_rational = all_rational && values.back().is_rational();
  }
  ScalarMode out = (mode_ == ScalarMode::kRational && all_rational)
                       ? ScalarMode::kRational
                       : ScalarMode::kFloat;
  return PositiveSequence::from_values(std::move(values), out, precision_bits_,
                                       "regularized");
}

RegularizedSequence log_convex_regularize(const PositiveSequence& seq,
                                          std::size_t N) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  HullInput in = collect(seq, N);

  // Monotone chain, x already sorted; pops keep strict vertices only.
  std::vector<std::size_t> hull;
  for (std::size_t n = 1; n <= N; ++n) {
    while (hull.size() >= 2 &&
           in.chord_sign(hull[hull.size() - 2], hull.back(), n) <= 0)
      hull.pop_back();
    hull.push_back(n);
  }
  return assemble(seq, N, std::move(hull), in);
}

RegularizedSequence regularize_via_legendre(const PositiveSequence& seq,
                                            std::size_t N) {
  require_window(N, 2);
  PrecisionGuard guard(seq.precision_bits());
  HullInput in = collect(seq, N);

  // Upper envelope of the lines t -> n t - ln M_n, inserted in slope order.
  // Line j is dominated by neighbours i < j < n iff its takeover slope
  // against i is not before the takeover of n against i; spelled out on the
  // intercepts this is the chord test again, as the two problems are
  // Legendre duals of each other.
  std::vector<std::size_t> active;
  for (std::size_t n = 1; n <= N; ++n) {
    while (active.size() >= 2) {
      std::size_t i = active[active.size() - 2];
      std::size_t j = active.back();
      if (in.chord_sign(i, j, n) > 0) break;
      active.pop_back();
    }
    active.push_back(n);
  }

  // ln M^c_n = sup_t (n t - U(t)) with U the line envelope. The objective is
  // concave and piecewise linear in t, so the sup is attained on an envelope
  // breakpoint; evaluate every breakpoint and take the maximum.
  std::vector<Real> log_values(N);
  std::vector<PowerValue> exact_values;
  if (in.exact) exact_values.resize(N);

  auto float_candidate = [&](std::size_t v, std::size_t w, std::size_t n) {
    return (Real(static_cast<long>(w) - static_cast<long>(n)) * in.logs[v - 1] +
            Real(static_cast<long>(n) - static_cast<long>(v)) * in.logs[w - 1]) /
           Real(static_cast<long>(w - v));
  };
  auto pow_signed = [](const Rational& base, long e) {
    if (e >= 0) return rat_pow(base, static_cast<unsigned>(e));
    return rat_pow(Rational(1) / base, static_cast<unsigned>(-e));
  };
  auto exact_candidate = [&](std::size_t v, std::size_t w, std::size_t n) {
    // Chord of (v, lnM_v), (w, lnM_w) at n; weights go negative when n is
    // outside [v, w] (extrapolated breakpoint candidates).
    long a = static_cast<long>(w) - static_cast<long>(n);
    long b = static_cast<long>(n) - static_cast<long>(v);
    long r = static_cast<long>(w - v);
    long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), r);
    return PowerValue(pow_signed(in.rats[v - 1], a / g) *
                          pow_signed(in.rats[w - 1], b / g),
                      static_cast<unsigned>(r / g));
  };

  for (std::size_t n = 1; n <= N; ++n) {
    if (active.size() == 1) {
      log_values[n - 1] = in.logs[active[0] - 1];
      if (in.exact) exact_values[n - 1] = PowerValue(in.rats[active[0] - 1], 1);
      continue;
    }
    bool have = false;
    Real best_log;
    PowerValue best_exact;
    for (std::size_t s = 0; s + 1 < active.size(); ++s) {
      std::size_t v = active[s], w = active[s + 1];
      // Breakpoint between lines v and w; the value of n t - U(t) there is
      // the chord of (v, lnM_v), (w, lnM_w) evaluated at n.
      Real cand_log = float_candidate(v, w, n);
      if (in.exact && have) {
        // working-precision filter; exact cross-power compare on near-ties
        Real gap = cand_log - best_log;
        Real eps = boost::multiprecision::ldexp(
            std::max(std::max(Real(abs(cand_log)), Real(abs(best_log))),
                     Real(1)),
            6 - static_cast<int>(in.bits));
        if (gap > eps) {
          best_exact = exact_candidate(v, w, n);
        } else if (gap >= -eps) {
          PowerValue cand = exact_candidate(v, w, n);
          if (cand.compare(best_exact) == std::strong_ordering::greater)
            best_exact = cand;
          else
            cand_log = best_log;
        } else {
          cand_log = best_log;
        }
      } else if (in.exact) {
        best_exact = exact_candidate(v, w, n);
      }
      if (!have || cand_log > best_log) best_log = cand_log;
      have = true;
    }
    log_values[n - 1] = best_log;
    if (in.exact) exact_values[n - 1] = best_exact;
  }

  std::vector<Scalar> raw;
  raw.reserve(N + 1);
  for (std::size_t n = 0; n <= N; ++n) raw.push_back(seq.at(n));
  return RegularizedSequence(std::move(active), std::move(exact_values),
                             std::move(log_values), std::move(raw), seq.mode(),
                             seq.precision_bits());
}

TValue t_function(const PositiveSequence& seq, const Scalar& r,
                  std::size_t N) {
  require_window(N, 1);
  if (r < Scalar(1))
    throw std::invalid_argument("t_function requires r >= 1");
  PrecisionGuard guard(seq.precision_bits());
  TValue best;
  Scalar rn = r;  // r^n
  for (std::size_t n = 1; n <= N; ++n) {
    Scalar candidate = rn / seq.at(n);
    if (n == 1 || candidate > best.value) {
      best.value = candidate;
      best.argmax = n;
    }
    if (n < N) rn = rn * r;
  }
  best.truncated = best.argmax == N;
  return best;
}

LogTEvaluator::LogTEvaluator(const RegularizedSequence& reg) {
  verts_ = reg.support();
  ln_at_verts_.reserve(verts_.size());
  for (std::size_t v : verts_) ln_at_verts_.push_back(reg.log_value(v));
  for (std::size_t s = 0; s + 1 < verts_.size(); ++s) {
    Real dt = (ln_at_verts_[s + 1] - ln_at_verts_[s]) /
              Real(static_cast<long>(verts_[s + 1] - verts_[s]));
    breaks_.push_back(dt);
  }
}

std::size_t LogTEvaluator::active_index(const Real& t) const {
  return verts_[active_pos(t)];
}

std::size_t LogTEvaluator::active_pos(const Real& t) const {
  std::size_t lo = 0;
  for (std::size_t s = 0; s < breaks_.size(); ++s) {
    if (t >= breaks_[s])
      lo = s + 1;
    else
      break;
  }
  return lo;
}

Real LogTEvaluator::ln_t_at(const Real& t) const {
  std::size_t pos = active_pos(t);
  return Real(static_cast<long>(verts_[pos])) * t - ln_at_verts_[pos];
}

}  // namespace momentdet
