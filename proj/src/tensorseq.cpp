#include "momentdet/tensorseq.hpp"

#include <algorithm>

namespace momentdet {

Integer multinomial(std::size_t n, const MultiIndex& alpha) {
  Integer num = 1;
  for (std::size_t i = 2; i <= n; ++i) num *= i;
  for (unsigned a : alpha)
    for (unsigned i = 2; i <= a; ++i) num /= i;
  return num;
}

const Scalar& SymmetricTensor::entry(const MultiIndex& alpha) const {
  static const Scalar kZero{Rational(0)};
  auto it = entries.find(alpha);
  return it == entries.end() ? kZero : it->second;
}

bool SymmetricTensor::is_zero() const {
  for (const auto& [a, v] : entries)
    if (!v.is_zero()) return false;
  return true;
}

Scalar SymmetricTensor::frobenius_sq() const {
  Scalar acc(0);
  for (const auto& [alpha, v] : entries) {
    if (v.is_zero()) continue;
    acc = acc + Scalar(Rational(multinomial(order, alpha))) * v * v;
  }
  return acc;
}

SymmetricTensor SymmetricTensor::contract_once(
    const std::vector<Scalar>& f) const {
  if (order == 0) throw std::invalid_argument("cannot contract order zero");
  if (f.size() != dimension)
    throw std::invalid_argument("direction dimension mismatch");
  SymmetricTensor out;
  out.dimension = dimension;
  out.order = order - 1;
  for (const MultiIndex& beta : monomials_up_to(dimension, order - 1)) {
    if (total_degree(beta) != order - 1) continue;
    Scalar acc(0);
    for (std::size_t i = 0; i < dimension; ++i) {
      if (f[i].is_zero()) continue;
      MultiIndex alpha = beta;
      alpha[i] += 1;
      acc = acc + f[i] * entry(alpha);
    }
    out.entries.emplace(beta, std::move(acc));
  }
  return out;
}

TensorSequence::TensorSequence(std::size_t dimension,
                               std::vector<SymmetricTensor> tensors,
                               ScalarMode mode, unsigned precision_bits)
    : d_(dimension),
      tensors_(std::move(tensors)),
      mode_(mode),
      precision_bits_(precision_bits == 0 ? kDefaultPrecisionBits
                                          : precision_bits) {
  if (tensors_.empty())
    throw std::invalid_argument("tensor sequence needs order zero at least");
  for (std::size_t n = 0; n < tensors_.size(); ++n) {
    if (tensors_[n].order != n || tensors_[n].dimension != d_)
      throw std::invalid_argument("tensor order/dimension mismatch at " +
                                  std::to_string(n));
  }
}

const SymmetricTensor& TensorSequence::at(std::size_t order) const {
  if (order >= tensors_.size())
    throw WindowError("tensor order overflow: " + std::to_string(order));
  return tensors_[order];
}

TensorSequence TensorSequence::from_measure(const AtomicMeasureD& mu,
                                            std::size_t max_order,
                                            ScalarMode mode,
                                            unsigned precision_bits) {
  mu.validate();
  std::vector<SymmetricTensor> tensors;
  for (std::size_t n = 0; n <= max_order; ++n) {
    SymmetricTensor t;
    t.dimension = mu.dimension;
    t.order = n;
    for (const MultiIndex& alpha : monomials_up_to(mu.dimension, n)) {
      if (total_degree(alpha) != n) continue;
      t.entries.emplace(alpha, mu.moment(alpha));
    }
    tensors.push_back(std::move(t));
  }
  return TensorSequence(mu.dimension, std::move(tensors), mode,
                        precision_bits);
}

TensorSequence TensorSequence::from_multisequence(const Multisequence& m) {
  std::vector<SymmetricTensor> tensors;
  for (std::size_t n = 0; n <= m.max_degree(); ++n) {
    SymmetricTensor t;
    t.dimension = m.dimension();
    t.order = n;
    for (const MultiIndex& alpha : monomials_up_to(m.dimension(), n)) {
      if (total_degree(alpha) != n) continue;
      t.entries.emplace(alpha, m.at(alpha));
    }
    tensors.push_back(std::move(t));
  }
  return TensorSequence(m.dimension(), std::move(tensors), m.mode(),
                        m.precision_bits());
}

TensorSequence TensorSequence::rank_one(std::vector<Scalar> eta,
                                        std::size_t max_order, ScalarMode mode,
                                        unsigned precision_bits) {
  AtomicMeasureD mu;
  mu.dimension = eta.size();
  mu.atoms.push_back({std::move(eta), Scalar(1)});
  return from_measure(mu, max_order, mode, precision_bits);
}

TensorSequence TensorSequence::scaled_unit(
    std::size_t dimension, std::function<Scalar(std::size_t)> scale,
    std::size_t max_order, ScalarMode mode, unsigned precision_bits) {
  std::vector<SymmetricTensor> tensors;
  for (std::size_t n = 0; n <= max_order; ++n) {
    SymmetricTensor t;
    t.dimension = dimension;
    t.order = n;
    for (const MultiIndex& alpha : monomials_up_to(dimension, n)) {
      if (total_degree(alpha) != n) continue;
      Scalar v(0);
      if (n % 2 == 0 && alpha[0] == n) v = scale(n / 2);
      if (n == 0) v = scale(0);
      t.entries.emplace(alpha, std::move(v));
    }
    tensors.push_back(std::move(t));
  }
  return TensorSequence(dimension, std::move(tensors), mode, precision_bits);
}

TensorSequence TensorSequence::from_json(const nlohmann::json& j) {
  std::size_t d = j.at("d").get<std::size_t>();
  ScalarMode mode = ScalarMode::kRational;
  if (j.contains("mode") && j.at("mode").get<std::string>() == "float")
    mode = ScalarMode::kFloat;
  unsigned bits = j.value("precision_bits", kDefaultPrecisionBits);
  PrecisionGuard guard(bits);
  std::map<std::size_t, SymmetricTensor> by_order;
  std::size_t max_order = 0;
  for (const auto& o : j.at("orders")) {
    std::size_t n = o.at("n").get<std::size_t>();
    max_order = std::max(max_order, n);
    SymmetricTensor t;
    t.dimension = d;
    t.order = n;
    for (const auto& e : o.at("entries")) {
      MultiIndex idx;
      for (const auto& v : e.at("idx")) idx.push_back(v.get<unsigned>());
      if (total_degree(idx) != n)
        throw std::invalid_argument("entry index degree mismatch");
      const auto& val = e.at("value");
      t.entries.emplace(
          idx, Scalar::parse(val.is_string() ? val.get<std::string>()
                                             : val.dump(),
                             mode));
    }
    by_order[n] = std::move(t);
  }
  std::vector<SymmetricTensor> tensors;
  for (std::size_t n = 0; n <= max_order; ++n) {
    auto it = by_order.find(n);
    if (it != by_order.end()) {
      tensors.push_back(std::move(it->second));
      continue;
    }
    SymmetricTensor zero;
    zero.dimension = d;
    zero.order = n;
    for (const MultiIndex& alpha : monomials_up_to(d, n))
      if (total_degree(alpha) == n) zero.entries.emplace(alpha, Scalar(0));
    tensors.push_back(std::move(zero));
  }
  return TensorSequence(d, std::move(tensors), mode, bits);
}

nlohmann::json TensorSequence::to_json() const {
  nlohmann::json orders = nlohmann::json::array();
  for (std::size_t n = 0; n <= max_order(); ++n) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [alpha, v] : at(n).entries) {
      nlohmann::json idx = nlohmann::json::array();
      for (unsigned a : alpha) idx.push_back(a);
      entries.push_back({{"idx", idx}, {"value", v.to_string()}});
    }
    orders.push_back({{"n", n}, {"entries", entries}});
  }
  return {{"d", d_},
          {"mode", mode_ == ScalarMode::kRational ? "rational" : "float"},
          {"precision_bits", precision_bits_},
          {"orders", orders}};
}

Scalar tensor_pairing(const TensorSequence& m,
                      const std::vector<std::vector<Scalar>>& fs) {
  std::size_t n = fs.size();
  SymmetricTensor cur = m.at(n);
  if (n == 0) return cur.entry(MultiIndex(m.dimension(), 0));
  for (const auto& f : fs) cur = cur.contract_once(f);
  return cur.entry(MultiIndex(m.dimension(), 0));
}

void DirectionSet::validate(std::size_t dimension) const {
  for (const auto& v : vectors) {
    if (v.size() != dimension)
      throw std::invalid_argument("direction dimension mismatch");
    bool zero = true;
    for (const Scalar& x : v) zero = zero && x.is_zero();
    if (zero) throw std::invalid_argument("zero direction in E");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i + 1; j < vectors.size(); ++j)
      if (vectors[i] == vectors[j])
        throw std::invalid_argument("directions must be pairwise distinct");
}

bool DirectionSet::spanning(std::size_t dimension) const {
  // exact rank by elimination on a rational copy (float entries are snapped
  // through their exact decimal representation only for the rank question)
  std::vector<std::vector<Rational>> rows;
  for (const auto& v : vectors) {
    std::vector<Rational> row;
    for (const Scalar& x : v)
      row.push_back(x.is_rational() ? x.rat()
                                    : parse_rational(x.real().str(
                                          30, std::ios_base::scientific)));
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dimension && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].sign() == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col].sign() == 0) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < dimension; ++c)
        rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank == dimension;
}

Scalar DirectionSet::max_norm_sq() const {
  Scalar best(0);
  for (const auto& v : vectors) {
    Scalar nsq(0);
    for (const Scalar& x : v) nsq = nsq + x * x;
    if (nsq > best) best = nsq;
  }
  return best;
}

DirectionSet DirectionSet::canonical(std::size_t dimension) {
  DirectionSet E;
  for (std::size_t i = 0; i < dimension; ++i) {
    std::vector<Scalar> e(dimension, Scalar(0));
    e[i] = Scalar(1);
    E.vectors.push_back(std::move(e));
  }
  return E;
}

nlohmann::json DirectionSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : vectors) {
    nlohmann::json row = nlohmann::json::array();
    for (const Scalar& x : v) row.push_back(x.to_string());
    arr.push_back(std::move(row));
  }
  return {{"directions", arr}};
}

DirectionSet DirectionSet::from_json(const nlohmann::json& j) {
  DirectionSet E;
  for (const auto& row : j.at("directions")) {
    std::vector<Scalar> v;
    for (const auto& x : row)
      v.push_back(Scalar(parse_rational(
          x.is_string() ? x.get<std::string>() : x.dump())));
    E.vectors.push_back(std::move(v));
  }
  return E;
}

namespace {

Integer multiset_count(std::size_t items, std::size_t slots) {
  // C(items + slots - 1, slots)
  Integer num = 1, den = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    num *= static_cast<long>(items + slots - 1 - i);
    den *= static_cast<long>(i + 1);
  }
  return num / den;
}

// visit nondecreasing index tuples of the given length
template <typename F>
void each_multiset(std::size_t items, std::size_t slots, F&& visit) {
  std::vector<std::size_t> pick(slots, 0);
  while (true) {
    visit(pick);
    std::size_t i = slots;
    while (i-- > 0) {
      if (pick[i] + 1 < items) {
        ++pick[i];
        for (std::size_t j = i + 1; j < slots; ++j) pick[j] = pick[i];
        break;
      }
      if (i == 0) return;
    }
  }
}

// Heuristic search past the enumeration budget: symmetric power iteration on
// the tensor guides a greedy rounding to directions in E; by construction
// the result is a genuine member of the search space, hence a lower bound.
Scalar heuristic_sup_square(const TensorSequence& m, const DirectionSet& E,
                            std::size_t order, std::size_t* evals) {
  PrecisionGuard guard(m.precision_bits());
  const std::size_t d = m.dimension();
  std::vector<Real> v(d, Real(1));
  for (int iter = 0; iter < 24; ++iter) {
    // w = T(v, ..., v, .)
    std::vector<Scalar> vs;
    for (const Real& x : v) vs.push_back(Scalar(x));
    SymmetricTensor cur = m.at(order);
    for (std::size_t s = 0; s + 1 < order; ++s) cur = cur.contract_once(vs);
    std::vector<Real> w(d, Real(0));
    for (std::size_t i = 0; i < d; ++i) {
      MultiIndex e(d, 0);
      e[i] = 1;
      w[i] = cur.entry(e).real();
    }
    Real norm(0);
    for (const Real& x : w) norm += x * x;
    norm = sqrt(norm);
    if (norm == 0) break;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
    ++*evals;
  }
  // round every slot to the best-aligned direction, then take the best
  // repeated-direction candidate as well
  Scalar best(0);
  for (const auto& f : E.vectors) {
    std::vector<std::vector<Scalar>> fs(order, f);
    Scalar val = tensor_pairing(m, fs).abs();
    ++*evals;
    if (val > best) best = val;
  }
  return best;
}

}  // namespace

DeterminingSequenceResult determining_sequence(const TensorSequence& m,
                                               const DirectionSet& E,
                                               std::size_t N,
                                               std::size_t budget,
                                               bool allow_heuristic) {
  E.validate(m.dimension());
  if (2 * N > m.max_order())
    throw WindowError("determining sequence to N = " + std::to_string(N) +
                      " needs tensor order " + std::to_string(2 * N));
  PrecisionGuard guard(m.precision_bits());
  DeterminingSequenceResult out;
  out.values.reserve(N + 1);
  out.sup_squares.reserve(N + 1);
  out.lower_bound_only.assign(N + 1, false);

  // m_0 = sqrt(|m^(0)|)
  Scalar m0 = m.at(0).entry(MultiIndex(m.dimension(), 0)).abs();
  out.sup_squares.push_back(m0);
  out.values.push_back(Scalar(Real(sqrt(m0.real()))));

  for (std::size_t n = 1; n <= N; ++n) {
    Integer count = multiset_count(E.vectors.size(), 2 * n);
    if (count > Integer(static_cast<long>(budget))) {
      if (!allow_heuristic)
        throw BudgetError(
            "pairing enumeration budget exceeded at order " +
            std::to_string(2 * n) + " (reachable N = " +
            std::to_string(n - 1) + "); rerun with the heuristic enabled");
      out.sup_squares.push_back(
          heuristic_sup_square(m, E, 2 * n, &out.evaluations));
      out.lower_bound_only[n] = true;
      out.exhaustive = false;
    } else {
      Scalar best(0);
      each_multiset(E.vectors.size(), 2 * n,
                    [&](const std::vector<std::size_t>& pick) {
                      std::vector<std::vector<Scalar>> fs;
                      fs.reserve(pick.size());
                      for (std::size_t idx : pick)
                        fs.push_back(E.vectors[idx]);
                      Scalar val = tensor_pairing(m, fs).abs();
                      ++out.evaluations;
                      if (val > best) best = val;
                    });
      out.sup_squares.push_back(best);
    }
    out.values.push_back(Scalar(Real(sqrt(out.sup_squares.back().real()))));
  }
  return out;
}

std::vector<bool> d_bound_check(const TensorSequence& m, const DirectionSet& E,
                                std::size_t N,
                                const DeterminingSequenceResult* precomputed) {
  DeterminingSequenceResult local;
  const DeterminingSequenceResult* seq = precomputed;
  if (!seq) {
    local = determining_sequence(m, E, N);
    seq = &local;
  }
  Scalar dsq = E.max_norm_sq();
  std::vector<bool> ok;
  ok.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    // m_n^2 <= (d^2)^n ||m^(2n)||_F^2 ... compared on squares throughout
    Scalar rhs = m.at(2 * n).frobenius_sq();
    Scalar factor(1);
    for (std::size_t i = 0; i < n; ++i) factor = factor * dsq;
    // rhs of the bound squared: (d^n ||.||^(1/2))^2 = d^(2n) ||.||_F
    // with ||.||_F = sqrt(frobenius_sq); compare m_n^4 <= d^(4n) fro_sq
    Scalar lhs = seq->sup_squares[n] * seq->sup_squares[n];
    ok.push_back(lhs <= factor * factor * rhs);
  }
  return ok;
}

nlohmann::json DeterminingVerdict::to_json() const {
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& v : sequence.values) vals.push_back(v.to_string());
  return {{"values", vals},
          {"exhaustive", sequence.exhaustive},
          {"b", b.to_json()},
          {"c", c.to_json()},
          {"e", e.to_json()},
          {"consensus", consensus ? to_string(*consensus) : "none"},
          {"determining_evidence", determining_evidence},
          {"note", note}};
}

DeterminingVerdict determining_verdict(const TensorSequence& m,
                                       const DirectionSet& E, std::size_t N,
                                       const SeriesOptions& opts) {
  DeterminingVerdict out;
  out.sequence = determining_sequence(m, E, N);
  PrecisionGuard guard(m.precision_bits());

  for (std::size_t n = 1; n <= N; ++n) {
    if (out.sequence.sup_squares[n].is_zero()) {
      out.b.status = out.c.status = out.e.status =
          SeriesStatus::kDivergesLikely;
      out.b.rationale = out.c.rationale = out.e.rationale =
          "zero-tensor-short-circuit";
      out.consensus = SeriesStatus::kDivergesLikely;
      out.determining_evidence = true;
      out.note = "m_" + std::to_string(n) +
                 " = 0: the scalar class degenerates, series diverge "
                 "trivially";
      return out;
    }
  }

  std::vector<Scalar> vals{out.sequence.values[0].is_zero()
                               ? Scalar(Real(1))
                               : out.sequence.values[0]};
  for (std::size_t n = 1; n <= N; ++n) vals.push_back(out.sequence.values[n]);
  auto seq = PositiveSequence::from_values(std::move(vals), ScalarMode::kFloat,
                                           m.precision_bits(), "determining");
  out.b = condition_b(seq, N, opts);
  out.c = condition_c(seq, N, opts);
  out.e = condition_e(seq, N, opts);

  std::optional<SeriesStatus> agreed;
  bool consistent = true;
  for (const Verdict* v : {&out.b, &out.c, &out.e}) {
    if (v->status == SeriesStatus::kInconclusive) continue;
    if (!agreed)
      agreed = v->status;
    else if (*agreed != v->status)
      consistent = false;
  }
  if (consistent)
    out.consensus = agreed ? agreed
                           : std::optional<SeriesStatus>(
                                 SeriesStatus::kInconclusive);
  out.determining_evidence =
      out.consensus && *out.consensus == SeriesStatus::kDivergesLikely;
  out.note = out.determining_evidence
                 ? "determining (windowed evidence)"
                 : "no windowed divergence evidence";
  return out;
}

MomentSequence1D per_direction_sequence(const TensorSequence& m,
                                        const std::vector<Scalar>& phi) {
  if (phi.size() != m.dimension())
    throw std::invalid_argument("direction dimension mismatch");
  TensorSequence copy = m;
  std::vector<Scalar> dir = phi;
  return MomentSequence1D(
      [copy, dir](std::size_t n) -> Scalar {
        if (n > copy.max_order())
          throw WindowError("per-direction moment order overflow");
        std::vector<std::vector<Scalar>> fs(n, dir);
        return tensor_pairing(copy, fs);
      },
      m.mode(), m.precision_bits(), "per-direction");
}

nlohmann::json GeneralizedStieltjesReport::to_json() const {
  return {{"quarter_root", quarter_root.to_json()},
          {"half_root", half_root.to_json()}};
}

GeneralizedStieltjesReport generalized_stieltjes_check(
    const TensorSequence& m, const DirectionSet& E, std::size_t N,
    const SeriesOptions& opts) {
  E.validate(m.dimension());
  if (2 * N > m.max_order())
    throw WindowError("series to N = " + std::to_string(N) +
                      " needs tensor order " + std::to_string(2 * N));
  PrecisionGuard guard(m.precision_bits());
  Real dsq = E.max_norm_sq().real();  // d(E)^2
  GeneralizedStieltjesReport rep;
  std::vector<Scalar> quarter, half;
  for (std::size_t n = 1; n <= N; ++n) {
    Real fro = sqrt(m.at(2 * n).frobenius_sq().real());
    Real inner = pow(sqrt(dsq), Real(2 * static_cast<long>(n))) * fro;
    if (inner <= 0)
      throw InvalidSequenceError("vanishing tensor norm in the series");
    Real ln_inner = log(inner);
    quarter.push_back(
        Scalar(Real(exp(-ln_inner / Real(4 * static_cast<long>(n))))));
    half.push_back(
        Scalar(Real(exp(-ln_inner / Real(2 * static_cast<long>(n))))));
  }
  rep.quarter_root = classify_series(quarter, opts, m.precision_bits());
  rep.half_root = classify_series(half, opts, m.precision_bits());
  return rep;
}

}  // namespace momentdet
