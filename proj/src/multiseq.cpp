#include "momentdet/multiseq.hpp"

#include <algorithm>
#include <sstream>

namespace momentdet {

std::size_t total_degree(const MultiIndex& a) {
  std::size_t s = 0;
  for (unsigned v : a) s += v;
  return s;
}

MultiIndex multi_add(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  std::size_t da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

void enumerate_rec(std::size_t dim, std::size_t pos, std::size_t remaining,
                   MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == dim) {
    cur[pos] = static_cast<unsigned>(remaining);
    out.push_back(cur);
    return;
  }
  for (std::size_t v = 0; v <= remaining; ++v) {
    cur[pos] = static_cast<unsigned>(v);
    enumerate_rec(dim, pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> monomials_up_to(std::size_t dimension,
                                        std::size_t degree) {
  std::vector<MultiIndex> out;
  MultiIndex cur(dimension, 0);
  for (std::size_t deg = 0; deg <= degree; ++deg)
    enumerate_rec(dimension, 0, deg, cur, out);
  std::sort(out.begin(), out.end(), graded_lex_less);
  return out;
}

std::string multi_index_to_string(const MultiIndex& a) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ",";
    os << a[i];
  }
  os << ")";
  return os.str();
}

void AtomicMeasureD::validate() const {
  for (const Atom& a : atoms) {
    if (a.point.size() != dimension)
      throw std::invalid_argument("atom dimension mismatch");
    if (!a.weight.is_positive())
      throw std::invalid_argument("atom weights must be positive");
  }
}

Scalar AtomicMeasureD::moment(const MultiIndex& alpha) const {
  Scalar acc(0);
  for (const Atom& a : atoms) {
    Scalar term = a.weight;
    for (std::size_t i = 0; i < dimension; ++i)
      for (unsigned p = 0; p < alpha[i]; ++p) term = term * a.point[i];
    acc = acc + term;
  }
  return acc;
}

nlohmann::json AtomicMeasureD::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Atom& a : atoms) {
    nlohmann::json pt = nlohmann::json::array();
    for (const Scalar& x : a.point) pt.push_back(x.to_string());
    arr.push_back({{"point", pt}, {"weight", a.weight.to_string()}});
  }
  return {{"d", dimension}, {"atoms", arr}};
}

AtomicMeasureD AtomicMeasureD::from_json(const nlohmann::json& j) {
  AtomicMeasureD mu;
  mu.dimension = j.at("d").get<std::size_t>();
  for (const auto& a : j.at("atoms")) {
    AtomicMeasureD::Atom atom;
    for (const auto& x : a.at("point"))
      atom.point.push_back(Scalar(parse_rational(
          x.is_string() ? x.get<std::string>() : x.dump())));
    atom.weight = Scalar(parse_rational(
        a.at("weight").is_string() ? a.at("weight").get<std::string>()
                                   : a.at("weight").dump()));
    mu.atoms.push_back(std::move(atom));
  }
  mu.validate();
  return mu;
}

Multisequence::Multisequence(std::size_t dimension, std::size_t max_degree,
                             std::map<MultiIndex, Scalar, GradedLess> values,
                             ScalarMode mode, unsigned precision_bits)
    : d_(dimension),
      max_degree_(max_degree),
      values_(std::move(values)),
      mode_(mode),
      precision_bits_(precision_bits == 0 ? kDefaultPrecisionBits
                                          : precision_bits) {
  for (const MultiIndex& alpha : monomials_up_to(d_, max_degree_))
    if (values_.find(alpha) == values_.end())
      throw std::invalid_argument("missing multisequence entry at " +
                                  multi_index_to_string(alpha));
}

Multisequence Multisequence::from_measure(const AtomicMeasureD& mu,
                                          std::size_t max_degree,
                                          ScalarMode mode,
                                          unsigned precision_bits) {
  mu.validate();
  std::map<MultiIndex, Scalar, GradedLess> values;
  for (const MultiIndex& alpha : monomials_up_to(mu.dimension, max_degree))
    values.emplace(alpha, mu.moment(alpha));
  return Multisequence(mu.dimension, max_degree, std::move(values), mode,
                       precision_bits);
}

Multisequence Multisequence::from_product(
    const std::vector<MomentSequence1D>& factors, std::size_t max_degree) {
  if (factors.empty()) throw std::invalid_argument("need at least one factor");
  std::map<MultiIndex, Scalar, GradedLess> values;
  ScalarMode mode = ScalarMode::kRational;
  unsigned bits = 0;
  for (const auto& f : factors) {
    if (f.mode() == ScalarMode::kFloat) mode = ScalarMode::kFloat;
    bits = std::max(bits, f.precision_bits());
  }
  for (const MultiIndex& alpha : monomials_up_to(factors.size(), max_degree)) {
    Scalar v(1);
    for (std::size_t i = 0; i < factors.size(); ++i)
      v = v * factors[i].at(alpha[i]);
    values.emplace(alpha, v);
  }
  return Multisequence(factors.size(), max_degree, std::move(values), mode,
                       bits);
}

const Scalar& Multisequence::at(const MultiIndex& alpha) const {
  auto it = values_.find(alpha);
  if (it == values_.end())
    throw WindowError("multisequence degree overflow at " +
                      multi_index_to_string(alpha));
  return it->second;
}

Multisequence Multisequence::from_json(const nlohmann::json& j) {
  std::size_t d = j.at("d").get<std::size_t>();
  std::size_t deg = j.at("deg").get<std::size_t>();
  ScalarMode mode = ScalarMode::kRational;
  if (j.contains("mode") && j.at("mode").get<std::string>() == "float")
    mode = ScalarMode::kFloat;
  unsigned bits = j.value("precision_bits", kDefaultPrecisionBits);
  PrecisionGuard guard(bits);
  std::map<MultiIndex, Scalar, GradedLess> values;
  for (const auto& e : j.at("entries")) {
    MultiIndex alpha;
    for (const auto& v : e.at("alpha"))
      alpha.push_back(v.get<unsigned>());
    const auto& val = e.at("value");
    values.emplace(alpha,
                   Scalar::parse(val.is_string() ? val.get<std::string>()
                                                 : val.dump(),
                                 mode));
  }
  return Multisequence(d, deg, std::move(values), mode, bits);
}

nlohmann::json Multisequence::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const MultiIndex& alpha : monomials_up_to(d_, max_degree_)) {
    nlohmann::json a = nlohmann::json::array();
    for (unsigned v : alpha) a.push_back(v);
    entries.push_back({{"alpha", a}, {"value", at(alpha).to_string()}});
  }
  return {{"d", d_},
          {"deg", max_degree_},
          {"mode", mode_ == ScalarMode::kRational ? "rational" : "float"},
          {"precision_bits", precision_bits_},
          {"entries", entries}};
}

std::size_t MultiPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [alpha, c] : coeffs)
    if (!c.is_zero()) d = std::max(d, total_degree(alpha));
  return d;
}

nlohmann::json MultiPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [alpha, c] : coeffs) {
    if (c.is_zero()) continue;
    nlohmann::json a = nlohmann::json::array();
    for (unsigned v : alpha) a.push_back(v);
    terms.push_back({{"alpha", a}, {"coeff", c.to_string()}});
  }
  return terms;
}

Scalar riesz_apply(const Multisequence& m, const MultiPolynomial& p) {
  if (p.dimension != m.dimension())
    throw std::invalid_argument("dimension mismatch");
  if (p.degree() > m.max_degree())
    throw WindowError("polynomial degree exceeds the moment window");
  Scalar acc(0);
  for (const auto& [alpha, c] : p.coeffs) {
    if (c.is_zero()) continue;
    acc = acc + c * m.at(alpha);
  }
  return acc;
}

MomentMatrixReport moment_matrix_psd(const Multisequence& m, std::size_t N) {
  if (2 * N > m.max_degree())
    throw WindowError("moment matrix of order " + std::to_string(N) +
                      " needs degree " + std::to_string(2 * N));
  MomentMatrixReport rep;
  rep.basis = monomials_up_to(m.dimension(), N);
  const std::size_t n = rep.basis.size();

  auto witness_from = [&](const std::vector<Scalar>& xi, Scalar value) {
    MultiPolynomial h;
    h.dimension = m.dimension();
    for (std::size_t i = 0; i < n; ++i)
      if (!xi[i].is_zero()) h.coeffs[rep.basis[i]] = xi[i];
    rep.witness = std::move(h);
    rep.witness_value = std::move(value);
  };

  if (m.mode() == ScalarMode::kRational) {
    RatMatrix H(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        H(i, j) = m.at(multi_add(rep.basis[i], rep.basis[j])).rat();
    PsdCertificate cert = ldlt_psd_check(H);
    rep.psd = cert.psd;
    rep.within_tolerance = cert.psd;
    rep.rank = cert.rank;
    if (!cert.psd) {
      std::vector<Scalar> xi;
      for (const Rational& w : cert.witness) xi.push_back(Scalar(w));
      witness_from(xi, Scalar(cert.witness_value));
    }
    return rep;
  }

  PrecisionGuard guard(m.precision_bits());
  RealMatrix H(n, n);
  Real scale(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      H(i, j) = m.at(multi_add(rep.basis[i], rep.basis[j])).real();
      scale = std::max(scale, Real(abs(H(i, j))));
    }
  if (scale == 0) scale = Real(1);
  EigenResult eig = jacobi_eigen(H, true);
  Real tol = Real("1e-12") * scale;
  rep.psd = eig.values.front() >= -tol;
  rep.within_tolerance = rep.psd && eig.values.front() < 0;
  for (const Real& v : eig.values)
    if (v > tol) ++rep.rank;
  if (!rep.psd) {
    std::vector<Scalar> xi;
    for (std::size_t i = 0; i < n; ++i)
      xi.push_back(Scalar(Real(eig.vectors(i, 0))));
    witness_from(xi, Scalar(eig.values.front()));
  }
  return rep;
}

MomentSequence1D marginal(const Multisequence& m, std::size_t j) {
  if (j < 1 || j > m.dimension())
    throw std::invalid_argument("axis out of range: " + std::to_string(j));
  Multisequence copy = m;
  std::size_t axis = j - 1;
  return MomentSequence1D(
      [copy, axis](std::size_t n) -> Scalar {
        MultiIndex alpha(copy.dimension(), 0);
        alpha[axis] = static_cast<unsigned>(n);
        return copy.at(alpha);
      },
      m.mode(), m.precision_bits(),
      "marginal:" + std::to_string(j));
}

nlohmann::json MultivariateCarlemanReport::to_json() const {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : per_axis) axes.push_back(a.to_json());
  return {{"per_axis", axes},
          {"aggregate", to_string(aggregate)},
          {"determinacy_certificate", determinacy_certificate},
          {"note", note}};
}

MultivariateCarlemanReport multivariate_carleman(const Multisequence& m,
                                                 std::size_t terms,
                                                 const SeriesOptions& opts) {
  if (2 * terms > m.max_degree())
    throw WindowError("need degree " + std::to_string(2 * terms) +
                      " for " + std::to_string(terms) + " series terms");
  MultivariateCarlemanReport rep;
  bool all_diverge = true;
  for (std::size_t j = 1; j <= m.dimension(); ++j) {
    DeterminacyOutcome axis = carleman_check(marginal(m, j), terms, opts);
    if (axis.verdict.status != SeriesStatus::kDivergesLikely)
      all_diverge = false;
    rep.per_axis.push_back(std::move(axis));
  }
  if (all_diverge) {
    rep.aggregate = SeriesStatus::kDivergesLikely;
    rep.determinacy_certificate = true;
    rep.note =
        "all marginal series diverge: joint determinacy follows from "
        "marginal determinacy";
  } else {
    rep.aggregate = SeriesStatus::kInconclusive;
    rep.note =
        "some axis fails the series condition; no indeterminacy claim is "
        "made";
  }
  return rep;
}

}  // namespace momentdet
