#include "momentdet/moments1d.hpp"

#include <algorithm>
#include <sstream>

#include "momentdet/polynomial.hpp"

namespace momentdet {

namespace {

std::pair<std::string, std::vector<std::string>> split_spec(
    const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  std::string name = spec.substr(0, colon);
  std::vector<std::string> params;
  std::stringstream rest(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(rest, tok, ',')) params.push_back(tok);
  return {name, params};
}

Rational factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

}  // namespace

MomentSequence1D::MomentSequence1D(Generator gen, ScalarMode mode,
                                   unsigned precision_bits,
                                   std::string provenance, Parity parity)
    : gen_(std::move(gen)),
      mode_(mode),
      precision_bits_(precision_bits == 0 ? kDefaultPrecisionBits
                                          : precision_bits),
      provenance_(std::move(provenance)),
      parity_(parity),
      cache_(std::make_shared<Cache>()) {}

MomentSequence1D MomentSequence1D::from_values(std::vector<Scalar> values,
                                               ScalarMode mode,
                                               unsigned precision_bits,
                                               std::string provenance) {
  auto shared = std::make_shared<std::vector<Scalar>>(std::move(values));
  return MomentSequence1D(
      [shared](std::size_t n) -> Scalar {
        if (n >= shared->size())
          throw WindowError("moment data has no entry at index " +
                            std::to_string(n));
        return (*shared)[n];
      },
      mode, precision_bits, std::move(provenance));
}

const Scalar& MomentSequence1D::at(std::size_t n) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->values.find(n);
  if (it == cache_->values.end())
    it = cache_->values.emplace(n, gen_(n)).first;
  return it->second;
}

MomentSequence1D MomentSequence1D::with_support_hint(std::string hint) const {
  MomentSequence1D out = *this;
  out.support_hint_ = std::move(hint);
  return out;
}

MomentSequence1D MomentSequence1D::builtin(const std::string& spec,
                                           ScalarMode mode,
                                           unsigned precision_bits) {
  auto [name, params] = split_spec(spec);
  unsigned bits = precision_bits == 0 ? kDefaultPrecisionBits : precision_bits;
  std::string prov = "generated:" + spec;

  if (name == "gaussian") {
    Rational sigma = params.empty() ? Rational(1) : parse_rational(params[0]);
    if (sigma.sign() <= 0) throw std::invalid_argument("sigma must be positive");
    return MomentSequence1D(
        [sigma](std::size_t n) -> Scalar {
          if (n % 2 == 1) return Scalar(Rational(0));
          Integer df = 1;  // (n-1)!! over the even index
          for (std::size_t i = 1; i <= n / 2; ++i) df *= 2 * i - 1;
          return Scalar(Rational(Rational(df) *
                                 rat_pow(sigma, static_cast<unsigned>(n))));
        },
        mode, bits, prov);
  }
  if (name == "lognormal") {
    double s = params.empty() ? 1.0 : std::stod(params[0]);
    return MomentSequence1D(
        [s, bits](std::size_t n) -> Scalar {
          PrecisionGuard guard(bits);
          return Scalar(Real(exp(Real(n) * Real(n) * Real(s * s) / 2)));
        },
        ScalarMode::kFloat, bits, prov);
  }
  if (name == "exponential") {
    Rational lambda = params.empty() ? Rational(1) : parse_rational(params[0]);
    if (lambda.sign() <= 0)
      throw std::invalid_argument("lambda must be positive");
    return MomentSequence1D(
        [lambda](std::size_t n) -> Scalar {
          return Scalar(Rational(factorial(n) /
                                 rat_pow(lambda, static_cast<unsigned>(n))));
        },
        mode, bits, prov);
  }
  if (name == "uniform") {
    Rational a = params.size() > 0 ? parse_rational(params[0]) : Rational(0);
    Rational b = params.size() > 1 ? parse_rational(params[1]) : Rational(1);
    if (!(a < b)) throw std::invalid_argument("uniform needs a < b");
    return MomentSequence1D(
        [a, b](std::size_t n) -> Scalar {
          unsigned e = static_cast<unsigned>(n + 1);
          Rational num = rat_pow(b, e) - rat_pow(a, e);
          return Scalar(Rational(
              num / (Rational(static_cast<long>(n + 1)) * (b - a))));
        },
        mode, bits, prov);
  }
  if (name == "dirac") {
    Rational x0 = params.empty() ? Rational(0) : parse_rational(params[0]);
    return MomentSequence1D(
        [x0](std::size_t n) -> Scalar {
          if (n == 0) return Scalar(Rational(1));
          if (x0.sign() == 0) return Scalar(Rational(0));
          return Scalar(rat_pow(x0, static_cast<unsigned>(n)));
        },
        mode, bits, prov);
  }
  if (name == "gamma") {
    Rational k = params.size() > 0 ? parse_rational(params[0]) : Rational(1);
    Rational theta = params.size() > 1 ? parse_rational(params[1]) : Rational(1);
    if (k.sign() <= 0 || theta.sign() <= 0)
      throw std::invalid_argument("gamma needs positive shape and scale");
    return MomentSequence1D(
        [k, theta](std::size_t n) -> Scalar {
          Rational rising(1);
          for (std::size_t i = 0; i < n; ++i)
            rising *= k + Rational(static_cast<long>(i));
          return Scalar(
              Rational(rising * rat_pow(theta, static_cast<unsigned>(n))));
        },
        mode, bits, prov);
  }
  throw std::invalid_argument("unknown moment generator: " + name);
}

std::vector<std::string> MomentSequence1D::builtin_names() {
  return {"gaussian", "lognormal", "exponential", "uniform", "dirac", "gamma"};
}

MomentSequence1D MomentSequence1D::from_json(const nlohmann::json& j) {
  ScalarMode mode = ScalarMode::kRational;
  if (j.contains("mode") && j.at("mode").get<std::string>() == "float")
    mode = ScalarMode::kFloat;
  unsigned bits = j.value("precision_bits", kDefaultPrecisionBits);
  MomentSequence1D out = [&]() {
    if (j.contains("generator"))
      return builtin(j.at("generator").get<std::string>(), mode, bits);
    if (j.contains("atoms"))
      return DiscreteMeasure::from_json(j).moments(mode, bits);
    if (!j.contains("moments"))
      throw std::invalid_argument(
          "moment JSON needs 'moments', 'atoms' or 'generator'");
    PrecisionGuard guard(bits);
    std::vector<Scalar> values;
    for (const auto& v : j.at("moments")) {
      if (v.is_string())
        values.push_back(Scalar::parse(v.get<std::string>(), mode));
      else if (mode == ScalarMode::kRational)
        values.push_back(Scalar(parse_rational(v.dump())));
      else
        values.push_back(Scalar(Real(v.dump())));
    }
    return from_values(std::move(values), mode, bits, "file");
  }();
  if (j.contains("support_hint"))
    out = out.with_support_hint(j.at("support_hint").get<std::string>());
  return out;
}

nlohmann::json MomentSequence1D::to_json(std::size_t up_to) const {
  nlohmann::json j;
  j["mode"] = mode_ == ScalarMode::kRational ? "rational" : "float";
  j["precision_bits"] = precision_bits_;
  j["provenance"] = provenance_;
  if (support_hint_) j["support_hint"] = *support_hint_;
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t n = 0; n <= up_to; ++n) vals.push_back(at(n).to_string());
  j["moments"] = std::move(vals);
  return j;
}

void DiscreteMeasure::validate() const {
  for (const Atom& a : atoms)
    if (!a.weight.is_positive())
      throw std::invalid_argument("atom weights must be strictly positive");
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i].node == atoms[j].node)
        throw std::invalid_argument("atom nodes must be distinct");
}

Scalar DiscreteMeasure::moment(std::size_t n) const {
  Scalar acc(0);
  for (const Atom& a : atoms) {
    Scalar p(1);
    for (std::size_t i = 0; i < n; ++i) p = p * a.node;
    acc = acc + a.weight * p;
  }
  return acc;
}

MomentSequence1D DiscreteMeasure::moments(ScalarMode mode,
                                          unsigned precision_bits) const {
  DiscreteMeasure copy = *this;
  copy.validate();
  return MomentSequence1D(
      [copy](std::size_t n) { return copy.moment(n); }, mode, precision_bits,
      "generated:atoms");
}

nlohmann::json DiscreteMeasure::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Atom& a : atoms)
    arr.push_back({{"node", a.node.to_string()},
                   {"weight", a.weight.to_string()}});
  return {{"atoms", arr}};
}

DiscreteMeasure DiscreteMeasure::from_json(const nlohmann::json& j) {
  DiscreteMeasure m;
  for (const auto& a : j.at("atoms")) {
    auto parse = [](const nlohmann::json& v) -> Scalar {
      return Scalar(parse_rational(
          v.is_string() ? v.get<std::string>() : v.dump()));
    };
    m.atoms.push_back({parse(a.at("node")), parse(a.at("weight"))});
  }
  m.validate();
  return m;
}

namespace {

HankelReport hankel_psd_one(const MomentSequence1D& m, std::size_t N,
                            std::size_t shift) {
  HankelReport rep;
  const std::size_t n = N + 1;
  if (m.mode() == ScalarMode::kRational) {
    RatMatrix H(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        H(i, j) = m.at(i + j + shift).rat();
    PsdCertificate cert = ldlt_psd_check(H);
    rep.psd = cert.psd;
    rep.within_tolerance = cert.psd;
    rep.rank = cert.rank;
    if (!cert.psd) {
      rep.witness.reserve(n);
      for (const Rational& w : cert.witness) rep.witness.push_back(Scalar(w));
      rep.witness_value = Scalar(cert.witness_value);
    }
    return rep;
  }
  PrecisionGuard guard(m.precision_bits());
  RealMatrix H(n, n);
  Real scale(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      H(i, j) = m.at(i + j + shift).real();
      scale = std::max(scale, Real(abs(H(i, j))));
    }
  if (scale == 0) scale = Real(1);
  EigenResult eig = jacobi_eigen(H, true);
  Real lambda_min = eig.values.front();
  Real tol = Real("1e-12") * scale;
  rep.psd = lambda_min >= -tol;
  rep.within_tolerance = rep.psd && lambda_min < 0;
  for (const Real& v : eig.values)
    if (v > tol) ++rep.rank;
  if (!rep.psd) {
    for (std::size_t i = 0; i < n; ++i)
      rep.witness.push_back(Scalar(Real(eig.vectors(i, 0))));
    rep.witness_value = Scalar(lambda_min);
  }
  return rep;
}

}  // namespace

HankelReport hankel_psd(const MomentSequence1D& m, std::size_t N,
                        HankelVariant variant) {
  HankelReport plain = hankel_psd_one(m, N, 0);
  if (variant == HankelVariant::kHamburger || !plain.psd) return plain;
  HankelReport shifted = hankel_psd_one(m, N, 1);
  if (!shifted.psd) {
    shifted.witness_on_shifted = true;
    shifted.rank = plain.rank;
    return shifted;
  }
  plain.within_tolerance = plain.within_tolerance || shifted.within_tolerance;
  return plain;
}

std::string to_string(DeterminacyCertificate c) {
  switch (c) {
    case DeterminacyCertificate::kNone:
      return "none";
    case DeterminacyCertificate::kCarleman:
      return "Carleman";
    case DeterminacyCertificate::kStieltjes:
      return "Stieltjes";
    case DeterminacyCertificate::kDegenerate:
      return "Determinate-by-degeneracy";
    case DeterminacyCertificate::kCompactSupport:
      return "Determinate-if-supported-on-K";
  }
  return "none";
}

nlohmann::json DeterminacyOutcome::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict.to_json();
  j["certificate"] = to_string(certificate);
  if (degenerate_measure) j["measure"] = degenerate_measure->to_json();
  if (!note.empty()) j["note"] = note;
  return j;
}

DeterminacyOutcome carleman_check(const MomentSequence1D& m, std::size_t N,
                                  const SeriesOptions& opts) {
  DeterminacyOutcome out;
  if (!m.at(0).is_positive())
    throw InvalidSequenceError("total mass m_0 must be positive");
  // Degenerate even moment short-circuits before any root-taking.
  for (std::size_t n = 1; n <= N; ++n) {
    const Scalar& even = m.at(2 * n);
    if (even.is_negative())
      throw InvalidSequenceError("negative even moment at index " +
                                 std::to_string(2 * n));
    if (even.is_zero()) {
      out.certificate = DeterminacyCertificate::kDegenerate;
      out.degenerate_measure =
          DiscreteMeasure{{{Scalar(Rational(0)), m.at(0)}}};
      out.note = "m_" + std::to_string(2 * n) +
                 " = 0 forces support {0}; unique measure m_0 delta_0";
      out.verdict.status = SeriesStatus::kDivergesLikely;
      out.verdict.rationale = "degenerate-even-moment";
      return out;
    }
  }
  PrecisionGuard guard(m.precision_bits());
  std::vector<Scalar> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n)
    terms.push_back(Scalar(Real(
        exp(-log(m.at(2 * n).real()) / Real(2 * static_cast<long>(n))))));
  out.verdict = classify_series(terms, opts, m.precision_bits());
  out.note = "odd moments ignored: the condition reads only m_{2n}";
  if (out.verdict.status == SeriesStatus::kDivergesLikely)
    out.certificate = DeterminacyCertificate::kCarleman;
  return out;
}

DeterminacyOutcome stieltjes_check(const MomentSequence1D& m, std::size_t N,
                                   const SeriesOptions& opts) {
  DeterminacyOutcome out;
  if (!m.at(0).is_positive())
    throw InvalidSequenceError("total mass m_0 must be positive");
  for (std::size_t n = 1; n <= N; ++n) {
    const Scalar& v = m.at(n);
    if (v.is_negative())
      throw InvalidSequenceError(
          "negative moment at index " + std::to_string(n) +
          " contradicts half-line support");
    if (v.is_zero()) {
      out.certificate = DeterminacyCertificate::kDegenerate;
      out.degenerate_measure =
          DiscreteMeasure{{{Scalar(Rational(0)), m.at(0)}}};
      out.note = "m_" + std::to_string(n) +
                 " = 0 forces support {0} on the half line";
      out.verdict.status = SeriesStatus::kDivergesLikely;
      out.verdict.rationale = "degenerate-moment";
      return out;
    }
  }
  PrecisionGuard guard(m.precision_bits());
  std::vector<Scalar> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n)
    terms.push_back(Scalar(
        Real(exp(-log(m.at(n).real()) / Real(2 * static_cast<long>(n))))));
  out.verdict = classify_series(terms, opts, m.precision_bits());
  if (out.verdict.status == SeriesStatus::kDivergesLikely)
    out.certificate = DeterminacyCertificate::kStieltjes;
  return out;
}

MomentSequence1D stieltjes_to_hamburger(const MomentSequence1D& m) {
  MomentSequence1D base = m;
  return MomentSequence1D(
      [base](std::size_t n) -> Scalar {
        if (n % 2 == 1) return Scalar(Rational(0));
        return base.at(n / 2);
      },
      m.mode(), m.precision_bits(), m.provenance() + ".symmetrized",
      MomentSequence1D::Parity::kEvenOnly);
}

CompactSupportReport compact_support_check(const MomentSequence1D& m,
                                           const Scalar& lo, const Scalar& hi,
                                           std::size_t N) {
  if (!m.at(0).is_positive())
    throw InvalidSequenceError("total mass m_0 must be positive");
  CompactSupportReport rep;
  Scalar c = lo.abs();
  if (hi.abs() > c) c = hi.abs();
  Scalar c2 = c * c;
  Scalar bound = m.at(0);
  rep.consistent = true;
  for (std::size_t n = 1; n <= N; ++n) {
    bound = bound * c2;  // m_0 c^{2n}
    if (m.at(2 * n) > bound) {
      rep.consistent = false;
      rep.first_violation = n;
      break;
    }
  }
  rep.certificate = rep.consistent;
  return rep;
}

JacobiRecurrence jacobi_recurrence(const MomentSequence1D& m, std::size_t k) {
  JacobiRecurrence out;
  if (k == 0) return out;
  if (m.mode() == ScalarMode::kRational) {
    // Exact sigma table of mixed moments of the monic orthogonal family.
    std::vector<std::vector<Rational>> sigma(
        k + 1, std::vector<Rational>(2 * k, Rational(0)));
    std::vector<Rational> alpha, beta;
    for (std::size_t l = 0; l < 2 * k; ++l) sigma[0][l] = m.at(l).rat();
    if (sigma[0][0].sign() <= 0)
      throw InvalidSequenceError("total mass must be positive");
    alpha.push_back(sigma[0][1] / sigma[0][0]);
    beta.push_back(sigma[0][0]);
    out.rank = 1;
    for (std::size_t j = 1; j < k; ++j) {
      for (std::size_t l = j; l + j < 2 * k; ++l) {
        Rational v = sigma[j - 1][l + 1] - alpha[j - 1] * sigma[j - 1][l];
        if (j >= 2) v -= (sigma[j - 1][j - 1] / sigma[j - 2][j - 2]) *
                         sigma[j - 2][l];
        sigma[j][l] = v;
      }
      Rational num = sigma[j][j];
      Rational den = sigma[j - 1][j - 1];
      if (num.sign() < 0)
        throw InvalidSequenceError(
            "Hankel form is indefinite: not a moment sequence");
      if (num.sign() == 0) break;  // exact rank deficiency
      beta.push_back(num / den);
      alpha.push_back(sigma[j][j + 1] / sigma[j][j] -
                      sigma[j - 1][j] / sigma[j - 1][j - 1]);
      ++out.rank;
    }
    for (const Rational& a : alpha) out.alpha.push_back(Scalar(a));
    for (const Rational& b : beta) out.beta.push_back(Scalar(b));
    out.exact = true;
    return out;
  }

  PrecisionGuard guard(std::max(m.precision_bits(), 256u));
  std::vector<std::vector<Real>> sigma(k + 1, std::vector<Real>(2 * k, Real(0)));
  std::vector<Real> alpha, beta;
  for (std::size_t l = 0; l < 2 * k; ++l) sigma[0][l] = m.at(l).real();
  if (sigma[0][0] <= 0)
    throw InvalidSequenceError("total mass must be positive");
  alpha.push_back(sigma[0][1] / sigma[0][0]);
  beta.push_back(sigma[0][0]);
  out.rank = 1;
  Real beta_scale = std::max(Real(abs(beta[0])), Real(1));
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t l = j; l + j < 2 * k; ++l) {
      Real v = sigma[j - 1][l + 1] - alpha[j - 1] * sigma[j - 1][l];
      if (j >= 2)
        v -= (sigma[j - 1][j - 1] / sigma[j - 2][j - 2]) * sigma[j - 2][l];
      sigma[j][l] = v;
    }
    Real num = sigma[j][j];
    Real den = sigma[j - 1][j - 1];
    Real ratio = num / den;
    if (ratio <= Real("1e-30") * beta_scale) {
      if (ratio < -Real("1e-10") * beta_scale)
        throw InvalidSequenceError(
            "Hankel form is indefinite: not a moment sequence");
      break;  // rank deficiency within precision
    }
    beta.push_back(ratio);
    beta_scale = std::max(beta_scale, Real(abs(ratio)));
    alpha.push_back(sigma[j][j + 1] / sigma[j][j] -
                    sigma[j - 1][j] / sigma[j - 1][j - 1]);
    ++out.rank;
  }
  for (const Real& a : alpha) out.alpha.push_back(Scalar(a));
  for (const Real& b : beta) out.beta.push_back(Scalar(b));
  return out;
}

namespace {

// Continued-fraction reconstruction of a rational close to x.
std::optional<Rational> rational_reconstruct(const Real& x,
                                             const Integer& max_den,
                                             const Real& tol) {
  Real cur = x;
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // convergents
  for (int step = 0; step < 64; ++step) {
    Real fl = floor(cur);
    Integer a = fl.convert_to<Integer>();
    Integer h2 = a * h1 + h0;
    Integer k2 = a * k1 + k0;
    if (k2 > max_den) break;
    Rational cand = Rational(h2) / Rational(k2);
    if (abs(to_real(cand) - x) <= tol) return cand;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    Real frac = cur - fl;
    if (frac <= 0) break;
    cur = 1 / frac;
  }
  return std::nullopt;
}

// Exact-node path: roots of the monic orthogonal polynomial of degree r,
// accepted only when every root reconstructs to an exact rational zero.
std::optional<DiscreteMeasure> exact_quadrature(
    const MomentSequence1D& m, const JacobiRecurrence& rec) {
  std::size_t r = rec.rank;
  // monic p_j by the recurrence p_{j+1} = (x - alpha_j) p_j - beta_j p_{j-1}
  RatPoly prev = RatPoly::constant(Rational(1));
  RatPoly cur({-rec.alpha[0].rat(), Rational(1)});
  for (std::size_t j = 1; j < r; ++j) {
    RatPoly x_minus_a({-rec.alpha[j].rat(), Rational(1)});
    RatPoly next = x_minus_a * cur - prev.scaled(rec.beta[j].rat());
    prev = cur;
    cur = next;
  }
  // root bound: 1 + max |coeff| (monic)
  Rational bound(1);
  for (const Rational& c : cur.coeffs()) {
    Rational a = c.sign() < 0 ? Rational(-c) : c;
    if (a > bound) bound = a;
  }
  bound += 1;
  Rational width = Rational(1) / rat_pow(Rational(2), 80);
  auto roots = isolate_roots(cur, -bound, bound, width);
  if (roots.size() != r) return std::nullopt;

  PrecisionGuard guard(256);
  std::vector<Rational> nodes;
  for (const RootInterval& ri : roots) {
    if (ri.lo == ri.hi) {
      nodes.push_back(ri.lo);
      continue;
    }
    Real mid = (to_real(ri.lo) + to_real(ri.hi)) / 2;
    auto cand =
        rational_reconstruct(mid, numerator(rat_pow(Rational(2), 32)),
                             to_real(ri.hi - ri.lo) * 4);
    if (!cand || cur.eval(*cand).sign() != 0) return std::nullopt;
    nodes.push_back(*cand);
  }
  // weights from the exact Vandermonde system
  RatMatrix V(r, r);
  std::vector<Rational> rhs(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j)
      V(i, j) = rat_pow(nodes[j], static_cast<unsigned>(i));
    rhs[i] = m.at(i).rat();
  }
  auto w = solve_exact(V, rhs);
  if (!w) return std::nullopt;
  DiscreteMeasure out;
  for (std::size_t j = 0; j < r; ++j) {
    if ((*w)[j].sign() <= 0) return std::nullopt;
    out.atoms.push_back({Scalar(nodes[j]), Scalar((*w)[j])});
  }
  return out;
}

}  // namespace

DiscreteMeasure quadrature_from_moments(const MomentSequence1D& m,
                                        std::size_t k) {
  if (k == 0) throw std::invalid_argument("need at least one node");
  JacobiRecurrence rec = jacobi_recurrence(m, k);
  std::size_t r = rec.rank;

  if (rec.exact) {
    auto exact = exact_quadrature(m, rec);
    if (exact) return *exact;
  }

  PrecisionGuard guard(std::max(m.precision_bits(), 256u));
  std::vector<Real> diag, off;
  for (std::size_t j = 0; j < r; ++j) diag.push_back(rec.alpha[j].real());
  for (std::size_t j = 1; j < r; ++j)
    off.push_back(sqrt(rec.beta[j].real()));
  TridiagEigenResult eig = tridiag_eigen(std::move(diag), std::move(off));

  DiscreteMeasure out;
  Real mass = rec.beta[0].real();
  for (std::size_t j = 0; j < r; ++j) {
    Real w = mass * eig.first_components[j] * eig.first_components[j];
    out.atoms.push_back({Scalar(eig.values[j]), Scalar(w)});
  }
  return out;
}

}  // namespace momentdet
