#include "momentdet/gns.hpp"

#include <algorithm>

namespace momentdet {

namespace {

// <u, w> through the Gram matrix of monomials.
Scalar pair_through_gram(const Multisequence& m,
                         const std::vector<MultiIndex>& mons,
                         const std::vector<Scalar>& u,
                         const std::vector<Scalar>& w) {
  Scalar acc(0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j].is_zero()) continue;
      acc = acc + u[i] * w[j] * m.at(multi_add(mons[i], mons[j]));
    }
  }
  return acc;
}

}  // namespace

nlohmann::json GnsModel::to_json() const {
  nlohmann::json j;
  j["dimension"] = dimension;
  j["degree"] = degree;
  j["quotient_dimension"] = quotient_dimension();
  j["kernel_rank"] = kernel_rank;
  nlohmann::json mons = nlohmann::json::array();
  for (const MultiIndex& a : monomials)
    mons.push_back(multi_index_to_string(a));
  j["monomials"] = std::move(mons);
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& v : basis) {
    nlohmann::json row = nlohmann::json::array();
    for (const Scalar& c : v) row.push_back(c.to_string());
    bs.push_back(std::move(row));
  }
  j["basis"] = std::move(bs);
  nlohmann::json ns = nlohmann::json::array();
  for (const Scalar& q : norms_sq) ns.push_back(q.to_string());
  j["norms_sq"] = std::move(ns);
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& X : op) {
    nlohmann::json em = nlohmann::json::array();
    for (const auto& col : X) {
      nlohmann::json rc = nlohmann::json::array();
      for (const Scalar& c : col) rc.push_back(c.to_string());
      em.push_back(std::move(rc));
    }
    ops.push_back(std::move(em));
  }
  j["op_matrices"] = std::move(ops);
  return j;
}

GnsModel gns_build(const Multisequence& m, std::size_t N) {
  if (2 * N > m.max_degree())
    throw WindowError("GNS at degree " + std::to_string(N) + " needs moments "
                      "to degree " + std::to_string(2 * N));
  MomentMatrixReport psd = moment_matrix_psd(m, N);
  if (!psd.psd)
    throw GnsRefusal("moment matrix is not PSD: GNS construction refused",
                     std::move(psd));

  GnsModel g;
  g.dimension = m.dimension();
  g.degree = N;
  g.mode = m.mode();
  g.precision_bits = m.precision_bits();
  g.monomials = monomials_up_to(m.dimension(), N);
  PrecisionGuard guard(m.precision_bits());

  const std::size_t M = g.monomials.size();
  bool exact = m.mode() == ScalarMode::kRational;

  // Graded Gram-Schmidt without normalization: processing monomials in
  // graded-lex order keeps every residual's leading monomial at its own
  // degree, and a zero residual norm identifies a kernel direction (the
  // radical of the form, by Cauchy-Schwarz).
  for (std::size_t i = 0; i < M; ++i) {
    std::vector<Scalar> w(M, Scalar(0));
    w[i] = Scalar(1);
    for (std::size_t b = 0; b < g.basis.size(); ++b) {
      std::vector<Scalar> e(M, Scalar(0));
      e[i] = Scalar(1);
      Scalar c = pair_through_gram(m, g.monomials, e, g.basis[b]) /
                 g.norms_sq[b];
      if (c.is_zero()) continue;
      for (std::size_t t = 0; t < M; ++t)
        w[t] = w[t] - c * g.basis[b][t];
    }
    Scalar nsq = pair_through_gram(m, g.monomials, w, w);
    bool is_kernel;
    if (exact) {
      is_kernel = nsq.is_zero();
      if (nsq.is_negative())
        throw InvalidSequenceError("PSD check passed but a residual norm is "
                                   "negative; inconsistent moment data");
    } else {
      Real diag = m.at(multi_add(g.monomials[i], g.monomials[i])).real();
      Real rel_floor = Real("1e-20") * std::max(diag, Real(1));
      is_kernel = nsq.real() <= rel_floor;
    }
    if (is_kernel) {
      ++g.kernel_rank;
      g.kernel_leads.push_back(g.monomials[i]);
      continue;
    }
    g.basis.push_back(std::move(w));
    g.norms_sq.push_back(std::move(nsq));
    g.basis_degree.push_back(total_degree(g.monomials[i]));
  }

  // Multiplication maps on the degree <= N-1 part of the quotient.
  for (std::size_t b = 0; b < g.basis.size(); ++b)
    if (g.basis_degree[b] + 1 <= N) g.domain.push_back(b);

  auto monomial_pos = [&](const MultiIndex& a) -> std::size_t {
    auto it = std::lower_bound(g.monomials.begin(), g.monomials.end(), a,
                               graded_lex_less);
    return static_cast<std::size_t>(it - g.monomials.begin());
  };

  g.op.resize(g.dimension);
  for (std::size_t axis = 0; axis < g.dimension; ++axis) {
    auto& X = g.op[axis];
    X.reserve(g.domain.size());
    for (std::size_t db = 0; db < g.domain.size(); ++db) {
      const auto& v = g.basis[g.domain[db]];
      // shift the coefficient vector by e_axis
      std::vector<Scalar> shifted(M, Scalar(0));
      for (std::size_t t = 0; t < M; ++t) {
        if (v[t].is_zero()) continue;
        MultiIndex a = g.monomials[t];
        a[axis] += 1;
        shifted[monomial_pos(a)] = v[t];
      }
      std::vector<Scalar> coords(g.basis.size(), Scalar(0));
      for (std::size_t b = 0; b < g.basis.size(); ++b)
        coords[b] = pair_through_gram(m, g.monomials, shifted, g.basis[b]) /
                    g.norms_sq[b];
      X.push_back(std::move(coords));
    }
  }
  return g;
}

Scalar gns_pairing(const GnsModel& g, const MultiIndex& alpha) {
  if (alpha.size() != g.dimension)
    throw std::invalid_argument("multi-index dimension mismatch");
  if (total_degree(alpha) > g.degree)
    throw WindowError("pairing degree exceeds the represented space");
  PrecisionGuard guard(g.precision_bits);

  // index of each basis vector in the domain list, for composing
  std::vector<std::optional<std::size_t>> domain_pos(g.basis.size());
  for (std::size_t i = 0; i < g.domain.size(); ++i)
    domain_pos[g.domain[i]] = i;

  // class of the constant 1: coordinates of the first monomial
  std::vector<Scalar> coords(g.basis.size(), Scalar(0));
  if (g.basis.empty()) return Scalar(0);
  // monomial 0 is processed first, so it is the first basis vector (its
  // residual is itself) unless it fell into the kernel (zero measure).
  if (!g.basis_degree.empty() && g.basis_degree[0] == 0)
    coords[0] = Scalar(1);

  for (std::size_t axis = 0; axis < alpha.size(); ++axis) {
    for (unsigned rep = 0; rep < alpha[axis]; ++rep) {
      std::vector<Scalar> next(g.basis.size(), Scalar(0));
      for (std::size_t b = 0; b < g.basis.size(); ++b) {
        if (coords[b].is_zero()) continue;
        if (!domain_pos[b])
          throw WindowError(
              "composition left the represented space; reduce |alpha|");
        const auto& col = g.op[axis][*domain_pos[b]];
        for (std::size_t t = 0; t < g.basis.size(); ++t)
          next[t] = next[t] + coords[b] * col[t];
      }
      coords = std::move(next);
    }
  }
  // <1, result> with the diagonal inner product
  Scalar acc(0);
  if (!g.basis_degree.empty() && g.basis_degree[0] == 0)
    acc = coords[0] * g.norms_sq[0];
  return acc;
}

nlohmann::json CommutationReport::to_json() const {
  nlohmann::json pj = nlohmann::json::array();
  for (const auto& p : pairs)
    pj.push_back({{"i", p.i},
                  {"j", p.j},
                  {"max_residual", p.max_residual.str(20, std::ios_base::scientific)}});
  return {{"pairs", pj},
          {"max_residual", max_residual.str(20, std::ios_base::scientific)}};
}

CommutationReport commutation_residual(const GnsModel& g) {
  if (g.degree < 2)
    throw WindowError("commutation residual needs degree N >= 2");
  PrecisionGuard guard(g.precision_bits);
  CommutationReport rep;
  rep.max_residual = Real(0);

  std::vector<std::optional<std::size_t>> domain_pos(g.basis.size());
  for (std::size_t i = 0; i < g.domain.size(); ++i)
    domain_pos[g.domain[i]] = i;

  auto apply = [&](std::size_t axis,
                   const std::vector<Scalar>& coords) -> std::vector<Scalar> {
    std::vector<Scalar> next(g.basis.size(), Scalar(0));
    for (std::size_t b = 0; b < g.basis.size(); ++b) {
      if (coords[b].is_zero()) continue;
      if (!domain_pos[b])
        throw WindowError("composition outside the represented space");
      const auto& col = g.op[axis][*domain_pos[b]];
      for (std::size_t t = 0; t < g.basis.size(); ++t)
        next[t] = next[t] + coords[b] * col[t];
    }
    return next;
  };

  for (std::size_t i = 0; i + 1 < g.dimension; ++i) {
    for (std::size_t j = i + 1; j < g.dimension; ++j) {
      Real worst(0);
      for (std::size_t db = 0; db < g.domain.size(); ++db) {
        std::size_t b = g.domain[db];
        if (g.basis_degree[b] + 2 > g.degree) continue;  // need two steps
        std::vector<Scalar> start(g.basis.size(), Scalar(0));
        start[b] = Scalar(1);
        std::vector<Scalar> a = apply(j, apply(i, start));
        std::vector<Scalar> c = apply(i, apply(j, start));
        for (std::size_t t = 0; t < g.basis.size(); ++t) {
          Real diff = abs((a[t] - c[t]).real());
          if (diff > worst) worst = diff;
        }
      }
      rep.pairs.push_back({i + 1, j + 1, worst});
      if (worst > rep.max_residual) rep.max_residual = worst;
    }
  }
  return rep;
}

nlohmann::json QaVectorReport::to_json() const {
  nlohmann::json ns = nlohmann::json::array();
  for (const Real& v : norms) ns.push_back(v.str(20, std::ios_base::scientific));
  return {{"norms", ns},
          {"k_max", k_max},
          {"cs_checked", cs_checked},
          {"cs_all_hold", cs_all_hold},
          {"verdict", verdict.to_json()}};
}

QaVectorReport qa_vector_norms(const GnsModel& g, const Multisequence& m,
                               std::size_t j, const MultiIndex& gamma,
                               std::size_t K, const SeriesOptions& opts) {
  if (j < 1 || j > m.dimension())
    throw std::invalid_argument("axis out of range");
  if (gamma.size() != m.dimension())
    throw std::invalid_argument("monomial dimension mismatch");
  (void)g;  // the norms are computed from the functional, not the matrices
  PrecisionGuard guard(m.precision_bits());
  QaVectorReport rep;

  const std::size_t axis = j - 1;
  const std::size_t g_deg = total_degree(gamma);
  const std::size_t half = m.max_degree() / 2;
  rep.k_max = half > g_deg ? std::min(K, half - g_deg) : 0;

  // ||X_j^k x^gamma||^2 = L(x^{2 gamma + 2k e_j})
  MultiIndex two_gamma = multi_add(gamma, gamma);
  for (std::size_t k = 0; k <= rep.k_max; ++k) {
    MultiIndex idx = two_gamma;
    idx[axis] += static_cast<unsigned>(2 * k);
    Scalar sq = m.at(idx);
    if (sq.is_negative())
      throw InvalidSequenceError("negative squared norm; data is not PSD");
    rep.norms.push_back(sqrt(sq.real()));
  }

  // Cauchy-Schwarz comparison where the degree window allows it.
  MultiIndex gamma_rest = gamma;
  gamma_rest[axis] = 0;
  std::size_t rest_deg = total_degree(gamma_rest);
  bool rest_ok = 4 * rest_deg <= m.max_degree();
  rep.cs_all_hold = true;
  for (std::size_t k = 1; k <= rep.k_max; ++k) {
    std::size_t lead = 4 * k + 4 * gamma[axis];
    if (!rest_ok || lead > m.max_degree()) break;
    MultiIndex idx = two_gamma;
    idx[axis] += static_cast<unsigned>(2 * k);
    MultiIndex lead_idx(m.dimension(), 0);
    lead_idx[axis] = static_cast<unsigned>(lead);
    MultiIndex rest_idx = multi_add(multi_add(gamma_rest, gamma_rest),
                                    multi_add(gamma_rest, gamma_rest));
    const Scalar& lhs = m.at(idx);
    const Scalar& b = m.at(lead_idx);
    const Scalar& c = m.at(rest_idx);
    bool ok;
    if (m.mode() == ScalarMode::kRational)
      ok = lhs.rat() * lhs.rat() <= b.rat() * c.rat();
    else
      ok = lhs.real() * lhs.real() <=
           b.real() * c.real() + Real("1e-40") * (1 + abs(b.real() * c.real()));
    if (!ok) rep.cs_all_hold = false;
    rep.cs_checked = k;
  }

  bool zero_norm = false;
  std::vector<Scalar> terms;
  for (std::size_t k = 1; k <= rep.k_max; ++k) {
    Real nk = rep.norms[k];
    if (nk <= 0) {
      zero_norm = true;
      break;
    }
    terms.push_back(
        Scalar(Real(exp(-log(nk) / Real(static_cast<long>(k))))));
  }
  if (zero_norm) {
    // the vector leaves no mass under X_j: the series is formally infinite
    rep.verdict.status = SeriesStatus::kDivergesLikely;
    rep.verdict.rationale = "zero-norm-short-circuit";
  } else if (!terms.empty()) {
    rep.verdict = classify_series(terms, opts, m.precision_bits());
  }
  return rep;
}

}  // namespace momentdet
