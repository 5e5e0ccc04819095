#ifndef MOMENTDET_GNS_HPP
#define MOMENTDET_GNS_HPP

#include "momentdet/multiseq.hpp"

namespace momentdet {

// Truncated GNS model of a PSD multisequence: the quotient of the span of
// monomials of degree <= N by the null ideal of <f,g> = L_m(fg), carried by
// an orthogonal (not normalized) rational basis, plus the d multiplication
// maps X_j restricted to degree <= N-1 classes.
struct GnsModel {
  std::size_t dimension = 0;
  std::size_t degree = 0;  // N
  ScalarMode mode = ScalarMode::kRational;
  unsigned precision_bits = kDefaultPrecisionBits;

  std::vector<MultiIndex> monomials;  // graded lex, |alpha| <= N
  std::size_t kernel_rank = 0;
  std::vector<MultiIndex> kernel_leads;  // monomials absorbed into the ideal

  // Orthogonal basis vectors as coefficient columns over `monomials`,
  // squared norms, and the degree of each leading monomial.
  std::vector<std::vector<Scalar>> basis;
  std::vector<Scalar> norms_sq;
  std::vector<std::size_t> basis_degree;

  // op[j], j < dimension: (#basis) x (#domain) coordinates of x_j * v_b in
  // the orthogonal basis; domain = basis vectors of degree <= N-1.
  std::vector<std::vector<std::vector<Scalar>>> op;
  std::vector<std::size_t> domain;  // indices of the domain basis vectors

  std::size_t quotient_dimension() const { return basis.size(); }
  nlohmann::json to_json() const;
};

struct GnsRefusal : std::runtime_error {
  explicit GnsRefusal(std::string what, MomentMatrixReport rep)
      : std::runtime_error(std::move(what)), report(std::move(rep)) {}
  MomentMatrixReport report;
};

// Builds the model; refuses (with the PSD witness) when the moment matrix is
// not PSD.
GnsModel gns_build(const Multisequence& m, std::size_t N);

// <1, X^alpha 1> computed through the operator coordinates; defined for
// |alpha| <= N. Exact in rational mode; equals m_alpha.
Scalar gns_pairing(const GnsModel& g, const MultiIndex& alpha);

struct CommutationReport {
  struct Pair {
    std::size_t i, j;       // axes (1-based)
    Real max_residual;      // max |coordinate difference| on degree <= N-2
  };
  std::vector<Pair> pairs;
  Real max_residual;

  nlohmann::json to_json() const;
};

CommutationReport commutation_residual(const GnsModel& g);

struct QaVectorReport {
  std::vector<Real> norms;      // ||X_j^k x^gamma||, k = 0..k_max
  std::size_t k_max = 0;        // clipped to the available degree window
  std::size_t cs_checked = 0;   // bound verified for k = 1..cs_checked
  bool cs_all_hold = false;
  Verdict verdict;              // on the series ||X^k v||^(-1/k)

  nlohmann::json to_json() const;
};

// Norms of the iterated multiplication operator applied to a monomial,
// computed directly from the Riesz functional (no truncated matrices), with
// the Cauchy-Schwarz comparison L(x^{2g+2k e_j})^2 <= L(x_j^{4k+4g_j})
// L(x^{4(g - g_j e_j)}) checked exactly where degrees allow.
QaVectorReport qa_vector_norms(const GnsModel& g, const Multisequence& m,
                               std::size_t j, const MultiIndex& gamma,
                               std::size_t K, const SeriesOptions& opts = {});

}  // namespace momentdet

#endif  // MOMENTDET_GNS_HPP
