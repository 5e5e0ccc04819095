#ifndef MOMENTDET_MULTISEQ_HPP
#define MOMENTDET_MULTISEQ_HPP

#include <map>

#include "momentdet/moments1d.hpp"

namespace momentdet {

using MultiIndex = std::vector<unsigned>;

std::size_t total_degree(const MultiIndex& a);
MultiIndex multi_add(const MultiIndex& a, const MultiIndex& b);
// Graded lexicographic: by total degree, then lexicographically.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);
std::vector<MultiIndex> monomials_up_to(std::size_t dimension,
                                        std::size_t degree);
std::string multi_index_to_string(const MultiIndex& a);

struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return graded_lex_less(a, b);
  }
};

// Finite atomic measure on R^d, the generator behind most test data.
struct AtomicMeasureD {
  struct Atom {
    std::vector<Scalar> point;
    Scalar weight;
  };
  std::size_t dimension = 0;
  std::vector<Atom> atoms;

  void validate() const;
  Scalar moment(const MultiIndex& alpha) const;
  nlohmann::json to_json() const;
  static AtomicMeasureD from_json(const nlohmann::json& j);
};

// Degree-truncated d-dimensional moment multisequence (m_alpha), |alpha| <= 2N.
class Multisequence {
 public:
  Multisequence(std::size_t dimension, std::size_t max_degree,
                std::map<MultiIndex, Scalar, GradedLess> values,
                ScalarMode mode, unsigned precision_bits);

  static Multisequence from_measure(const AtomicMeasureD& mu,
                                    std::size_t max_degree, ScalarMode mode,
                                    unsigned precision_bits);
  static Multisequence from_product(
      const std::vector<MomentSequence1D>& factors, std::size_t max_degree);
  static Multisequence from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t dimension() const { return d_; }
  std::size_t max_degree() const { return max_degree_; }
  ScalarMode mode() const { return mode_; }
  unsigned precision_bits() const { return precision_bits_; }

  const Scalar& at(const MultiIndex& alpha) const;  // throws on overflow

 private:
  std::size_t d_;
  std::size_t max_degree_;
  std::map<MultiIndex, Scalar, GradedLess> values_;
  ScalarMode mode_;
  unsigned precision_bits_;
};

// Sparse polynomial over monomials in d variables.
struct MultiPolynomial {
  std::size_t dimension = 0;
  std::map<MultiIndex, Scalar, GradedLess> coeffs;

  std::size_t degree() const;
  nlohmann::json to_json() const;
};

// L_m(p) = sum of coeff_alpha m_alpha.
Scalar riesz_apply(const Multisequence& m, const MultiPolynomial& p);

struct MomentMatrixReport {
  bool psd = false;
  bool within_tolerance = false;
  std::size_t rank = 0;
  std::vector<MultiIndex> basis;  // graded lex monomials, |alpha| <= N
  // When not PSD: h with L_m(h^2) < 0.
  std::optional<MultiPolynomial> witness;
  Scalar witness_value;
};

// PSD decision on (m_{alpha+beta}) over monomials of degree <= N.
MomentMatrixReport moment_matrix_psd(const Multisequence& m, std::size_t N);

// Moments along the j-th axis: n -> m_{n e_j}, n <= max_degree.
MomentSequence1D marginal(const Multisequence& m, std::size_t j);

struct MultivariateCarlemanReport {
  std::vector<DeterminacyOutcome> per_axis;
  // DivergesLikely only when every axis diverges (marginal determinacy
  // aggregates); otherwise Inconclusive. Never claims indeterminacy.
  SeriesStatus aggregate = SeriesStatus::kInconclusive;
  bool determinacy_certificate = false;
  std::string note;

  nlohmann::json to_json() const;
};

MultivariateCarlemanReport multivariate_carleman(const Multisequence& m,
                                                 std::size_t terms,
                                                 const SeriesOptions& opts = {});

}  // namespace momentdet

#endif  // MOMENTDET_MULTISEQ_HPP
