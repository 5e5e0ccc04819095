#ifndef MOMENTDET_TENSORSEQ_HPP
#define MOMENTDET_TENSORSEQ_HPP

#include "momentdet/multiseq.hpp"
#include "momentdet/qa_conditions.hpp"

namespace momentdet {

// Symmetric tensor of a fixed order over R^d, stored canonically by exponent
// multi-index: the entry at any index tuple depends only on how many times
// each axis appears. Multinomial multiplicities live in the operations, not
// in the storage.
struct SymmetricTensor {
  std::size_t dimension = 0;
  std::size_t order = 0;
  std::map<MultiIndex, Scalar, GradedLess> entries;  // keys with |alpha| = order

  const Scalar& entry(const MultiIndex& alpha) const;
  bool is_zero() const;
  // Frobenius norm squared: sum over all index tuples of the entry squared.
  Scalar frobenius_sq() const;
  // One-slot contraction against f; order drops by one.
  SymmetricTensor contract_once(const std::vector<Scalar>& f) const;
};

Integer multinomial(std::size_t n, const MultiIndex& alpha);

// Finite list of symmetric tensors m^(n), n <= max_order.
class TensorSequence {
 public:
  TensorSequence(std::size_t dimension, std::vector<SymmetricTensor> tensors,
                 ScalarMode mode, unsigned precision_bits);

  static TensorSequence from_measure(const AtomicMeasureD& mu,
                                     std::size_t max_order, ScalarMode mode,
                                     unsigned precision_bits);
  // Moment multisequence regrouped by total order (m^(n))_alpha = m_alpha.
  static TensorSequence from_multisequence(const Multisequence& m);
  // m^(n) = weight * eta^{(x) n}.
  static TensorSequence rank_one(std::vector<Scalar> eta,
                                 std::size_t max_order, ScalarMode mode,
                                 unsigned precision_bits);
  // m^(2n) = scale(n) * (e_1)^{(x) 2n}: Frobenius norm = scale(n); odd
  // orders zero.
  static TensorSequence scaled_unit(std::size_t dimension,
                                    std::function<Scalar(std::size_t)> scale,
                                    std::size_t max_order, ScalarMode mode,
                                    unsigned precision_bits);
  static TensorSequence from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t dimension() const { return d_; }
  std::size_t max_order() const { return tensors_.size() - 1; }
  const SymmetricTensor& at(std::size_t order) const;
  ScalarMode mode() const { return mode_; }
  unsigned precision_bits() const { return precision_bits_; }

 private:
  std::size_t d_;
  std::vector<SymmetricTensor> tensors_;
  ScalarMode mode_;
  unsigned precision_bits_;
};

// Full contraction of m^(n) against f_1 (x) ... (x) f_n.
Scalar tensor_pairing(const TensorSequence& m,
                      const std::vector<std::vector<Scalar>>& fs);

struct DirectionSet {
  std::vector<std::vector<Scalar>> vectors;

  void validate(std::size_t dimension) const;  // nonzero, pairwise distinct
  bool spanning(std::size_t dimension) const;  // total in R^d
  Scalar max_norm_sq() const;
  static DirectionSet canonical(std::size_t dimension);  // e_1..e_d
  nlohmann::json to_json() const;
  static DirectionSet from_json(const nlohmann::json& j);
};

constexpr std::size_t kDefaultPairingBudget = 2'000'000;

struct DeterminingSequenceResult {
  // m_n = sqrt(sup over 2n-fold direction multisets of |pairing|), n <= N.
  std::vector<Scalar> values;          // as computed (float after the sqrt)
  std::vector<Scalar> sup_squares;     // exact sup of |pairing| per order
  std::vector<bool> lower_bound_only;  // heuristic search past the budget
  std::size_t evaluations = 0;
  bool exhaustive = true;
};

// Enumerates direction multisets (symmetry collapses ordered tuples).
// Exceeding `budget` raises BudgetError naming the reachable N, unless
// allow_heuristic is set, in which case a power-iteration guided search
// reports a lower bound only.
DeterminingSequenceResult determining_sequence(
    const TensorSequence& m, const DirectionSet& E, std::size_t N,
    std::size_t budget = kDefaultPairingBudget, bool allow_heuristic = false);

// m_n <= (sup_f |f|)^n ||m^(2n)||_F^(1/2), compared exactly on squares.
std::vector<bool> d_bound_check(const TensorSequence& m, const DirectionSet& E,
                                std::size_t N,
                                const DeterminingSequenceResult* precomputed =
                                    nullptr);

struct DeterminingVerdict {
  DeterminingSequenceResult sequence;
  Verdict b, c, e;
  std::optional<SeriesStatus> consensus;
  bool determining_evidence = false;  // DivergesLikely consensus
  std::string note;

  nlohmann::json to_json() const;
};

DeterminingVerdict determining_verdict(const TensorSequence& m,
                                       const DirectionSet& E, std::size_t N,
                                       const SeriesOptions& opts = {});

// (m_{phi,n})_n: moments of the image measure under eta -> <phi, eta>.
MomentSequence1D per_direction_sequence(const TensorSequence& m,
                                        const std::vector<Scalar>& phi);

struct GeneralizedStieltjesReport {
  Verdict quarter_root;  // exponent 1/(4n), the half-line style condition
  Verdict half_root;     // exponent 1/(2n), the whole-line style condition

  nlohmann::json to_json() const;
};

GeneralizedStieltjesReport generalized_stieltjes_check(
    const TensorSequence& m, const DirectionSet& E, std::size_t N,
    const SeriesOptions& opts = {});

}  // namespace momentdet

#endif  // MOMENTDET_TENSORSEQ_HPP
