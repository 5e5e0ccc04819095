#ifndef MOMENTDET_MOMENTS1D_HPP
#define MOMENTDET_MOMENTS1D_HPP

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "momentdet/linalg.hpp"
#include "momentdet/series_verdict.hpp"

namespace momentdet {

// Raw 1-D moment data m_0, m_1, ...; zeros and (for odd indices) negative
// values are allowed. Immutable, lazily generated, memoized.
class MomentSequence1D {
 public:
  enum class Parity { kFull, kEvenOnly };
  using Generator = std::function<Scalar(std::size_t)>;

  MomentSequence1D(Generator gen, ScalarMode mode, unsigned precision_bits,
                   std::string provenance, Parity parity = Parity::kFull);

  static MomentSequence1D from_values(std::vector<Scalar> values,
                                      ScalarMode mode, unsigned precision_bits,
                                      std::string provenance);
  // {"moments": [...], "mode": ..., "support_hint": "R"|"R+"|[a,b]} or
  // {"generator": "gaussian:1", ...}.
  static MomentSequence1D from_json(const nlohmann::json& j);
  nlohmann::json to_json(std::size_t up_to) const;

  // gaussian:s, lognormal:s, exponential:l, uniform:a,b, dirac:x0,
  // gamma:k,theta.
  static MomentSequence1D builtin(const std::string& spec, ScalarMode mode,
                                  unsigned precision_bits);
  static std::vector<std::string> builtin_names();

  const Scalar& at(std::size_t n) const;
  ScalarMode mode() const { return mode_; }
  unsigned precision_bits() const { return precision_bits_; }
  const std::string& provenance() const { return provenance_; }
  Parity parity() const { return parity_; }
  const std::optional<std::string>& support_hint() const {
    return support_hint_;
  }
  MomentSequence1D with_support_hint(std::string hint) const;

 private:
  struct Cache {
    mutable std::mutex mu;
    mutable std::unordered_map<std::size_t, Scalar> values;
  };
  Generator gen_;
  ScalarMode mode_;
  unsigned precision_bits_;
  std::string provenance_;
  Parity parity_;
  std::optional<std::string> support_hint_;
  std::shared_ptr<Cache> cache_;
};

struct DiscreteMeasure {
  struct Atom {
    Scalar node;
    Scalar weight;  // strictly positive
  };
  std::vector<Atom> atoms;  // nodes distinct

  void validate() const;
  Scalar moment(std::size_t n) const;
  MomentSequence1D moments(ScalarMode mode, unsigned precision_bits) const;
  nlohmann::json to_json() const;
  static DiscreteMeasure from_json(const nlohmann::json& j);
};

enum class HankelVariant { kHamburger, kStieltjes };

struct HankelReport {
  bool psd = false;
  bool within_tolerance = false;  // float mode decision
  std::size_t rank = 0;
  // Witness h with sum h_i h_j m_{i+j(+1)} < 0 when not PSD; the `shifted`
  // flag says which matrix it defeats.
  std::vector<Scalar> witness;
  Scalar witness_value;
  bool witness_on_shifted = false;
};

// PSD test of the Hankel matrix (m_{i+j}), i,j <= N; the Stieltjes variant
// also requires the shifted Hankel (m_{i+j+1}) to be PSD.
HankelReport hankel_psd(const MomentSequence1D& m, std::size_t N,
                        HankelVariant variant);

enum class DeterminacyCertificate {
  kNone,
  kCarleman,
  kStieltjes,
  kDegenerate,
  kCompactSupport
};

std::string to_string(DeterminacyCertificate c);

struct DeterminacyOutcome {
  Verdict verdict;
  DeterminacyCertificate certificate = DeterminacyCertificate::kNone;
  std::optional<DiscreteMeasure> degenerate_measure;
  std::string note;

  nlohmann::json to_json() const;
};

// Series m_{2n}^(-1/2n); divergence evidence certifies determinacy. A zero
// even moment short-circuits: the only realizing measure is m_0 delta_0.
DeterminacyOutcome carleman_check(const MomentSequence1D& m, std::size_t N,
                                  const SeriesOptions& opts = {});
// Series m_n^(-1/2n) for measures on the half line.
DeterminacyOutcome stieltjes_check(const MomentSequence1D& m, std::size_t N,
                                   const SeriesOptions& opts = {});

// q_{2n} = m_n, q_{2n+1} = 0: the half-line problem restated on the line.
MomentSequence1D stieltjes_to_hamburger(const MomentSequence1D& m);

struct CompactSupportReport {
  bool consistent = false;
  std::optional<std::size_t> first_violation;  // n with m_2n > m_0 c^2n
  bool certificate = false;  // determinate if really supported on K
};

CompactSupportReport compact_support_check(const MomentSequence1D& m,
                                           const Scalar& lo, const Scalar& hi,
                                           std::size_t N);

// k-node Gauss rule for the moment data: three-term recurrence from raw
// moments, nodes from the Jacobi matrix, weights from first eigenvector
// components. Rank-deficient data yields the exact finitely-atomic measure.
DiscreteMeasure quadrature_from_moments(const MomentSequence1D& m,
                                        std::size_t k);

// Monic three-term recurrence coefficients from raw moments.
struct JacobiRecurrence {
  std::vector<Scalar> alpha;
  std::vector<Scalar> beta;  // beta[0] = m_0
  std::size_t rank = 0;      // usable recurrence length
  bool exact = false;
};

JacobiRecurrence jacobi_recurrence(const MomentSequence1D& m, std::size_t k);

}  // namespace momentdet

#endif  // MOMENTDET_MOMENTS1D_HPP
