#ifndef MOMENTDET_SEQUENCE_HPP
#define MOMENTDET_SEQUENCE_HPP

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentdet/scalar.hpp"

namespace momentdet {

// Lazily evaluated sequence of strictly positive scalars M_0, M_1, ...
// Generators must be pure; values are memoized, so repeated evaluation at the
// same index is identical by construction. Immutable after construction.
class PositiveSequence {
 public:
  using Generator = std::function<Scalar(std::size_t)>;

  PositiveSequence(Generator gen, std::size_t window, ScalarMode mode,
                   unsigned precision_bits, std::string name);

  static PositiveSequence from_values(std::vector<Scalar> values,
                                      ScalarMode mode, unsigned precision_bits,
                                      std::string name);

  // {"values": [...], "mode": "rational"|"float", "precision_bits": n}
  // or {"generator": "name", "params": [...], "window": n, ...}.
  static PositiveSequence from_json(const nlohmann::json& j);
  nlohmann::json to_json(std::size_t up_to) const;

  // Builtin generators: factorial, nfact2, nfact3, constant:c, geometric:c,
  // expsq, gaussian_even:sigma, lognormal_even:sigma.
  static PositiveSequence builtin(const std::string& spec, std::size_t window,
                                  ScalarMode mode, unsigned precision_bits);
  static std::vector<std::string> builtin_names();

  // Strictly positive value at index n; throws InvalidSequenceError otherwise.
  const Scalar& at(std::size_t n) const;
  Real at_real(std::size_t n) const;

  std::size_t window() const { return window_; }
  ScalarMode mode() const { return mode_; }
  unsigned precision_bits() const { return precision_bits_; }
  const std::string& name() const { return name_; }

  PositiveSequence shift(std::size_t k) const;      // n -> M_{n+k}
  PositiveSequence subsample(std::size_t j) const;  // n -> M_{jn}
  // n -> M_n^{1/j}; j > 1 switches to float mode at `bits` (0 = inherit).
  PositiveSequence root(std::size_t j, unsigned bits = 0) const;
  PositiveSequence scale(const Scalar& delta) const;
  PositiveSequence with_window(std::size_t window) const;
  // Same values converted to float mode at `bits` (0 = inherit precision).
  PositiveSequence as_float(unsigned bits = 0) const;

 private:
  struct Cache {
    mutable std::mutex mu;
    mutable std::unordered_map<std::size_t, Scalar> values;
  };

  Generator gen_;
  std::size_t window_;
  ScalarMode mode_;
  unsigned precision_bits_;
  std::string name_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace momentdet

#endif  // MOMENTDET_SEQUENCE_HPP
