#ifndef MOMENTDET_REPORT_HPP
#define MOMENTDET_REPORT_HPP

#include <optional>

#include <nlohmann/json.hpp>

#include "momentdet/series_verdict.hpp"

namespace momentdet {

inline constexpr const char* kVersion = "momentdet 0.1.0";

struct AnalysisConfig {
  ScalarMode mode = ScalarMode::kRational;
  unsigned precision_bits = kDefaultPrecisionBits;
  std::size_t window = 64;
  SeriesOptions series;

  nlohmann::json to_json() const;
  static AnalysisConfig from_json(const nlohmann::json& j);
  // Reads the file at `path`, else $MOMENTDET_CONFIG, else defaults.
  static AnalysisConfig load(const std::optional<std::string>& path);
};

// Machine-readable result envelope: every number traceable to an operation,
// the configuration snapshot sufficient to reproduce the run.
class AnalysisReport {
 public:
  AnalysisReport(std::string command, std::string input_descriptor,
                 const AnalysisConfig& config);

  void add(const std::string& key, nlohmann::json value);
  const nlohmann::json& body() const { return j_; }
  std::string dump() const;  // stable formatting

 private:
  nlohmann::json j_;
};

}  // namespace momentdet

#endif  // MOMENTDET_REPORT_HPP
