#include "momentdet/report.hpp"

#include <cstdlib>
#include <fstream>

namespace momentdet {

nlohmann::json AnalysisConfig::to_json() const {
  return {{"mode", mode == ScalarMode::kRational ? "rational" : "float"},
          {"precision_bits", precision_bits},
          {"window", window},
          {"series", series.to_json()}};
}

AnalysisConfig AnalysisConfig::from_json(const nlohmann::json& j) {
  AnalysisConfig c;
  if (j.contains("mode"))
    c.mode = j.at("mode").get<std::string>() == "float" ? ScalarMode::kFloat
                                                        : ScalarMode::kRational;
  c.precision_bits = j.value("precision_bits", c.precision_bits);
  c.window = j.value("window", c.window);
  if (j.contains("series")) c.series = SeriesOptions::from_json(j.at("series"));
  return c;
}

AnalysisConfig AnalysisConfig::load(const std::optional<std::string>& path) {
  std::string file;
  if (path) {
    file = *path;
  } else if (const char* env = std::getenv("MOMENTDET_CONFIG")) {
    file = env;
  }
  if (file.empty()) return AnalysisConfig{};
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config file: " + file);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

AnalysisReport::AnalysisReport(std::string command,
                               std::string input_descriptor,
                               const AnalysisConfig& config) {
  j_["version"] = kVersion;
  j_["command"] = std::move(command);
  j_["input"] = std::move(input_descriptor);
  j_["config"] = config.to_json();
}

void AnalysisReport::add(const std::string& key, nlohmann::json value) {
  j_[key] = std::move(value);
}

std::string AnalysisReport::dump() const { return j_.dump(2) + "\n"; }

}  // namespace momentdet
