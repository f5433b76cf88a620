#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace minkray {

struct Metric {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string op = "<=";  // "<=", ">=", or "info" (no threshold)
  bool pass() const;
};

/// Parameters, metrics, and timings of one experiment. Timings and the wall
/// clock stamp are dropped from the serialization when timestamps are off, so
/// deterministic runs produce byte-identical reports.
struct ExperimentReport {
  std::string id;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<Metric> metrics;
  std::vector<std::pair<std::string, double>> runtimes;  // seconds
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  Metric& add(const std::string& name, double value, const std::string& op = "info", double threshold = 0.0);
  const Metric* find(const std::string& name) const;
  bool pass() const;  // every thresholded metric passes and every value is finite

  std::string to_json(bool timestamps = true) const;
  static ExperimentReport from_json(const std::string& text);
};

std::string library_version();

}  // namespace minkray
