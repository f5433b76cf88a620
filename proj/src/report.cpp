#include "minkray/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "minkray/kernels.hpp"
#include "minkray/tensor.hpp"

namespace minkray {

using nlohmann::ordered_json;

std::string library_version() { return "0.1.0"; }

bool Metric::pass() const {
  if (!std::isfinite(value)) return false;
  if (op == "<=") return value <= threshold;
  if (op == ">=") return value >= threshold;
  return true;
}

Metric& ExperimentReport::add(const std::string& name, double value, const std::string& op, double threshold) {
  if (op != "<=" && op != ">=" && op != "info") throw DomainError("metric comparator must be <=, >= or info");
  metrics.push_back({name, value, threshold, op});
  return metrics.back();
}

const Metric* ExperimentReport::find(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return &m;
  return nullptr;
}

bool ExperimentReport::pass() const {
  for (const auto& m : metrics)
    if (!m.pass()) return false;
  return true;
}

namespace {

// JSON cannot carry inf/nan; keep them as strings so reports stay loadable.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double from_number(const ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  return s == "inf" ? HUGE_VAL : -HUGE_VAL;
}

}  // namespace

std::string ExperimentReport::to_json(bool timestamps) const {
  ordered_json j;
  j["id"] = id;
  j["version"] = library_version();
  j["kernels"] = kernels::active_name();
  j["params"] = params;
  ordered_json ms = ordered_json::array();
  for (const auto& m : metrics) {
    ordered_json e;
    e["name"] = m.name;
    e["value"] = number(m.value);
    e["op"] = m.op;
    if (m.op != "info") e["threshold"] = m.threshold;
    e["pass"] = m.pass();
    ms.push_back(e);
  }
  j["metrics"] = ms;
  j["extra"] = extra;
  j["pass"] = pass();
  if (timestamps) {
    ordered_json rt = ordered_json::object();
    for (const auto& [k, v] : runtimes) rt[k] = v;
    j["runtimes_s"] = rt;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  return j.dump(2) + "\n";
}

ExperimentReport ExperimentReport::from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    ExperimentReport r;
    r.id = j.at("id").get<std::string>();
    r.params = j.value("params", ordered_json::object());
    r.extra = j.value("extra", ordered_json::object());
    for (const auto& e : j.at("metrics")) {
      Metric m;
      m.name = e.at("name").get<std::string>();
      m.value = from_number(e.at("value"));
      m.op = e.at("op").get<std::string>();
      m.threshold = e.value("threshold", 0.0);
      r.metrics.push_back(m);
    }
    if (j.contains("runtimes_s"))
      for (const auto& [k, v] : j["runtimes_s"].items()) r.runtimes.emplace_back(k, v.get<double>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

}  // namespace minkray
