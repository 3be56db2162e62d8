#ifndef SUITA_REPORT_HPP
#define SUITA_REPORT_HPP

#include "suita/core.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace suita {

/// A named scalar result together with the operation that produced it.
struct Quantity {
  std::string name;
  double value = 0.0;
  std::string source;
};

/// One verification result. `pass` is always recomputable as
/// error.empty() && margin >= -tolerance.
struct ReportRecord {
  std::string command;
  std::string input_id;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<Quantity> quantities;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> warnings;
  std::string error;
  bool cached = false;

  ReportRecord& add(std::string name, double value, std::string source) {
    quantities.push_back({std::move(name), value, std::move(source)});
    return *this;
  }

  double get(const std::string& name) const {
    for (const auto& q : quantities) {
      if (q.name == name) return q.value;
    }
    throw Error(ErrorKind::Parameter, "record has no quantity named " + name);
  }

  bool has(const std::string& name) const {
    for (const auto& q : quantities) {
      if (q.name == name) return true;
    }
    return false;
  }

  /// Sets margin and tolerance and derives pass from them.
  ReportRecord& decide(double margin_value, double tol) {
    margin = margin_value;
    tolerance = tol;
    pass = error.empty() && std::isfinite(margin) && margin >= -tolerance;
    return *this;
  }

  ReportRecord& fail_with(const std::string& message) {
    error = message;
    pass = false;
    return *this;
  }

  bool consistent() const {
    const bool expected = error.empty() && std::isfinite(margin) && margin >= -tolerance;
    return expected == pass;
  }
};

inline nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

inline nlohmann::json to_json(const ReportRecord& r) {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& item : r.quantities) {
    q.push_back({{"name", item.name}, {"value", finite_or_null(item.value)}, {"source", item.source}});
  }
  nlohmann::json j = {{"command", r.command},   {"input_id", r.input_id},
                      {"inputs", r.inputs},     {"quantities", q},
                      {"margin", finite_or_null(r.margin)},
                      {"tolerance", r.tolerance}, {"pass", r.pass},
                      {"warnings", r.warnings}, {"cached", r.cached}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline ReportRecord record_from_json(const nlohmann::json& j) {
  ReportRecord r;
  r.command = j.at("command").get<std::string>();
  r.input_id = j.at("input_id").get<std::string>();
  r.inputs = j.at("inputs");
  for (const auto& q : j.at("quantities")) {
    const double v = q.at("value").is_null() ? std::numeric_limits<double>::quiet_NaN() : q.at("value").get<double>();
    r.quantities.push_back({q.at("name").get<std::string>(), v, q.at("source").get<std::string>()});
  }
  r.margin = j.at("margin").is_null() ? -std::numeric_limits<double>::infinity() : j.at("margin").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.error = j.value("error", std::string());
  r.cached = j.value("cached", false);
  return r;
}

}  // namespace suita

#endif  // SUITA_REPORT_HPP
