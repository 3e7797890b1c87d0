#include "sharpmax/report.hpp"

namespace sharpmax {

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json doc;
  doc["check"] = report.check;
  doc["parameters"] = report.parameters;
  doc["lhs"] = report.lhs;
  doc["rhs"] = report.rhs;
  doc["margin"] = report.margin;
  doc["passed"] = report.passed;
  doc["seed"] = report.seed ? nlohmann::json(*report.seed) : nlohmann::json();
  doc["details"] = report.details;
  return doc;
}

VerificationReport report_from_json(const nlohmann::json& doc) {
  VerificationReport r;
  r.check = doc.at("check").get<std::string>();
  r.parameters = doc.at("parameters").get<std::map<std::string, double>>();
  r.lhs = doc.at("lhs").get<double>();
  r.rhs = doc.at("rhs").get<double>();
  r.margin = doc.at("margin").get<double>();
  r.passed = doc.at("passed").get<bool>();
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    r.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("details")) {
    r.details = doc["details"].get<std::map<std::string, double>>();
  }
  return r;
}

}  // namespace sharpmax
