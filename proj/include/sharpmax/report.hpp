#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace sharpmax {

/// Outcome of one inequality or sharpness check. `margin` is rhs - lhs for
/// upper-bound checks (negative means violated); checks with several
/// sub-inequalities put the individual margins in `details` and the smallest
/// one in `margin`.
struct VerificationReport {
  std::string check;
  std::map<std::string, double> parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool passed = false;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> details;
};

nlohmann::json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& doc);

}  // namespace sharpmax
