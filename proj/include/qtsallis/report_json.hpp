#pragma once

#include <json.hpp>

#include "qtsallis/oracle_verify.hpp"

namespace qtsallis::oracle {

/// Array of {case, quantity, closed_form, oracle, abs_dev, pass}. Non-finite
/// numbers serialize as null.
inline nlohmann::json to_json(const VerificationReport& report) {
  auto arr = nlohmann::json::array();
  for (const auto& e : report.entries()) {
    arr.push_back({{"case", e.case_label},
                   {"quantity", e.quantity},
                   {"closed_form", e.closed_form},
                   {"oracle", e.oracle},
                   {"abs_dev", e.abs_dev},
                   {"pass", e.pass}});
  }
  return arr;
}

} // namespace qtsallis::oracle
