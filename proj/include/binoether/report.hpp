#pragma once

#include <string>
#include <vector>

#include "binoether/system.hpp"
#include "binoether/verify.hpp"

namespace binoether {

struct CheckReport {
  std::string name;
  int dof = 0;
  CheckConfig config;
  std::vector<CheckRecord> checks;
  std::vector<SpectrumSample> spectrum_samples;
  bool verdict = false;  // every mandatory check passed

  bool operator==(const CheckReport&) const = default;
};

/// Runs, in order: jacobi, regularity, symmetry, non-Noether classification,
/// Yang-Baxter, compatibility, spectrum, conservation and involution. Errors
/// raised by a check become a failing record for that check. For a Noether
/// generator the invariant checks are recorded as vacuous passes.
CheckReport run_report(const SystemSpec& spec, const CheckConfig& cfg);

/// Pretty-printed JSON, two-space indent, trailing newline. Non-finite
/// residuals are written as null and read back as +infinity.
std::string to_json(const CheckReport& report);
CheckReport report_from_json(const std::string& text);

std::string to_text(const CheckReport& report);

}  // namespace binoether
