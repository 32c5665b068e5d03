#pragma once

#include <string>
#include <vector>

#include "mtsearch/config.hpp"

namespace mtsearch {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // one-line summary of the evidence
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// Run the internal self-consistency checks on the configured design:
// decoder equivalence, enumeration size bounds, the pairwise-intersection
// cap, the exp(-info-density) identity, and the Gaussian tail bound.
VerificationReport run_verification(const RunConfig& cfg);

}  // namespace mtsearch
