#pragma once

#include <string>
#include <vector>

#include "phasekit/io.hpp"

namespace phasekit::verify {

struct CheckRecord {
  std::string name;
  /// The identity the check exercises.
  std::string anchor;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckRecord> checks;
  bool pass() const;
};

/// Runs the invariant suite with settings taken from a resolved run config.
VerifyReport run_suite(const Json& config, int workers = 0);

Json to_json(const VerifyReport& r);

}  // namespace phasekit::verify
