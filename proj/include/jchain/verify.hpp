#pragma once

// Cross-route invariant suite behind `jchain verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace jchain {

struct VerifyOptions {
  int max_N = 16;
  std::uint64_t seed = 7;
  double perturb = 0.0;  ///< added to J_0 of every oracle chain in the triple-agreement checks
  int samples = 50;      ///< random (spec, r, s, t) draws per family
};

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  bool passed = false;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;
  bool passed = false;
};

VerifyReport run_verify(const VerifyOptions& options);

/// Deterministic JSON rendering: fixed key order, shortest round-trip doubles.
std::string report_to_json(const VerifyReport& report, int indent = 2);

}  // namespace jchain
