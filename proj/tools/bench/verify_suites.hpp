// Self-contained verification suites: each one checks a numerical kernel of
// the curved-beam library against an independent oracle (finite differences,
// brute-force quadrature, closed-form limits, rigid-motion invariants).
// Shared between the benchmark CLI (`verify` subcommand) and the acceptance
// test binary.
#pragma once

#include <string>
#include <vector>

namespace curvebeam::verify {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs every suite and returns one result per suite. With
/// omit_follower_stiffness the tangent check drops the load-stiffness block,
/// which must make the finite-difference comparison fail — useful as a
/// sensitivity demonstration.
std::vector<SuiteResult> run_suites(bool omit_follower_stiffness = false);

}  // namespace curvebeam::verify
