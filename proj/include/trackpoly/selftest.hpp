#pragma once

#include <string>
#include <vector>

namespace trackpoly {

struct SuiteResult {
  std::string id;    // a..j
  std::string name;
  std::size_t cases = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Property suites over the form table on synthetic star vertices and over
/// every `.tt` file in `fixture_dir`:
///   a  local form table           f  A^T J A = J
///   b  chi = vertex*puncture*symp g  basis choice independence
///   c  degree formulas            h  power law for n = 2, 3
///   d  palindromicity             i  T(f^2) = T^2
///   e  det A = +-1                j  orientation flip and cover labeling flip
/// The power law runs on `power_fixture` only when it is present.
std::vector<SuiteResult> run_selftest(const std::string& fixture_dir, const std::string& power_fixture = "k8_9.tt");

}  // namespace trackpoly
