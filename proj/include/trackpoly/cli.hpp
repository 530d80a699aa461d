#pragma once

#include "trackpoly/model.hpp"
#include "trackpoly/numeric.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trackpoly {

enum class OutputFormat { Text, Structured };

/// Exit codes: checks passed, input rejected, identity failed.
enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 1, kExitInternal = 2 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  OutputFormat format = OutputFormat::Text;
  Rational tol = Rational(1) / 1000000;
  std::size_t max_word_len = kDefaultWordCap;
  /// Warnings (for example a reducible transition matrix) fail the run.
  bool strict = false;
  unsigned power = 1;
  std::string out_dir = ".";
  std::optional<std::string> loop;
  std::uint64_t seed = 0;
  std::string fixture_dir;
};

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Writes <stem>.op.tt and <stem>.or.tt into config.out_dir.
int cmd_cover(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_power(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_restrict(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_selftest(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments and dispatches. Usage errors exit with 1.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trackpoly
