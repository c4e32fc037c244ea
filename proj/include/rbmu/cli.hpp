#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbmu/linalg.hpp"
#include "rbmu/reduction.hpp"

namespace rbmu {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verify_failed = 1;
inline constexpr int input_error = 2;
inline constexpr int numeric_failure = 3;
}  // namespace exit_code

struct RunConfig {
  std::string command;  // mu, backward-error, sweep, verify, oracle
  std::string input_path;
  std::string certificate_path;  // verify only
  std::vector<Complex> lambdas;
  Scenario scenario = Scenario::full();
  std::optional<BlockStructure> structure;
  std::uint64_t seed = 20240917;
  int starts = 8;
  double tol = 1e-8;
  long budget = 5000;
  bool json = false;
  std::string output_path;
};

/// Parses arguments (without the program name) and runs the command.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace rbmu
