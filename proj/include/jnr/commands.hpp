#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "jnr/error.hpp"

namespace jnr {

inline constexpr const char* kVersion = "1.0.0";
/// Certified chord-to-apex bound (times scale) for n = 2 verification.
inline constexpr double kPlanarRefinement = 1e-7;

struct RunConfig {
  std::string subcommand;
  std::optional<std::string> input;
  std::optional<std::string> builtin;
  std::optional<int> trace_grid;
  std::optional<int> test_grid;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::optional<std::string> format;
  std::optional<std::string> out;
  bool advisory = false;
  bool refine = true;  // n = 2 verify: bisect until the gap bound holds
  std::optional<std::string> candidates;  // "y1,y2,y3;..." or bare y1 values
  std::optional<double> radius;
  int max_degree = 4;
};

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int verify_fail = 1;
inline constexpr int parse = 2;
inline constexpr int validation = 3;
inline constexpr int dimension = 4;
inline constexpr int unsupported = 5;
inline constexpr int fit_failure = 6;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

/// Runs one subcommand; reports go to --out or `out`, diagnostics to `err`.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_charpoly(const RunConfig& config, std::ostream& out);
int cmd_trace(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_dual_fit(const RunConfig& config, std::ostream& out);
int cmd_central(const RunConfig& config, std::ostream& out);
int cmd_four_ellipses(const RunConfig& config, std::ostream& out);

}  // namespace jnr
