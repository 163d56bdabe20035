#ifndef SGJMS_TOOLS_CLI_HPP_
#define SGJMS_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgjms/serialization.hpp"

namespace sgjms::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInconsistent = 4;

/// Every field a subcommand may read. Negative numbers mean "command default".
struct RunConfig {
  std::string command;
  std::string m = "1";  // lists allowed for sweep
  std::string n = "3";
  std::string p;        // list or lo:hi:count for sharp-constant and sweep
  std::string f;        // "a1:p1,a2:p2"
  std::string init = "constant";  // solve: constant | perturbed | bubble:<lambda>
  int K = -1;
  int Q = -1;
  int starts = -1;
  std::uint64_t seed = 1;
  double tol = -1.0;
  std::string out;
  std::string format = "json";
};

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  bool consistency = false;  // failure means a broken identity, not a numerical miss
};

struct Report {
  std::string command;
  Json inputs;
  Json tolerances;
  Json results;
  std::vector<Check> checks;
  CsvTable table;
  Json provenance;
  double wall_time = 0.0;

  int exit_code() const;
  /// Deterministic apart from provenance.wall_time_s.
  Json to_json() const;
};

/// Parses a number list "a,b,c" or a range "lo:hi:count". Empty text gives an empty list.
std::vector<double> parse_grid(const std::string& text, const std::string& field);

/// Validates `cfg` (DomainError with the offending field) and runs the command.
Report execute(const RunConfig& cfg);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgjms::cli

#endif  // SGJMS_TOOLS_CLI_HPP_
