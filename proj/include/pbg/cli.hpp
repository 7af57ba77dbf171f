#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pbg/model.hpp"
#include "pbg/simulator.hpp"
#include "pbg/table.hpp"

namespace pbg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;       // malformed or unknown flags
inline constexpr int kExitValidation = 3;  // well-formed values violating invariants
inline constexpr int kExitRuntime = 4;     // solver or simulation failure

enum class Command { Solve, Simulate, Sweep, Cmf };
enum class OutputFormat { Csv, Json };

struct RunSpec {
  Command command = Command::Solve;
  PhysicalConfig physical;
  AgeRounding rounding = AgeRounding::Ceil;
  std::optional<double> gen_prob;
  double from_km = 4.0;
  double to_km = 30.0;
  double step_km = 2.0;
  std::uint64_t slots = 2'000'000;  // recorded slots
  std::uint64_t warmup = 100'000;
  std::uint64_t seed = 1;
  PolicyKind policy = PolicyKind::PurifyBeyondGeneration;
  OutputFormat format = OutputFormat::Csv;
  std::string output;  // empty = standard output
  int threads = 1;
};

struct ParseOutcome {
  std::optional<RunSpec> spec;
  int exit_code = kExitOk;
  std::vector<std::string> diagnostics;  // one line each
  std::string help;                      // set when --help was requested
};

ParseOutcome parse_args(int argc, const char* const* argv);

/// One message per violated invariant.
std::vector<std::string> validate(const RunSpec& spec);

/// Computes the table for `spec`. Throws on failure; nothing is emitted.
Table build_table(const RunSpec& spec);

nlohmann::ordered_json echo_spec(const RunSpec& spec);

/// Builds and writes the table (to spec.output or `out`); returns an exit code.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// parse_args + run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pbg::cli
