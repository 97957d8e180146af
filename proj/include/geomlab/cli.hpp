#pragma once

// Command-line orchestration: gen, embed, check, certify, discretize, count
// and audit.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "geomlab/discretize.hpp"
#include "geomlab/io.hpp"
#include "geomlab/obstruct.hpp"

namespace geomlab {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t n = 64;
  std::size_t delta = 3;
  std::size_t d = 2;
  std::string space = "lp:2";
  Params params;
  double c_naor = kDefaultNaorConstant;
  std::size_t trials = 0;
  std::string out;
  unsigned threads = 1;

  // Subcommand options.
  std::string model = "regular";
  std::size_t m = 0;
  std::string method = "landmark";
  std::string graph_file;
  std::string tuple_file;
  std::size_t iters = 2000;
  std::size_t restarts = 8;
  double p = 1.0;
  bool exact = false;
  std::string mode = "standard";
  std::optional<std::uint64_t> marked;
  std::size_t stress_limit = 256;
};

/// Constants and identity of a run, embedded in every report.
Json config_to_json(const ExperimentConfig& config);

/// Runs one subcommand. Writes the primary document to `out` (or to files
/// under config.out when set). Throws PreconditionError / BudgetExhausted.
void run(const ExperimentConfig& config, const std::string& subcommand, std::ostream& out);

/// Parses argv and runs. Returns the process exit code: 0 on success, 2 on
/// precondition failures, 3 when a budget or retry limit is exhausted, 1 on
/// other errors. Errors are reported as JSON on `err`.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace geomlab
