#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli_config.hpp"

namespace caslayer::cli {

// One output row.  For sweeps, `label` is the swept value (printed exactly
// as configured); for identity checks it is the identity's name; for a
// single run it is empty.
struct ResultRow {
  std::string label;
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t terms = 0;
  std::size_t evaluations = 0;
  double wall_ms = 0.0;
  std::string status = "ok";  // ok | partial | skipped | failed
  std::string message;        // diagnostic for non-ok rows (stderr only)
  bool has_value = true;
};

struct RunOutcome {
  std::vector<ResultRow> rows;
  int exit_code = kExitOk;
};

struct RunOptions {
  unsigned threads = 1;
  bool si_units = false;
};

// Execute the configured computation (sweep-aware) and return the rows.
// Sweep points are validated up front: a config that becomes invalid at any
// sweep value aborts with ConfigValidationError before anything runs.
RunOutcome run(const RunConfig& config, const RunOptions& options);

// Serialize rows in the configured delimited format, including the
// commented header block (config hash, library and schema versions).  The
// wall_ms column is environmental; every other byte is deterministic for a
// fixed config.
void write_table(std::ostream& os, const RunConfig& config,
                 const RunOptions& options, const RunOutcome& outcome);

}  // namespace caslayer::cli
