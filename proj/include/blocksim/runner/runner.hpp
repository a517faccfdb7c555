// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "blocksim/config/run_config.hpp"

namespace blocksim::runner {

// Process exit codes. Config problems and data problems are distinct so a
// caller can tell a bad experiment description from a bad measurement file;
// invariant failures mean the simulator itself caught an impossibility and
// dumped its recent event trace next to the artifacts.
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_data_error = 3,
  exit_invariant = 4,
};

// Runs one simulation or the whole method-by-size grid, per cfg.grid.
// Artifacts land under cfg.out_dir; progress goes to `out`, diagnostics to
// `err`. Returns an ExitCode value.
int execute(config::RunConfig cfg, std::ostream& out, std::ostream& err);

}  // namespace blocksim::runner
