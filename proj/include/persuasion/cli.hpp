// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end:
//
//   persuade simulate        --config PATH [--out-dir DIR] [--seed-override U64]
//   persuade solve           --config PATH [--out-dir DIR]
//   persuade sweep-convexity --config PATH [--out-dir DIR]
//   persuade sweep-snr       --config PATH [--out-dir DIR]
//   persuade verify SUITE    [--config PATH] [--seed-override U64]
//
// Exit codes: 0 ok, 2 config, 3 simulation, 4 cost model, 5 verification
// failure. Errors print one line starting with "ERR:" on the error stream.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace persuasion {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitSimulation = 3,
    kExitCostModel = 4,
    kExitVerification = 5,
};

/// args excludes the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out,
                          std::ostream& err);

}  // namespace persuasion
