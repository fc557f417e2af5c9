// SPDX-License-Identifier: Apache-2.0
//
// Self-verification batches run by `persuade verify <suite>`.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace persuasion {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double expected = 0.0;
    std::string detail;
};

/// no_garbling, two_atom, closed_forms, comparative_statics.
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Runs one suite; throws InvalidArgument for an unknown name.
[[nodiscard]] std::vector<CheckResult> run_suite(std::string_view name, std::uint64_t seed,
                                                 unsigned workers = 0);

}  // namespace persuasion
