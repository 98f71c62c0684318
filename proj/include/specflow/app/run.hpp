// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specflow/app/io.hpp"
#include "specflow/app/schema.hpp"

namespace specflow::app {

struct RunOutcome {
    int exit_code = kExitOk;
    json report;                    ///< null unless exit code is 0 or a reported falsification
    std::vector<OutputFile> files;  ///< report.json and CSVs, empty on failure
    std::string message;
};

/// Runs one validated scenario entirely in memory. Library errors map to exit codes;
/// nothing is produced for codes 2, 3 and 4.
RunOutcome run_experiment(const json& scenario, int precision_bits);

/// output.path, resolved against the scenario's directory unless absolute; `override_dir` wins.
std::filesystem::path resolve_output_dir(const json& scenario, const std::filesystem::path& scenario_path,
                                         const std::optional<std::filesystem::path>& override_dir);

/// Loads, runs and writes one scenario file. Returns the exit code.
int run_scenario_file(const std::filesystem::path& path, const std::optional<std::filesystem::path>& out_dir,
                      int precision_bits, std::ostream& log);

/// Runs every *.json in `dir` (sorted by name) with at most `jobs` concurrent scenarios.
/// With `out_root`, scenario <stem>.json writes to out_root/<stem>. Returns the largest exit code.
int run_suite(const std::filesystem::path& dir, unsigned jobs, const std::optional<std::filesystem::path>& out_root,
              int precision_bits, std::ostream& log);

}  // namespace specflow::app
