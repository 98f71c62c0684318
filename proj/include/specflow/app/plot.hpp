// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "specflow/app/io.hpp"
#include "specflow/app/schema.hpp"

namespace specflow::app {

/// Kinds and the experiment each one reads.
inline const std::vector<std::pair<std::string, std::string>> kPlotKinds = {
    {"drift", "ratner"}, {"mixing", "mixing"}, {"rigidity", "rigidity"}, {"dk", "dk"}, {"distribution", "distribution"},
};

/// Gnuplot-ready whitespace-separated data files. Throws ValidationError when the report
/// does not carry the experiment `kind` needs. A drift plot recomputes g(n) for the
/// first successful pair (or `pair_index`) from the scenario echo.
std::vector<OutputFile> plot_data(const json& report, const std::string& kind, long pair_index = -1);

}  // namespace specflow::app
