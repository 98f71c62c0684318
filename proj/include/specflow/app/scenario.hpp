// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "specflow/app/schema.hpp"
#include "specflow/continued_fraction.hpp"
#include "specflow/roof.hpp"

namespace specflow::app {

inline constexpr int kDefaultDepth = 60;
inline constexpr int kDefaultPrecisionBits = 128;

/// SPECFLOW_PRECISION_BITS, or 128 when unset. Throws ValidationError outside [32, 128].
int precision_bits_from_env();
int parse_precision_bits(const std::string& text);

/// Parses and schema-validates a scenario document. Throws ValidationError listing every violation.
json parse_scenario(const std::string& text);
json load_scenario(const std::filesystem::path& path);

ContinuedFraction alpha_from_scenario(const json& scenario, int precision_bits);

/// Explicit roofs ({constant, jumps, ac, tail_bound}) and generated ones.
RoofFunction roof_from_json(const json& spec, const ContinuedFraction& alpha);

/// constant + sum_{i=1..terms} first * ratio^(i-1) {x - i/(2 terms + 1)}, with the remaining
/// geometric tail as tail_bound.
RoofFunction geometric_roof(int terms, double ratio, double first, double constant);

}  // namespace specflow::app
