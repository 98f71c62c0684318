// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace specflow::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitSchema = 2,
    kExitPrecision = 3,
    kExitHypothesis = 4,
    kExitFalsification = 5,
};

struct OutputFile {
    std::string name;  ///< relative to the output directory
    std::string content;
};

/// "%.17g", which round-trips every finite double.
std::string format_double(double v);

/// Minimal CSV writer; every row must have the header's width.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    Csv& row(std::vector<std::string> cells);
    std::string str() const;

private:
    std::size_t width_;
    std::string out_;
};

/// Writes via a sibling temp file and rename(2), creating parent directories.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace specflow::app
