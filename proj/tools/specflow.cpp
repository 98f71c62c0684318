// SPDX-License-Identifier: Apache-2.0
// specflow: run scenarios, suites of scenarios, and emit plot data from reports.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "specflow/app/plot.hpp"
#include "specflow/app/run.hpp"
#include "specflow/app/scenario.hpp"
#include "specflow/errors.hpp"

namespace fs = std::filesystem;
using namespace specflow::app;

namespace {

int plot_command(const fs::path& report_path, const std::string& kind, const std::optional<fs::path>& out,
                 long pair) {
    json report;
    try {
        report = json::parse(read_file(report_path));
    } catch (const std::exception& e) {
        std::cerr << report_path.string() << ": " << e.what() << "\n";
        return kExitSchema;
    }
    const SchemaValidator validator(report_schema());
    if (auto errs = validator.validate(report); !errs.empty()) {
        std::cerr << report_path.string() << ": not a valid report: " << errs.front() << "\n";
        return kExitSchema;
    }
    std::vector<OutputFile> files;
    try {
        files = plot_data(report, kind, pair);
    } catch (const specflow::ValidationError& e) {
        std::cerr << "plot: " << e.what() << "\n";
        return kExitSchema;
    } catch (const specflow::PrecisionError& e) {
        std::cerr << "plot: " << e.what() << "\n";
        return kExitPrecision;
    }
    const fs::path dir = out ? *out : report_path.parent_path();
    for (const auto& f : files) {
        write_atomic(dir / f.name, f.content);
        std::cout << (dir / f.name).string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"specflow: special-flow experiment runner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SPECFLOW_VERSION);

    std::string scenario_path, out_dir;
    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run->add_option("--out", out_dir, "Write outputs here instead of the scenario's output.path");

    std::string suite_dir, out_root;
    unsigned jobs = 1;
    auto* suite = app.add_subcommand("suite", "Run every scenario in a directory");
    suite->add_option("dir", suite_dir, "Directory of scenario JSON files")->required();
    suite->add_option("--jobs,-j", jobs, "Concurrent scenarios")->check(CLI::Range(1u, 256u));
    suite->add_option("--out-root", out_root, "Write scenario <stem> outputs to <out-root>/<stem>");

    std::string report_path, kind, plot_out;
    long pair = -1;
    auto* plot = app.add_subcommand("plot", "Emit gnuplot data files from a report");
    plot->add_option("report", report_path, "report.json")->required();
    std::vector<std::string> kinds;
    for (const auto& k : kPlotKinds) kinds.push_back(k.first);
    plot->add_option("--kind", kind, "Plot kind")->required()->check(CLI::IsMember(kinds));
    plot->add_option("--out", plot_out, "Output directory (default: next to the report)");
    plot->add_option("--pair", pair, "Drift plot: pair index instead of the first success");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitSchema;
    }

    if (*plot) return plot_command(report_path, kind, plot_out.empty() ? std::nullopt : std::optional<fs::path>(plot_out),
                                   pair);

    int bits = 0;
    try {
        bits = precision_bits_from_env();
    } catch (const specflow::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitSchema;
    }
    if (*run)
        return run_scenario_file(scenario_path, out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir),
                                 bits, std::cerr);
    return run_suite(suite_dir, jobs, out_root.empty() ? std::nullopt : std::optional<fs::path>(out_root), bits,
                     std::cerr);
}
