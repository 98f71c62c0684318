// SPDX-License-Identifier: Apache-2.0
#include "specflow/app/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "experiments.hpp"
#include "specflow/app/scenario.hpp"
#include "specflow/errors.hpp"
#include "specflow/philox.hpp"

namespace specflow::app {

namespace fs = std::filesystem;

namespace {

json compute(const json& scenario, int bits, std::vector<OutputFile>& csv, json& events, double& max_error) {
    json depth_adjusted = scenario;
    depth_adjusted["depth"] = detail::required_depth(scenario);
    const ContinuedFraction alpha = alpha_from_scenario(depth_adjusted, bits);
    const RoofFunction f = roof_from_json(scenario.at("roof_spec"), alpha);
    const std::string format = scenario.at("output").at("format").get<std::string>();

    detail::Context ctx(scenario, alpha, f);
    ctx.seed = scenario.at("seed").get<std::uint64_t>();
    ctx.want_csv = format != "json";

    static const std::map<std::string, json (*)(detail::Context&)> dispatch = {
        {"cf", detail::run_cf},           {"gaps", detail::run_gaps},
        {"birkhoff", detail::run_birkhoff}, {"dk", detail::run_dk},
        {"ratner", detail::run_ratner},   {"mixing", detail::run_mixing},
        {"rigidity", detail::run_rigidity}, {"distribution", detail::run_distribution},
        {"stability", detail::run_stability},
    };
    json results = dispatch.at(scenario.at("experiment").get<std::string>())(ctx);
    csv = std::move(ctx.csv);
    events = std::move(ctx.events);
    max_error = ctx.max_error;
    return results;
}

}  // namespace

RunOutcome run_experiment(const json& scenario, int precision_bits) {
    RunOutcome out;
    std::vector<OutputFile> csv;
    json events = json::array();
    double max_error = 0;
    json results;
    try {
        results = compute(scenario, precision_bits, csv, events, max_error);
    } catch (const ValidationError& e) {
        out.exit_code = kExitSchema;
        out.message = std::string("invalid input: ") + e.what();
        return out;
    } catch (const json::exception& e) {
        out.exit_code = kExitSchema;
        out.message = std::string("invalid input: ") + e.what();
        return out;
    } catch (const PrecisionError& e) {
        out.exit_code = kExitPrecision;
        out.message = std::string("precision exhausted: ") + e.what();
        return out;
    } catch (const HypothesisError& e) {
        out.exit_code = kExitHypothesis;
        out.message = std::string("hypothesis fails: ") + e.what();
        return out;
    } catch (const ConsistencyError& e) {
        out.exit_code = kExitFalsification;
        out.message = std::string("FALSIFICATION: consistency check failed: ") + e.what();
        return out;
    }

    const bool falsified = !events.empty();
    out.report = {{"version", SPECFLOW_VERSION},
                  {"experiment", scenario.at("experiment")},
                  {"scenario", scenario},
                  {"rng", {{"algorithm", Philox4x32::kAlgorithm}, {"seed", scenario.at("seed")}}},
                  {"precision", {{"bits", precision_bits}, {"max_error_bound", max_error}}},
                  {"status", falsified ? "falsification" : "ok"},
                  {"falsification_events", events},
                  {"results", std::move(results)}};

    static const SchemaValidator validator(report_schema());
    if (auto errs = validator.validate(out.report); !errs.empty())
        throw std::logic_error("report violates its schema: " + errs.front());

    const std::string format = scenario.at("output").at("format").get<std::string>();
    if (format != "csv") out.files.push_back({"report.json", out.report.dump(2) + "\n"});
    for (auto& f : csv) out.files.push_back(std::move(f));
    if (falsified) {
        out.exit_code = kExitFalsification;
        out.message = "FALSIFICATION: " + std::to_string(events.size()) + " event(s); first: " +
                      events.front().at("detail").get<std::string>();
    }
    return out;
}

fs::path resolve_output_dir(const json& scenario, const fs::path& scenario_path,
                            const std::optional<fs::path>& override_dir) {
    if (override_dir) return *override_dir;
    fs::path p = scenario.at("output").at("path").get<std::string>();
    if (p.is_absolute()) return p;
    return scenario_path.parent_path() / p;
}

int run_scenario_file(const fs::path& path, const std::optional<fs::path>& out_dir, int precision_bits,
                      std::ostream& log) {
    json scenario;
    try {
        scenario = load_scenario(path);
    } catch (const ValidationError& e) {
        log << path.string() << ": " << e.what() << "\n";
        return kExitSchema;
    }
    const auto start = std::chrono::steady_clock::now();
    RunOutcome r = run_experiment(scenario, precision_bits);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.message.empty()) log << path.string() << ": " << r.message << "\n";
    if (r.files.empty()) return r.exit_code;

    const fs::path dir = resolve_output_dir(scenario, path, out_dir);
    try {
        for (const auto& f : r.files) write_atomic(dir / f.name, f.content);
    } catch (const std::exception& e) {
        log << path.string() << ": " << e.what() << "\n";
        return std::max<int>(r.exit_code, kExitIo);
    }
    log << path.string() << ": " << scenario.at("experiment").get<std::string>() << " -> " << dir.string()
        << " (exit " << r.exit_code << ", " << secs << " s)\n";
    return r.exit_code;
}

int run_suite(const fs::path& dir, unsigned jobs, const std::optional<fs::path>& out_root, int precision_bits,
              std::ostream& log) {
    std::vector<fs::path> paths;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
    if (ec) {
        log << dir.string() << ": " << ec.message() << "\n";
        return kExitSchema;
    }
    std::sort(paths.begin(), paths.end());

    if (!out_root) {
        // Two scenarios sharing an output directory would race on the same files.
        std::set<fs::path> seen;
        for (const auto& p : paths) {
            try {
                auto target = fs::weakly_canonical(resolve_output_dir(load_scenario(p), p, std::nullopt));
                if (!seen.insert(target).second) {
                    log << p.string() << ": output path " << target.string() << " is shared with another scenario\n";
                    return kExitSchema;
                }
            } catch (const ValidationError&) {
                // reported when the scenario runs
            }
        }
    }

    std::vector<int> codes(paths.size(), 0);
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) {
            std::optional<fs::path> out;
            if (out_root) out = *out_root / paths[i].stem();
            std::ostringstream local;
            codes[i] = run_scenario_file(paths[i], out, precision_bits, local);
            std::lock_guard lock(log_mutex);
            log << local.str() << std::flush;
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(paths.size(), 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int worst = 0;
    for (int c : codes) worst = std::max(worst, c);
    log << paths.size() << " scenario(s), exit " << worst << "\n";
    return worst;
}

}  // namespace specflow::app
