// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specflow/app/io.hpp"
#include "specflow/app/schema.hpp"
#include "specflow/continued_fraction.hpp"
#include "specflow/roof.hpp"

namespace specflow::app::detail {

struct Context {
    Context(const json& sc, const ContinuedFraction& a, const RoofFunction& roof)
        : scenario(sc), params(sc.at("params")), alpha(a), f(roof) {}

    const json& scenario;
    const json& params;
    const ContinuedFraction& alpha;
    const RoofFunction& f;
    std::uint64_t seed = 0;
    bool want_csv = false;

    json events = json::array();
    double max_error = 0;
    std::vector<OutputFile> csv;

    void event(const std::string& kind, const std::string& detail) {
        events.push_back({{"kind", kind}, {"detail", detail}});
    }
    void error(double e) {
        if (e > max_error) max_error = e;
    }
    void add_csv(std::string name, const Csv& table) {
        if (want_csv) csv.push_back({std::move(name), table.str()});
    }
};

json run_cf(Context& ctx);
json run_gaps(Context& ctx);
json run_birkhoff(Context& ctx);
json run_dk(Context& ctx);
json run_ratner(Context& ctx);
json run_mixing(Context& ctx);
json run_rigidity(Context& ctx);
json run_distribution(Context& ctx);
json run_stability(Context& ctx);

/// Depth an experiment needs beyond the scenario's own setting.
int required_depth(const json& scenario);

}  // namespace specflow::app::detail
