// SPDX-License-Identifier: Apache-2.0
#include "specflow/app/plot.hpp"

#include <map>

#include "experiments.hpp"
#include "specflow/app/scenario.hpp"
#include "specflow/errors.hpp"
#include "specflow/ratner.hpp"

namespace specflow::app {

namespace {

std::string num(double v) { return format_double(v); }

std::vector<OutputFile> drift(const json& report, long pair_index) {
    const json& res = report.at("results");
    const double eps = res.at("params").at("epsilon").get<double>();
    std::string text = "# drift trace g(n) = f^(n)(y) - f^(n)(x)\n";
    const json* pair = nullptr;
    for (const auto& p : res.at("pairs")) {
        const bool pick = pair_index < 0 ? p.at("success").get<bool>() : p.at("index").get<long>() == pair_index;
        if (pick) {
            pair = &p;
            break;
        }
    }
    if (!pair) {
        text += "# epsilon " + num(eps) + "\n# no matching pair\n# n g\n";
        return {{"plot_drift.dat", text}};
    }

    const json& scenario = report.at("scenario");
    json sc = scenario;
    sc["depth"] = detail::required_depth(scenario);
    const ContinuedFraction alpha = alpha_from_scenario(sc, report.at("precision").at("bits").get<int>());
    const RoofFunction f = roof_from_json(scenario.at("roof_spec"), alpha);
    CirclePoint x = CirclePoint::parse(pair->at("x").get<std::string>());
    CirclePoint y = CirclePoint::parse(pair->at("y").get<std::string>());
    if (arc_length(x, y) > 0.5L) std::swap(x, y);

    const auto M = pair->at("M").get<std::int64_t>(), L = pair->at("L").get<std::int64_t>();
    const double rho = pair->at("rho").get<double>();
    const std::int64_t n_max = M + L + std::max<std::int64_t>(L / 4, 10);
    const auto g = drift_trace(f, alpha.alpha(), x, y, n_max);

    text += "# pair " + std::to_string(pair->at("index").get<long>()) + "\n";
    text += "# x " + x.to_decimal() + "\n# y " + y.to_decimal() + "\n";
    text += "# rho " + num(rho) + "\n# epsilon " + num(eps) + "\n";
    text += "# band " + num(rho - eps) + " " + num(rho + eps) + "\n";
    text += "# J " + std::to_string(M) + " " + std::to_string(M + L) + "\n# n g\n";
    for (std::size_t n = 0; n < g.size(); ++n) text += std::to_string(n) + " " + num(g[n]) + "\n";
    return {{"plot_drift.dat", text}};
}

std::vector<OutputFile> mixing(const json& res) {
    std::map<std::int64_t, std::string> per_q;
    for (const auto& pt : res.at("grid")) {
        auto& t = per_q[pt.at("q").get<std::int64_t>()];
        t += num(pt.at("r").get<double>()) + " " + num(pt.at("magnitude").get<double>()) + " " +
             num(pt.at("bound").get<double>()) + "\n";
    }
    if (per_q.empty()) return {{"plot_mixing.dat", "# r |I_{r,q}| bound\n"}};
    std::vector<OutputFile> out;
    for (const auto& [q, body] : per_q)
        out.push_back({"plot_mixing_q" + std::to_string(q) + ".dat",
                       "# q " + std::to_string(q) + "\n# r |I_{r,q}| bound\n" + body});
    return out;
}

std::vector<OutputFile> rigidity(const json& res) {
    std::string text = "# epsilon " + num(res.at("epsilon").get<double>()) + "\n# threshold " +
                       num(res.at("threshold").get<double>()) + "\n# t mass injected\n";
    for (const auto& p : res.at("profile"))
        text += num(p.at("t").get<double>()) + " " + num(p.at("mass").get<double>()) + " " +
                (p.at("injected").get<bool>() ? "1" : "0") + "\n";
    return {{"plot_rigidity.dat", text}};
}

std::vector<OutputFile> dk(const json& res) {
    const double var = res.at("variation").get<double>();
    std::string text = "# n q max_residual variation\n";
    for (const auto& r : res.at("rows"))
        text += std::to_string(r.at("n").get<int>()) + " " + std::to_string(r.at("q").get<std::uint64_t>()) + " " +
                num(r.at("max_residual").get<double>()) + " " + num(var) + "\n";
    return {{"plot_dk.dat", text}};
}

std::vector<OutputFile> distribution(const json& res) {
    const double tau = res.at("tau").get<double>();
    std::vector<OutputFile> out;
    for (const auto& h : res.at("histograms")) {
        const int n = h.at("n").get<int>();
        const double w = h.at("bin_width").get<double>(), left = h.at("first_left").get<double>();
        std::string text = "# n " + std::to_string(n) + "\n# q " + std::to_string(h.at("q").get<std::uint64_t>()) +
                           "\n# tau " + num(tau) + "\n# center mass\n";
        const auto& mass = h.at("mass");
        for (std::size_t b = 0; b < mass.size(); ++b)
            text += num(left + (static_cast<double>(b) + 0.5) * w) + " " + num(mass[b].get<double>()) + "\n";
        out.push_back({"plot_distribution_n" + std::to_string(n) + ".dat", text});
    }
    if (out.empty()) out.push_back({"plot_distribution.dat", "# center mass\n"});
    return out;
}

}  // namespace

std::vector<OutputFile> plot_data(const json& report, const std::string& kind, long pair_index) {
    std::string expected;
    for (const auto& [k, e] : kPlotKinds)
        if (k == kind) expected = e;
    if (expected.empty()) throw ValidationError("unknown plot kind \"" + kind + "\"");
    if (!report.is_object() || !report.contains("experiment") || !report.contains("results"))
        throw ValidationError("not a specflow report");
    const std::string experiment = report.at("experiment").get<std::string>();
    if (experiment != expected)
        throw ValidationError("plot kind \"" + kind + "\" needs a " + expected + " report, got " + experiment);
    const json& res = report.at("results");
    if (kind == "drift") return drift(report, pair_index);
    if (kind == "mixing") return mixing(res);
    if (kind == "rigidity") return rigidity(res);
    if (kind == "dk") return dk(res);
    return distribution(res);
}

}  // namespace specflow::app
