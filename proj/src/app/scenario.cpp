// SPDX-License-Identifier: Apache-2.0
#include "specflow/app/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "specflow/app/io.hpp"
#include "specflow/errors.hpp"
#include "specflow/jump_combinatorics.hpp"

namespace specflow::app {

int parse_precision_bits(const std::string& text) {
    int bits = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), bits);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ValidationError("SPECFLOW_PRECISION_BITS must be an integer, got \"" + text + "\"");
    if (bits < 32 || bits > 128)
        throw ValidationError("SPECFLOW_PRECISION_BITS must lie in [32, 128], got " + text);
    return bits;
}

int precision_bits_from_env() {
    const char* v = std::getenv("SPECFLOW_PRECISION_BITS");
    if (!v) return kDefaultPrecisionBits;
    return parse_precision_bits(v);
}

json parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    static const SchemaValidator validator(scenario_schema());
    auto errs = validator.validate(doc);
    if (!errs.empty()) {
        std::string msg = "scenario violates the schema:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    return doc;
}

json load_scenario(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    return parse_scenario(text);
}

ContinuedFraction alpha_from_scenario(const json& scenario, int precision_bits) {
    const int depth = scenario.value("depth", kDefaultDepth);
    return ContinuedFraction::expand(QuadraticIrrational::parse(scenario.at("alpha_spec").get<std::string>()), depth,
                                     precision_bits);
}

namespace {

std::int64_t parse_int(std::string_view s, const std::string& context) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError("bad integer in " + context);
    return v;
}

Jump jump_from_json(const json& j) {
    const std::string beta = j.at("beta").get<std::string>();
    const double d = j.at("d").get<double>();
    if (auto slash = beta.find('/'); slash != std::string::npos) {
        std::int64_t num = parse_int(std::string_view(beta).substr(0, slash), "beta " + beta);
        std::int64_t den = parse_int(std::string_view(beta).substr(slash + 1), "beta " + beta);
        if (den <= 0) throw ValidationError("beta " + beta + " needs a positive denominator");
        return Jump::at_rational(num, den, d);
    }
    Jump out = Jump::at(CirclePoint::parse(beta), d);
    out.beta_text = beta;
    return out;
}

ACComponent ac_from_json(const json& a) {
    const std::string kind = a.at("kind").get<std::string>();
    if (kind == "tent")
        return ACComponent::tent(a.at("amplitude").get<double>(), a.at("center").get<double>(),
                                 a.at("half_width").get<double>());
    if (kind == "sine_like") return ACComponent::sine_like(a.at("amplitude").get<double>(), a.at("k").get<int>());
    return ACComponent(a.at("breakpoints").get<std::vector<double>>(),
                       a.at("coefficients").get<std::vector<std::vector<double>>>());
}

}  // namespace

RoofFunction geometric_roof(int terms, double ratio, double first, double constant) {
    if (terms < 1) throw ValidationError("geometric roof needs at least one term");
    if (!(ratio > 0 && ratio < 1) || !(first > 0)) throw ValidationError("geometric roof needs 0 < ratio < 1, first > 0");
    std::vector<Jump> jumps;
    double d = first;
    for (int i = 1; i <= terms; ++i) {
        jumps.push_back(Jump::at_rational(i, 2 * terms + 1, d));
        d *= ratio;
    }
    return RoofFunction(constant, std::move(jumps), {}, d / (1.0 - ratio));
}

RoofFunction roof_from_json(const json& spec, const ContinuedFraction& alpha) {
    if (spec.contains("generator")) {
        const std::string gen = spec.at("generator").get<std::string>();
        const double constant = spec.value("constant", 1.0);
        if (gen == "geometric")
            return geometric_roof(spec.value("terms", 50), spec.value("ratio", 0.5), spec.value("first", 0.45),
                                  constant);
        return build_noncohomologous_example(alpha, spec.value("base", 0.5), spec.value("terms", 6), {}, constant).f;
    }
    std::vector<Jump> jumps;
    if (spec.contains("jumps"))
        for (const auto& j : spec.at("jumps")) jumps.push_back(jump_from_json(j));
    ACComponent ac;
    if (spec.contains("ac")) ac = ac_from_json(spec.at("ac"));
    return RoofFunction(spec.at("constant").get<double>(), std::move(jumps), std::move(ac),
                        spec.value("tail_bound", 0.0));
}

}  // namespace specflow::app
