// SPDX-License-Identifier: Apache-2.0
#include "specflow/app/schema.hpp"

#include <cmath>

#include "specflow/app/embedded_schemas.hpp"
#include "specflow/errors.hpp"

namespace specflow::app {

namespace {

bool has_type(const json& inst, const std::string& t) {
    if (t == "object") return inst.is_object();
    if (t == "array") return inst.is_array();
    if (t == "string") return inst.is_string();
    if (t == "boolean") return inst.is_boolean();
    if (t == "null") return inst.is_null();
    if (t == "number") return inst.is_number();
    if (t == "integer") {
        if (inst.is_number_integer()) return true;
        if (!inst.is_number_float()) return false;
        double v = inst.get<double>();
        return std::isfinite(v) && std::floor(v) == v;
    }
    return false;
}

std::string short_dump(const json& j) {
    std::string s = j.dump();
    return s.size() > 60 ? s.substr(0, 57) + "..." : s;
}

// JSON equality with 1 == 1.0, as schema const/enum require.
bool same(const json& a, const json& b) {
    if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
    return a == b;
}

bool mentions_const_failure(const std::vector<std::string>& errs) {
    for (const auto& e : errs)
        if (e.find("expected constant") != std::string::npos) return true;
    return false;
}

}  // namespace

SchemaValidator::SchemaValidator(json schema) : root_(std::move(schema)) {}

std::vector<std::string> SchemaValidator::validate(const json& instance) const {
    std::vector<std::string> errs;
    check(root_, instance, "", errs, 0);
    return errs;
}

const json& SchemaValidator::resolve(const std::string& ref) const {
    if (ref.empty() || ref[0] != '#') throw ValidationError("unsupported $ref " + ref);
    try {
        return root_.at(json::json_pointer(ref.substr(1)));
    } catch (const json::exception&) {
        throw ValidationError("unresolvable $ref " + ref);
    }
}

void SchemaValidator::check(const json& s, const json& inst, const std::string& where, std::vector<std::string>& errs,
                            int depth) const {
    if (depth > 64) throw ValidationError("schema recursion too deep at " + where);
    if (s.is_boolean()) {
        if (!s.get<bool>()) errs.push_back(where + ": not allowed");
        return;
    }
    const std::string at = where.empty() ? "/" : where;

    if (auto it = s.find("$ref"); it != s.end()) check(resolve(it->get<std::string>()), inst, where, errs, depth + 1);

    if (auto it = s.find("type"); it != s.end()) {
        bool ok = false;
        if (it->is_string()) ok = has_type(inst, it->get<std::string>());
        else
            for (const auto& t : *it) ok = ok || has_type(inst, t.get<std::string>());
        if (!ok) {
            errs.push_back(at + ": expected type " + it->dump() + ", got " + short_dump(inst));
            return;
        }
    }
    if (auto it = s.find("const"); it != s.end() && !same(*it, inst))
        errs.push_back(at + ": expected constant " + it->dump() + ", got " + short_dump(inst));
    if (auto it = s.find("enum"); it != s.end()) {
        bool ok = false;
        for (const auto& v : *it) ok = ok || same(v, inst);
        if (!ok) errs.push_back(at + ": " + short_dump(inst) + " is not one of " + it->dump());
    }

    if (inst.is_number()) {
        const double v = inst.get<double>();
        if (auto it = s.find("minimum"); it != s.end() && v < it->get<double>())
            errs.push_back(at + ": " + short_dump(inst) + " < minimum " + it->dump());
        if (auto it = s.find("maximum"); it != s.end() && v > it->get<double>())
            errs.push_back(at + ": " + short_dump(inst) + " > maximum " + it->dump());
        if (auto it = s.find("exclusiveMinimum"); it != s.end() && v <= it->get<double>())
            errs.push_back(at + ": " + short_dump(inst) + " must be > " + it->dump());
        if (auto it = s.find("exclusiveMaximum"); it != s.end() && v >= it->get<double>())
            errs.push_back(at + ": " + short_dump(inst) + " must be < " + it->dump());
    }
    if (inst.is_string()) {
        if (auto it = s.find("minLength"); it != s.end() && inst.get<std::string>().size() < it->get<std::size_t>())
            errs.push_back(at + ": string shorter than " + it->dump());
    }
    if (inst.is_array()) {
        if (auto it = s.find("minItems"); it != s.end() && inst.size() < it->get<std::size_t>())
            errs.push_back(at + ": fewer than " + it->dump() + " items");
        if (auto it = s.find("maxItems"); it != s.end() && inst.size() > it->get<std::size_t>())
            errs.push_back(at + ": more than " + it->dump() + " items");
        if (auto it = s.find("items"); it != s.end())
            for (std::size_t i = 0; i < inst.size(); ++i)
                check(*it, inst[i], where + "/" + std::to_string(i), errs, depth + 1);
    }
    if (inst.is_object()) {
        if (auto it = s.find("required"); it != s.end())
            for (const auto& k : *it)
                if (!inst.contains(k.get<std::string>()))
                    errs.push_back(at + ": missing required key \"" + k.get<std::string>() + "\"");
        const json* props = nullptr;
        if (auto it = s.find("properties"); it != s.end()) props = &*it;
        for (const auto& [key, value] : inst.items()) {
            if (props && props->contains(key)) {
                check((*props)[key], value, where + "/" + key, errs, depth + 1);
            } else if (auto it = s.find("additionalProperties"); it != s.end()) {
                if (it->is_boolean() && !it->get<bool>()) errs.push_back(at + ": unknown key \"" + key + "\"");
                else if (it->is_object()) check(*it, value, where + "/" + key, errs, depth + 1);
            }
        }
    }

    if (auto it = s.find("allOf"); it != s.end())
        for (const auto& sub : *it) check(sub, inst, where, errs, depth + 1);
    if (auto it = s.find("anyOf"); it != s.end()) {
        bool any = false;
        for (const auto& sub : *it) {
            std::vector<std::string> e;
            check(sub, inst, where, e, depth + 1);
            if (e.empty()) {
                any = true;
                break;
            }
        }
        if (!any) errs.push_back(at + ": matches none of the anyOf alternatives");
    }
    if (auto it = s.find("oneOf"); it != s.end()) {
        std::size_t matches = 0;
        std::vector<std::vector<std::string>> branch_errs;
        for (const auto& sub : *it) {
            std::vector<std::string> e;
            check(sub, inst, where, e, depth + 1);
            if (e.empty()) ++matches;
            branch_errs.push_back(std::move(e));
        }
        if (matches == 1) return;
        if (matches > 1) {
            errs.push_back(at + ": matches more than one oneOf alternative");
            return;
        }
        // Report the alternative whose discriminator matched, if there is exactly one.
        const std::vector<std::string>* best = nullptr;
        std::size_t candidates = 0;
        for (const auto& e : branch_errs)
            if (!mentions_const_failure(e)) {
                best = &e;
                ++candidates;
            }
        if (candidates == 1) {
            errs.insert(errs.end(), best->begin(), best->end());
            return;
        }
        errs.push_back(at + ": matches none of the oneOf alternatives");
        for (std::size_t i = 0; i < branch_errs.size(); ++i)
            if (!mentions_const_failure(branch_errs[i]) && !branch_errs[i].empty())
                errs.push_back("  alternative " + std::to_string(i) + ": " + branch_errs[i].front());
    }
}

const json& scenario_schema() {
    static const json s = json::parse(embedded::kScenarioSchema);
    return s;
}

const json& report_schema() {
    static const json s = json::parse(embedded::kReportSchema);
    return s;
}

}  // namespace specflow::app
