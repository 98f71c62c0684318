// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "oracles.hpp"
#include "specflow/app/io.hpp"
#include "specflow/app/scenario.hpp"
#include "specflow/app/schema.hpp"
#include "specflow/errors.hpp"

using namespace specflow::app;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> errors(const json& schema, const json& inst) { return SchemaValidator(schema).validate(inst); }

json sawtooth_scenario() {
    return json::parse(R"({
      "alpha_spec": "(-1+sqrt(5))/2",
      "roof_spec": {"constant": 1.0, "jumps": [{"beta": "0/1", "d": 0.5}]},
      "experiment": "dk",
      "params": {"max_index": 4, "samples": 3},
      "seed": 1,
      "output": {"path": "out", "format": "json"}
    })");
}

}  // namespace

TEST(SchemaValidator, Types) {
    json s = {{"type", "integer"}};
    EXPECT_TRUE(errors(s, 3).empty());
    EXPECT_TRUE(errors(s, 3.0).empty());
    EXPECT_FALSE(errors(s, 3.5).empty());
    EXPECT_FALSE(errors(s, "3").empty());
    json multi = {{"type", {"integer", "null"}}};
    EXPECT_TRUE(errors(multi, nullptr).empty());
    EXPECT_FALSE(errors(multi, true).empty());
}

TEST(SchemaValidator, Bounds) {
    json s = {{"type", "number"}, {"exclusiveMinimum", 0}, {"maximum", 1}};
    EXPECT_TRUE(errors(s, 1).empty());
    EXPECT_FALSE(errors(s, 0).empty());
    EXPECT_FALSE(errors(s, 1.0000001).empty());
    json arr = {{"type", "array"}, {"minItems", 1}, {"maxItems", 2}, {"items", {{"type", "string"}, {"minLength", 1}}}};
    EXPECT_FALSE(errors(arr, json::array()).empty());
    EXPECT_TRUE(errors(arr, {"a", "b"}).empty());
    EXPECT_FALSE(errors(arr, {"a", "b", "c"}).empty());
    EXPECT_FALSE(errors(arr, {"a", ""}).empty());
}

TEST(SchemaValidator, ObjectsAndRefs) {
    json s = json::parse(R"({
      "$defs": {"pos": {"type": "number", "exclusiveMinimum": 0}},
      "type": "object", "additionalProperties": false, "required": ["a"],
      "properties": {"a": {"$ref": "#/$defs/pos"}, "b": {"enum": ["x", "y"]}}
    })");
    EXPECT_TRUE(errors(s, {{"a", 1}}).empty());
    EXPECT_TRUE(errors(s, {{"a", 1}, {"b", "y"}}).empty());
    EXPECT_FALSE(errors(s, {{"a", -1}}).empty());
    EXPECT_FALSE(errors(s, {{"a", 1}, {"b", "z"}}).empty());
    EXPECT_FALSE(errors(s, {{"b", "x"}}).empty());
    auto e = errors(s, {{"a", 1}, {"c", 0}});
    ASSERT_EQ(e.size(), 1u);
    EXPECT_NE(e[0].find("unknown key \"c\""), std::string::npos);
}

TEST(SchemaValidator, Combinators) {
    json one = json::parse(R"({"oneOf": [{"type": "integer"}, {"type": "number", "minimum": 10}]})");
    EXPECT_TRUE(errors(one, 3).empty());
    EXPECT_TRUE(errors(one, 10.5).empty());
    EXPECT_FALSE(errors(one, 12).empty());  // both match
    EXPECT_FALSE(errors(one, 2.5).empty());
    json any = json::parse(R"({"anyOf": [{"type": "integer"}, {"type": "number", "minimum": 10}]})");
    EXPECT_TRUE(errors(any, 12).empty());
    EXPECT_FALSE(errors(any, 2.5).empty());
    json all = json::parse(R"({"allOf": [{"type": "number"}, {"maximum": 5}]})");
    EXPECT_TRUE(errors(all, 5).empty());
    EXPECT_FALSE(errors(all, 6).empty());
}

TEST(SchemaValidator, DiscriminatedBranchErrorsSurface) {
    json sc = sawtooth_scenario();
    sc["params"]["samples"] = 0;
    auto e = SchemaValidator(scenario_schema()).validate(sc);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_NE(e[0].find("/params/samples"), std::string::npos);
}

TEST(ScenarioSchema, ShippedScenariosValidate) {
    const SchemaValidator v(scenario_schema());
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(SPECFLOW_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        EXPECT_TRUE(v.validate(json::parse(read_file(entry.path()))).empty()) << entry.path();
    }
    EXPECT_GE(count, 9u);
}

TEST(ScenarioSchema, DroppingAnyRequiredKeyFails) {
    const json base = sawtooth_scenario();
    const SchemaValidator v(scenario_schema());
    ASSERT_TRUE(v.validate(base).empty());
    for (const auto& key : scenario_schema().at("required")) {
        json sc = base;
        sc.erase(key.get<std::string>());
        EXPECT_FALSE(v.validate(sc).empty()) << key;
    }
}

TEST(ScenarioSchema, RandomUnknownKeysRejectedAtEveryObjectLevel) {
    oracle::Gen g(17);
    const SchemaValidator v(scenario_schema());
    const std::vector<json::json_pointer> objects = {json::json_pointer(""), json::json_pointer("/roof_spec"),
                                                     json::json_pointer("/roof_spec/jumps/0"),
                                                     json::json_pointer("/params"), json::json_pointer("/output")};
    for (int trial = 0; trial < 50; ++trial) {
        json sc = sawtooth_scenario();
        const auto& where = objects[static_cast<std::size_t>(g.integer(0, 4))];
        sc[where]["zz_" + std::to_string(g.next() % 1000)] = g.uniform();
        EXPECT_FALSE(v.validate(sc).empty()) << where.to_string();
    }
}

TEST(ScenarioSchema, ParseScenarioReportsEveryViolation) {
    json sc = sawtooth_scenario();
    sc.erase("seed");
    sc["output"]["format"] = "xml";
    try {
        parse_scenario(sc.dump());
        FAIL() << "accepted";
    } catch (const specflow::ValidationError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("seed"), std::string::npos);
        EXPECT_NE(msg.find("xml"), std::string::npos);
    }
    EXPECT_THROW(parse_scenario("{not json"), specflow::ValidationError);
}

TEST(ReportSchema, IsSelfConsistent) {
    // Every $ref in both schemas resolves.
    for (const json* s : {&scenario_schema(), &report_schema()}) {
        const SchemaValidator v(*s);
        std::function<void(const json&)> walk = [&](const json& node) {
            if (node.is_object()) {
                if (auto it = node.find("$ref"); it != node.end())
                    EXPECT_NO_THROW(s->at(json::json_pointer(it->get<std::string>().substr(1))));
                for (const auto& [k, child] : node.items()) walk(child);
            } else if (node.is_array()) {
                for (const auto& child : node) walk(child);
            }
        };
        walk(*s);
    }
}
