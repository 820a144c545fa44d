// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "pave/errors.hpp"
#include "pave/llm_client.hpp"
#include "pave/tasking.hpp"

using namespace pave;

namespace {

/// Scripted backend for exercising the retry path.
class ScriptedBackend : public Backend {
  public:
    explicit ScriptedBackend(std::vector<std::string> replies)
        : replies_(std::move(replies)) {}

    std::string complete(const std::vector<ChatMessage>&) override {
        ++calls;
        if (replies_.empty()) return "no json here at all";
        const std::string r = replies_.front();
        if (replies_.size() > 1) replies_.erase(replies_.begin());
        return r;
    }

    int calls = 0;

  private:
    std::vector<std::string> replies_;
};

}  // namespace

TEST_CASE("extract_first_json finds structured output in prose") {
    CHECK(extract_first_json(R"(Sure! Here you go: {"a": 1} hope that helps)") ==
          nlohmann::json{{"a", 1}});
    CHECK(extract_first_json("```json\n[1, 2, 3]\n```") == nlohmann::json({1, 2, 3}));
    // the first balanced-but-invalid blob is skipped in favor of a later valid one
    CHECK(extract_first_json("{not json} but [7] is") == nlohmann::json({7}));
    CHECK(extract_first_json(R"(nested: {"x": {"y": [1]}}!)") ==
          nlohmann::json::parse(R"({"x": {"y": [1]}})"));
    CHECK_THROWS_AS(extract_first_json("no structure here"), ParseError);
}

TEST_CASE("render_prompt substitutes slots deterministically") {
    const nlohmann::json ctx{{"tasks_json", "[\"buy milk\"]"}};
    const auto a = render_prompt(PromptKind::Classify, ctx);
    const auto b = render_prompt(PromptKind::Classify, ctx);
    REQUIRE(a.size() == 2);
    CHECK(a[0].role == Role::System);
    CHECK(a[1].role == Role::User);
    CHECK(a[1].content.find("[\"buy milk\"]") != std::string::npos);
    CHECK(a[0].content == b[0].content);
    CHECK(a[1].content == b[1].content);

    CHECK_THROWS_AS(render_prompt(PromptKind::Classify, nlohmann::json::object()),
                    MissingSlotError);
}

TEST_CASE("stub classification of the paper wordings") {
    auto stub = make_backend(BackendConfig{});

    const auto urgent = classify_tasks(*stub, {"I'm running out of gas"});
    REQUIRE(urgent.size() == 1);
    CHECK(urgent[0].priority == Priority::Urgent);
    CHECK(urgent[0].osm_tags == std::map<std::string, std::string>{{"amenity", "fuel"}});

    const auto split =
        classify_tasks(*stub, {"I want to pass through a park on the way to the grocery store"});
    REQUIRE(split.size() == 2);
    CHECK(split[0].priority == Priority::Normal);
    CHECK(split[0].osm_tags == std::map<std::string, std::string>{{"leisure", "park"}});
    CHECK(split[1].priority == Priority::Normal);
    CHECK(split[1].osm_tags == std::map<std::string, std::string>{{"shop", "supermarket"}});

    const auto mixed =
        classify_tasks(*stub, {"I need to go to the gas station before going to the supermarket"});
    REQUIRE(mixed.size() == 2);
    CHECK(mixed[0].priority == Priority::Urgent);
    CHECK(mixed[0].osm_tags == std::map<std::string, std::string>{{"amenity", "fuel"}});
    CHECK(mixed[1].priority == Priority::Normal);
}

TEST_CASE("classification preserves order across multiple tasks") {
    auto stub = make_backend(BackendConfig{});
    const auto out = classify_tasks(*stub, {"find a hospital", "visit a park", "buy at a supermarket"});
    REQUIRE(out.size() == 3);
    CHECK(out[0].osm_tags.at("amenity") == "hospital");
    CHECK(out[1].osm_tags.at("leisure") == "park");
    CHECK(out[2].osm_tags.at("shop") == "supermarket");
}

TEST_CASE("classify_tasks rejects an empty task list") {
    auto stub = make_backend(BackendConfig{});
    CHECK_THROWS_AS(classify_tasks(*stub, {}), PreconditionError);
}

TEST_CASE("stub keyword table is consistent") {
    for (int i = 0; i < 3; ++i) {
        const auto a = stub_rules::classify({"emergency, I need a hospital now"});
        REQUIRE(a.size() == 1);
        CHECK(a[0].priority == Priority::Urgent);
        CHECK(a[0].osm_tags.at("amenity") == "hospital");
    }
    const auto pharmacy = stub_rules::classify({"pick up a prescription at the pharmacy"});
    REQUIRE(pharmacy.size() == 1);
    CHECK(pharmacy[0].priority == Priority::Normal);
    CHECK(pharmacy[0].osm_tags.at("amenity") == "pharmacy");

    // unknown clauses are dropped
    CHECK(stub_rules::classify({"go dancing"}).empty());
}

TEST_CASE("clause splitting markers") {
    using stub_rules::split_clauses;
    CHECK(split_clauses("stop for gas then buy groceries") ==
          std::vector<std::string>{"stop for gas", "buy groceries"});
    CHECK(split_clauses("gas station before the park and then the hospital") ==
          std::vector<std::string>{"gas station", "the park", "the hospital"});
    CHECK(split_clauses("nothing to split") == std::vector<std::string>{"nothing to split"});
    // marker words inside other words do not split
    CHECK(split_clauses("the thenardier cafe") == std::vector<std::string>{"the thenardier cafe"});
}

TEST_CASE("aggregate_tags merges across tasks") {
    auto stub = make_backend(BackendConfig{});

    const TagSet merged = aggregate_tags(*stub, {"need gas", "then supermarket"});
    CHECK(merged.tags ==
          std::map<std::string, std::string>{{"amenity", "fuel"}, {"shop", "supermarket"}});

    const TagSet single = aggregate_tags(*stub, {"visit a park"});
    CHECK(single.tags == std::map<std::string, std::string>{{"leisure", "park"}});

    const TagSet dup = aggregate_tags(*stub, {"visit a park", "visit a park"});
    CHECK(dup.tags == single.tags);
}

TEST_CASE("merge_tags lets the later task win conflicts") {
    const auto merged = merge_tags({{{"amenity", "fuel"}}, {{"amenity", "hospital"}}});
    CHECK(merged == std::map<std::string, std::string>{{"amenity", "hospital"}});
}

TEST_CASE("malformed replies trigger exactly max_retries re-prompts") {
    ScriptedBackend bad({"this is not json"});
    CHECK_THROWS_AS(classify_tasks(bad, {"need gas"}, 3), SchemaError);
    CHECK(bad.calls == 4);  // one initial prompt + three re-prompts

    ScriptedBackend wrong_schema({R"({"not": "a list"})"});
    CHECK_THROWS_AS(classify_tasks(wrong_schema, {"need gas"}, 2), SchemaError);
    CHECK(wrong_schema.calls == 3);

    // a reply that becomes valid on the second attempt succeeds
    ScriptedBackend flaky(
        {"garbage",
         R"([{"task": "need gas", "priority": "URGENT", "osm_tags": {"amenity": "fuel"}}])"});
    const auto out = classify_tasks(flaky, {"need gas"}, 3);
    REQUIRE(out.size() == 1);
    CHECK(flaky.calls == 2);
}

TEST_CASE("schema errors carry the raw reply") {
    ScriptedBackend bad({"gibberish reply"});
    try {
        classify_tasks(bad, {"need gas"}, 1);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.raw_reply == "gibberish reply");
    }
}

TEST_CASE("invalid classified task payloads are rejected") {
    CHECK_THROWS_AS(classified_task_from_json(nlohmann::json{{"task", "x"}}), ParseError);
    CHECK_THROWS_AS(
        classified_task_from_json(nlohmann::json::parse(
            R"({"task": "x", "priority": "SOON", "osm_tags": {"a": "b"}})")),
        ParseError);
    CHECK_THROWS_AS(
        classified_task_from_json(
            nlohmann::json::parse(R"({"task": "x", "priority": "NORMAL", "osm_tags": {}})")),
        ParseError);
}
