// SPDX-License-Identifier: Apache-2.0
//
// Deterministic scripted completions. The stub recognizes the three
// pipeline prompts by their stage markers, applies the keyword
// classification rules or the same decision hierarchy as the
// deterministic evaluator, and wraps the result the way a chatty model
// would, so the reply parsers get exercised for real.

#include <string>
#include <vector>

#include "json.hpp"
#include "pave/enrichment.hpp"
#include "pave/errors.hpp"
#include "pave/evaluator.hpp"
#include "pave/llm_client.hpp"
#include "pave/tasking.hpp"

namespace pave::detail {

namespace {

std::vector<std::string> payload_tasks(const std::vector<ChatMessage>& messages) {
    const nlohmann::json payload = extract_first_json(messages.back().content);
    if (!payload.is_array()) {
        throw ParseError("stub: expected a JSON list of tasks in the user message");
    }
    return payload.get<std::vector<std::string>>();
}

std::string classify_reply(const std::vector<ChatMessage>& messages) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : stub_rules::classify(payload_tasks(messages))) {
        out.push_back(classified_task_to_json(t));
    }
    return "Looking at each task in turn, I classified them as follows:\n\n```json\n" +
           out.dump(2) + "\n```\n";
}

std::string aggregate_reply(const std::vector<ChatMessage>& messages) {
    std::vector<std::map<std::string, std::string>> maps;
    for (const auto& t : stub_rules::classify(payload_tasks(messages))) {
        maps.push_back(t.osm_tags);
    }
    const nlohmann::json out{{"osm_tags", merge_tags(maps)}};
    return "These tasks need the following place types:\n\n```json\n" + out.dump(2) + "\n```\n";
}

std::string evaluate_reply(const std::vector<ChatMessage>& messages) {
    const Dossier dossier = dossier_from_json(extract_first_json(messages.back().content));
    const Decision decision = evaluate_deterministic(dossier);
    return "Working through the decision hierarchy:\n\n```json\n" +
           decision_to_json(decision).dump(2) + "\n```\n";
}

}  // namespace

std::string stub_complete(const std::vector<ChatMessage>& messages) {
    for (const auto& m : messages) {
        if (m.role != Role::System) continue;
        if (m.content.find("task classification stage") != std::string::npos) {
            return classify_reply(messages);
        }
        if (m.content.find("tag aggregation stage") != std::string::npos) {
            return aggregate_reply(messages);
        }
        if (m.content.find("route evaluation stage") != std::string::npos) {
            return evaluate_reply(messages);
        }
    }
    throw ParseError("stub backend does not recognize this prompt");
}

}  // namespace pave::detail
