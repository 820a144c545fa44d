// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "pave/enrichment.hpp"
#include "pave/llm_client.hpp"

namespace pave {

struct RequiredAction {
    enum class Type { None, AddWaypoint } type = Type::None;
    std::optional<std::string> poi_id;
    std::optional<std::string> node_id;
};

struct Decision {
    int chosen_route_id = -1;
    std::string justification;
    RequiredAction required_action;
};

/// Hierarchical route choice from the dossier alone, in strict order:
/// avoid filter, urgency, task coverage, then time / CO2 / lowest id.
/// Preferences never override the ordering; they only show up in the
/// justification. Total and pure on valid dossiers.
Decision evaluate_deterministic(const Dossier& dossier);

/// LLM-backed choice: renders the evaluation prompt, parses the reply
/// against the decision schema (re-prompting on schema failures up to
/// max_retries), then validates it against the dossier.
Decision evaluate_llm(Backend& client, const Dossier& dossier, int max_retries = 3);

/// Throws InvalidDecisionError naming the violated check.
void validate_decision(const Decision& decision, const Dossier& dossier);

nlohmann::json decision_to_json(const Decision& decision);
Decision decision_from_json(const nlohmann::json& j);

}  // namespace pave
