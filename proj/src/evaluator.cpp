// SPDX-License-Identifier: Apache-2.0
#include "pave/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pave/errors.hpp"
#include "pave/tasking.hpp"

namespace pave {

namespace {

bool tags_match(const std::map<std::string, std::string>& tags, const TagFilter& filter) {
    for (const auto& [k, v] : filter) {
        const auto it = tags.find(k);
        if (it == tags.end() || it->second != v) return false;
    }
    return true;
}

bool on_route(const RouteAnnotation& ann, const std::string& node_id) {
    return std::find(ann.nodes.begin(), ann.nodes.end(), node_id) != ann.nodes.end();
}

bool violates_avoid(const RouteAnnotation& ann, const std::vector<AvoidRule>& avoid) {
    for (const auto& rule : avoid) {
        if (rule.kind == AvoidRule::Kind::Node) {
            if (on_route(ann, rule.value)) return true;
        } else {
            const TagFilter filter = avoid_tag_filter(rule);
            for (const auto& hit : ann.poi_hits) {
                if (tags_match(hit.tags, filter)) return true;
            }
        }
    }
    return false;
}

/// Number of tasks already served by a POI sitting on the route itself.
int coverage(const RouteAnnotation& ann, const std::vector<ClassifiedTask>& tasks) {
    int covered = 0;
    for (const auto& task : tasks) {
        const bool hit = std::any_of(ann.poi_hits.begin(), ann.poi_hits.end(),
                                     [&](const PoiHitRecord& h) {
                                         return tags_match(h.tags, task.osm_tags) &&
                                                on_route(ann, h.linked_node);
                                     });
        if (hit) ++covered;
    }
    return covered;
}

bool better_by_cost(const RouteAnnotation& a, const RouteAnnotation& b) {
    if (a.total_time_s != b.total_time_s) return a.total_time_s < b.total_time_s;
    if (a.total_co2_g != b.total_co2_g) return a.total_co2_g < b.total_co2_g;
    return a.route_id < b.route_id;
}

}  // namespace

Decision evaluate_deterministic(const Dossier& dossier) {
    if (dossier.routes.empty()) {
        throw PreconditionError("evaluate_deterministic: dossier has no routes");
    }
    std::ostringstream why;

    // (1) avoid filter
    std::vector<const RouteAnnotation*> eligible;
    for (const auto& ann : dossier.routes) {
        if (!violates_avoid(ann, dossier.user_context.avoid)) eligible.push_back(&ann);
    }
    if (eligible.empty()) {
        for (const auto& ann : dossier.routes) eligible.push_back(&ann);
        if (!dossier.user_context.avoid.empty()) {
            why << "every candidate violates an avoid rule, keeping all; ";
        }
    } else if (eligible.size() < dossier.routes.size()) {
        why << (dossier.routes.size() - eligible.size())
            << " candidate(s) discarded by avoid rules; ";
    }

    const bool any_urgent =
        std::any_of(dossier.tasks.begin(), dossier.tasks.end(),
                    [](const ClassifiedTask& t) { return t.priority == Priority::Urgent; });

    Decision decision;

    if (any_urgent) {
        // (2) urgency: fastest access to a matching POI wins; routes
        // with no reachable POI lose to routes with one.
        const RouteAnnotation* best = nullptr;
        for (const auto* ann : eligible) {
            if (!best) {
                best = ann;
                continue;
            }
            const bool a_has = ann->urgent_poi_time_s.has_value();
            const bool b_has = best->urgent_poi_time_s.has_value();
            if (a_has != b_has) {
                if (a_has) best = ann;
                continue;
            }
            if (a_has && *ann->urgent_poi_time_s != *best->urgent_poi_time_s) {
                if (*ann->urgent_poi_time_s < *best->urgent_poi_time_s) best = ann;
                continue;
            }
            if (better_by_cost(*ann, *best)) best = ann;
        }
        decision.chosen_route_id = best->route_id;
        if (best->urgent_poi_time_s) {
            decision.required_action.type = RequiredAction::Type::AddWaypoint;
            decision.required_action.poi_id = best->urgent_poi_id;
            decision.required_action.node_id = best->urgent_poi_node;
            why << "urgent task: route " << best->route_id << " reaches POI "
                << *best->urgent_poi_id << " in " << *best->urgent_poi_time_s
                << " s from the origin, adding it as waypoint";
        } else {
            why << "urgent task, but no matching POI within radius of any candidate";
        }
    } else if (!dossier.tasks.empty()) {
        // (3) task coverage: prefer routes already passing a POI for the
        // most tasks; fix at most one missing task with a waypoint.
        const RouteAnnotation* best = nullptr;
        int best_cov = -1;
        for (const auto* ann : eligible) {
            const int cov = coverage(*ann, dossier.tasks);
            if (cov > best_cov || (cov == best_cov && better_by_cost(*ann, *best))) {
                best = ann;
                best_cov = cov;
            }
        }
        decision.chosen_route_id = best->route_id;
        why << "route " << best->route_id << " already passes POIs for " << best_cov << " of "
            << dossier.tasks.size() << " task(s)";

        if (best_cov < static_cast<int>(dossier.tasks.size())) {
            const PoiHitRecord* waypoint = nullptr;
            for (const auto& task : dossier.tasks) {
                const bool covered =
                    std::any_of(best->poi_hits.begin(), best->poi_hits.end(),
                                [&](const PoiHitRecord& h) {
                                    return tags_match(h.tags, task.osm_tags) &&
                                           on_route(*best, h.linked_node);
                                });
                if (covered) continue;
                for (const auto& hit : best->poi_hits) {
                    if (!tags_match(hit.tags, task.osm_tags)) continue;
                    if (!waypoint || hit.distance_m < waypoint->distance_m ||
                        (hit.distance_m == waypoint->distance_m && hit.poi_id < waypoint->poi_id)) {
                        waypoint = &hit;
                    }
                }
            }
            if (waypoint) {
                decision.required_action.type = RequiredAction::Type::AddWaypoint;
                decision.required_action.poi_id = waypoint->poi_id;
                decision.required_action.node_id = waypoint->linked_node;
                why << "; adding nearby POI " << waypoint->poi_id << " ("
                    << waypoint->distance_m << " m off route) as waypoint";
            } else {
                why << "; no nearby POI available for the remaining task(s)";
            }
        }
    } else {
        // (4) efficiency: time, then CO2, then lowest id.
        const RouteAnnotation* best = eligible.front();
        for (const auto* ann : eligible) {
            if (better_by_cost(*ann, *best)) best = ann;
        }
        decision.chosen_route_id = best->route_id;
        why << "no tasks: route " << best->route_id << " is fastest (" << best->total_time_s
            << " s, " << best->total_co2_g << " g CO2)";
    }

    if (!dossier.user_context.preferences.empty()) {
        why << "; preferences noted:";
        for (const auto& p : dossier.user_context.preferences) why << " '" << p << "'";
    }
    decision.justification = why.str();
    return decision;
}

nlohmann::json decision_to_json(const Decision& d) {
    nlohmann::json action;
    action["type"] =
        d.required_action.type == RequiredAction::Type::AddWaypoint ? "ADD_WAYPOINT" : "NONE";
    action["poi_id"] = d.required_action.poi_id ? nlohmann::json(*d.required_action.poi_id)
                                                : nlohmann::json(nullptr);
    action["node_id"] = d.required_action.node_id ? nlohmann::json(*d.required_action.node_id)
                                                  : nlohmann::json(nullptr);
    return {{"chosen_route_id", d.chosen_route_id},
            {"justification", d.justification},
            {"required_action", action}};
}

Decision decision_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("chosen_route_id") ||
        !j.at("chosen_route_id").is_number_integer() || !j.contains("justification") ||
        !j.at("justification").is_string() || !j.contains("required_action") ||
        !j.at("required_action").is_object()) {
        throw ParseError("decision must have integer 'chosen_route_id', string 'justification' "
                         "and object 'required_action'");
    }
    Decision d;
    d.chosen_route_id = j.at("chosen_route_id").get<int>();
    d.justification = j.at("justification").get<std::string>();
    const auto& action = j.at("required_action");
    if (!action.contains("type") || !action.at("type").is_string()) {
        throw ParseError("required_action must have a string 'type'");
    }
    const std::string type = action.at("type").get<std::string>();
    if (type == "NONE") {
        d.required_action.type = RequiredAction::Type::None;
    } else if (type == "ADD_WAYPOINT") {
        d.required_action.type = RequiredAction::Type::AddWaypoint;
    } else {
        throw ParseError("required_action.type must be NONE or ADD_WAYPOINT, got " + type);
    }
    if (action.contains("poi_id") && !action.at("poi_id").is_null()) {
        if (!action.at("poi_id").is_string()) throw ParseError("poi_id must be string or null");
        d.required_action.poi_id = action.at("poi_id").get<std::string>();
    }
    if (action.contains("node_id") && !action.at("node_id").is_null()) {
        if (!action.at("node_id").is_string()) throw ParseError("node_id must be string or null");
        d.required_action.node_id = action.at("node_id").get<std::string>();
    }
    return d;
}

void validate_decision(const Decision& decision, const Dossier& dossier) {
    const auto route = std::find_if(dossier.routes.begin(), dossier.routes.end(),
                                    [&](const RouteAnnotation& a) {
                                        return a.route_id == decision.chosen_route_id;
                                    });
    if (route == dossier.routes.end()) {
        throw InvalidDecisionError("decision references unknown route id " +
                                   std::to_string(decision.chosen_route_id));
    }
    if (decision.required_action.type == RequiredAction::Type::None) {
        if (decision.required_action.poi_id || decision.required_action.node_id) {
            throw InvalidDecisionError("NONE action must not carry poi_id or node_id");
        }
        return;
    }
    if (!decision.required_action.poi_id || !decision.required_action.node_id) {
        throw InvalidDecisionError("ADD_WAYPOINT requires both poi_id and node_id");
    }
    const std::string& poi_id = *decision.required_action.poi_id;
    std::optional<std::string> linked;
    for (const auto& ann : dossier.routes) {
        for (const auto& hit : ann.poi_hits) {
            if (hit.poi_id == poi_id) linked = hit.linked_node;
        }
        if (ann.urgent_poi_id && *ann.urgent_poi_id == poi_id) linked = ann.urgent_poi_node;
    }
    if (!linked) {
        throw InvalidDecisionError("ADD_WAYPOINT references POI '" + poi_id +
                                   "' not present in the dossier");
    }
    if (*linked != *decision.required_action.node_id) {
        throw InvalidDecisionError("ADD_WAYPOINT node_id '" + *decision.required_action.node_id +
                                   "' does not match POI '" + poi_id + "' linked node '" +
                                   *linked + "'");
    }
}

Decision evaluate_llm(Backend& client, const Dossier& dossier, int max_retries) {
    const auto messages = render_prompt(PromptKind::Evaluate,
                                        {{"dossier_json", dossier_to_json(dossier).dump(2)}});
    std::string last_reply;
    std::string last_error;
    std::optional<Decision> decision;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        last_reply = client.complete(messages);
        try {
            decision = decision_from_json(extract_first_json(last_reply));
            break;
        } catch (const ParseError& e) {
            last_error = e.what();
        }
    }
    if (!decision) {
        throw SchemaError("evaluation reply failed validation after " +
                              std::to_string(max_retries) + " retries: " + last_error,
                          last_reply);
    }
    validate_decision(*decision, dossier);
    return *decision;
}

}  // namespace pave
