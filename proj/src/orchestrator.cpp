// SPDX-License-Identifier: Apache-2.0
#include "pave/orchestrator.hpp"

#include <algorithm>

#include "pave/errors.hpp"
#include "pave/tasking.hpp"

namespace pave {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

Route apply_action(const PlanRequest& request, const Graph& graph, const Decision& decision,
                   const CandidateSet& candidates) {
    if (decision.required_action.type == RequiredAction::Type::None) {
        for (const Route& r : candidates.routes) {
            if (r.id == decision.chosen_route_id) return r;
        }
        throw InvalidDecisionError("chosen route id " + std::to_string(decision.chosen_route_id) +
                                   " not in candidate set");
    }
    NodeSet excluded;
    for (const auto& rule : request.avoid) {
        if (rule.kind == AvoidRule::Kind::Node) excluded.insert(rule.value);
    }
    return concat_via_waypoint(graph, request.origin, *decision.required_action.node_id,
                               request.destination, excluded);
}

FinalPlan plan(const PlanRequest& request, const Graph& graph, const PoiCache& cache,
               Backend& client) {
    if (request.origin == request.destination) {
        throw PreconditionError("plan: origin equals destination");
    }
    if (request.k < 1) throw PreconditionError("plan: k must be >= 1");
    graph.node_index(request.origin);
    graph.node_index(request.destination);

    FinalPlan out;

    // (i) task classification
    std::vector<ClassifiedTask> tasks;
    if (!request.tasks.empty()) {
        tasks = stage("classify", [&] {
            return classify_tasks(client, request.tasks, request.max_retries);
        });
    }

    // (ii) candidate generation
    out.candidates = stage("candidates", [&] {
        return k_candidates(graph, request.origin, request.destination, request.k);
    });

    // (iii) contextual enrichment
    std::vector<RouteAnnotation> annotations = stage("enrich", [&] {
        std::vector<RouteAnnotation> anns;
        anns.reserve(out.candidates.routes.size());
        for (const Route& r : out.candidates.routes) {
            anns.push_back(annotate_route(r, graph, cache, tasks, request.radius_m,
                                          request.avoid));
        }
        return anns;
    });

    // (iv) evaluation
    out.dossier = stage("dossier", [&] {
        UserContext uc{request.preferences, request.avoid};
        return build_dossier(std::move(annotations), std::move(uc), request.scenario_context,
                             tasks);
    });
    out.decision = stage("evaluate", [&] {
        Decision d = request.evaluator_mode == EvaluatorMode::Llm
                         ? evaluate_llm(client, out.dossier, request.max_retries)
                         : evaluate_deterministic(out.dossier);
        validate_decision(d, out.dossier);
        return d;
    });

    // (v) feedback loop, at most one iteration
    out.final_route = stage("apply", [&] {
        return apply_action(request, graph, out.decision, out.candidates);
    });
    out.recalculated = out.decision.required_action.type == RequiredAction::Type::AddWaypoint;
    return out;
}

nlohmann::json route_to_json(const Route& r) {
    return {{"id", r.id},
            {"nodes", r.nodes},
            {"edges", r.edges},
            {"total_time_s", r.total_time_s},
            {"total_co2_g", r.total_co2_g}};
}

Route route_from_json(const nlohmann::json& j) {
    Route r;
    r.id = j.at("id").get<int>();
    r.nodes = j.at("nodes").get<std::vector<std::string>>();
    r.edges = j.at("edges").get<std::vector<std::string>>();
    r.total_time_s = j.at("total_time_s").get<double>();
    r.total_co2_g = j.at("total_co2_g").get<double>();
    return r;
}

nlohmann::json final_plan_to_json(const FinalPlan& plan) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const Route& r : plan.candidates.routes) candidates.push_back(route_to_json(r));
    return {{"final_route", route_to_json(plan.final_route)},
            {"decision", decision_to_json(plan.decision)},
            {"candidates", candidates},
            {"dossier", dossier_to_json(plan.dossier)},
            {"recalculated", plan.recalculated}};
}

nlohmann::json route_to_geojson(const Route& route, const Graph& graph) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& id : route.nodes) {
        const Node& n = graph.node(id);
        coords.push_back({n.lon, n.lat});
    }
    return {{"type", "Feature"},
            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
            {"properties",
             {{"total_time_s", route.total_time_s}, {"total_co2_g", route.total_co2_g}}}};
}

}  // namespace pave
