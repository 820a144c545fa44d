// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pave/enrichment.hpp"
#include "pave/evaluator.hpp"
#include "pave/llm_client.hpp"
#include "pave/pathfinding.hpp"
#include "pave/poi_cache.hpp"
#include "pave/road_graph.hpp"

namespace pave {

enum class EvaluatorMode { Llm, Deterministic };

struct PlanRequest {
    std::string origin;
    std::string destination;
    std::vector<std::string> tasks;
    std::vector<std::string> preferences;
    std::vector<AvoidRule> avoid;
    int k = 2;
    ScenarioContext scenario_context;
    EvaluatorMode evaluator_mode = EvaluatorMode::Deterministic;
    double radius_m = kDefaultRadiusM;
    int max_retries = 3;
};

struct FinalPlan {
    Route final_route;
    Decision decision;
    CandidateSet candidates;
    Dossier dossier;
    bool recalculated = false;
};

/// The five-step pipeline: classify tasks (skipped when there are
/// none), generate k candidates, enrich them, evaluate, then apply at
/// most one feedback action. Errors carry the failing stage name.
FinalPlan plan(const PlanRequest& request, const Graph& graph, const PoiCache& cache,
               Backend& client);

/// Applies a validated decision: NONE returns the chosen candidate,
/// ADD_WAYPOINT recalculates origin -> waypoint -> destination honoring
/// NODE avoid rules as exclusions.
Route apply_action(const PlanRequest& request, const Graph& graph, const Decision& decision,
                   const CandidateSet& candidates);

nlohmann::json route_to_json(const Route& route);
Route route_from_json(const nlohmann::json& j);
nlohmann::json final_plan_to_json(const FinalPlan& plan);

/// GeoJSON Feature with the final route as a LineString.
nlohmann::json route_to_geojson(const Route& route, const Graph& graph);

}  // namespace pave
