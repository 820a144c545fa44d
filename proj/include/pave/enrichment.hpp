// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pave/pathfinding.hpp"
#include "pave/poi_cache.hpp"
#include "pave/road_graph.hpp"
#include "pave/tasking.hpp"

namespace pave {

struct PoiHitRecord {
    std::string poi_id;
    std::string name;
    std::map<std::string, std::string> tags;
    double distance_m = 0.0;
    std::string linked_node;
};

/// One candidate route as the evaluator sees it: totals, the node
/// sequence (needed to honor NODE avoid rules from the dossier alone),
/// nearby POIs, and the urgent-reachability metric. The three urgent
/// fields are present together or absent together.
struct RouteAnnotation {
    int route_id = -1;
    std::vector<std::string> nodes;
    double total_time_s = 0.0;
    double total_co2_g = 0.0;
    std::vector<PoiHitRecord> poi_hits;
    std::optional<double> urgent_poi_time_s;
    std::optional<std::string> urgent_poi_id;
    std::optional<std::string> urgent_poi_node;
};

struct AvoidRule {
    enum class Kind { Node, Tag } kind = Kind::Node;
    /// Node id, or "key=value" for tag rules.
    std::string value;
};

struct UserContext {
    std::vector<std::string> preferences;
    std::vector<AvoidRule> avoid;
};

struct ScenarioContext {
    std::string time_of_day;  // HH:MM
    std::string traffic;      // LOW | MEDIUM | HIGH
    std::string notes;
};

struct Dossier {
    UserContext user_context;
    ScenarioContext scenario_context;
    std::vector<ClassifiedTask> tasks;
    std::vector<RouteAnnotation> routes;
};

/// Parses a TAG avoid rule value of the form "key=value".
TagFilter avoid_tag_filter(const AvoidRule& rule);

/// Annotates one candidate. poi_hits covers the union of NORMAL task
/// tags plus any avoid TAG filters (so the evaluator can see
/// violations); if any task is URGENT, the urgent fields report the
/// matching in-radius POI that is quickest to reach from the route
/// origin.
RouteAnnotation annotate_route(const Route& route, const Graph& graph, const PoiCache& cache,
                               const std::vector<ClassifiedTask>& tasks, double radius_m,
                               const std::vector<AvoidRule>& avoid = {});

Dossier build_dossier(std::vector<RouteAnnotation> annotations, UserContext user_context,
                      ScenarioContext scenario_context, std::vector<ClassifiedTask> tasks);

// Canonical serialization (sorted keys), deterministic for equal
// inputs; replay fixture keys depend on this.
nlohmann::json dossier_to_json(const Dossier& dossier);
Dossier dossier_from_json(const nlohmann::json& j);

}  // namespace pave
