// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "pave/road_graph.hpp"

namespace pave {

/// Edge-cost objective for path search. Scalarized collapses the two
/// weights into lambda*time/Tmax + (1-lambda)*co2/Cmax with graph-wide
/// maxima, keeping lambda unitless.
struct Objective {
    enum class Kind { Time, Co2, Scalarized };
    Kind kind = Kind::Time;
    double lambda = 1.0;

    static Objective time() { return {Kind::Time, 1.0}; }
    static Objective co2() { return {Kind::Co2, 0.0}; }
    static Objective scalarized(double lambda) { return {Kind::Scalarized, lambda}; }
};

struct Route {
    int id = -1;
    std::vector<std::string> nodes;
    std::vector<std::string> edges;
    double total_time_s = 0.0;
    double total_co2_g = 0.0;
};

struct CandidateSet {
    std::vector<Route> routes;
    int k_requested = 0;
};

using NodeSet = std::unordered_set<std::string>;

/// Minimum-cost simple path under the objective, never visiting an
/// excluded node. Ties resolve to the lexicographically smallest
/// node-id sequence. s == d yields a single-node zero-cost route.
Route shortest_path(const Graph& g, const std::string& s, const std::string& d,
                    const Objective& objective, const NodeSet& excluded_nodes = {});

/// Up to k loopless paths in nondecreasing cost order (Yen), with the
/// same tie-break rule as shortest_path.
std::vector<Route> yen_k_shortest(const Graph& g, const std::string& s, const std::string& d,
                                  int k, const Objective& objective,
                                  const NodeSet& excluded_nodes = {});

/// k diverse candidate routes: scalarized shortest paths over an evenly
/// spaced lambda grid from 1.0 (pure time) down to 0.0 (pure CO2),
/// deduplicated by node sequence, then topped up with Yen paths under
/// the time objective. Route ids are 0..n-1 in output order.
CandidateSet k_candidates(const Graph& g, const std::string& s, const std::string& d, int k);

/// Concatenation of the time-optimal s->w and w->d paths. Totals are
/// the sums of the two leg totals.
Route concat_via_waypoint(const Graph& g, const std::string& s, const std::string& w,
                          const std::string& d, const NodeSet& excluded_nodes = {});

/// Cost of an existing route under an objective, summed in edge order.
double route_cost(const Graph& g, const Route& r, const Objective& objective);

/// Time-objective Dijkstra distances from origin to every node
/// (infinity where unreachable).
std::vector<double> one_to_all_time(const Graph& g, const std::string& origin);

}  // namespace pave
