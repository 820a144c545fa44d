// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "pave/geo.hpp"

namespace pave {

struct Node {
    std::string id;
    double lon = 0.0;
    double lat = 0.0;
};

struct Edge {
    std::string id;
    std::string from;
    std::string to;
    double length_m = 0.0;
    double speed_kmh = 0.0;
    double time_s = 0.0;
    double co2_g = 0.0;
};

/// Parameters of the speed-dependent emission factor
/// ef(v) = a/v + b + c*v^2 in g/km, v in km/h.
struct EmissionParams {
    double a = 2000.0;
    double b = 100.0;
    double c = 0.01;
};

/// Emission in grams for a segment of length_m driven at speed_kmh.
double co2_edge_weight(double length_m, double speed_kmh, const EmissionParams& params = {});

/// Immutable multi-weighted directed road network. Nodes are stored
/// sorted by id, so node indices order the same way ids do. Safe for
/// unrestricted concurrent reads after construction.
class Graph {
  public:
    static Graph load(const std::string& path, const EmissionParams& params = {});
    static Graph from_json(const nlohmann::json& doc, const EmissionParams& params = {});

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_node(const std::string& id) const;
    /// Index into nodes(); throws UnknownNodeError.
    int node_index(const std::string& id) const;
    const Node& node(const std::string& id) const { return nodes_[node_index(id)]; }

    /// Index into edges(); throws Error on unknown id.
    int edge_index(const std::string& id) const;
    const Edge& edge(const std::string& id) const { return edges_[edge_index(id)]; }

    /// Outgoing edge indices of a node, ordered by (target id, edge id).
    const std::vector<int>& out_edges(int node_idx) const { return adjacency_[node_idx]; }

    int edge_from_idx(int edge_idx) const { return edge_from_[edge_idx]; }
    int edge_to_idx(int edge_idx) const { return edge_to_[edge_idx]; }

    /// Graph-wide maxima used to normalize scalarized edge weights.
    double max_time_s() const { return max_time_s_; }
    double max_co2_g() const { return max_co2_g_; }

    /// Node minimizing great-circle distance to (lon, lat); ties go to
    /// the lexicographically smallest id. Throws EmptyGraphError.
    std::string nearest_node(double lon, double lat) const;

    const UnitVectors& node_vectors() const { return node_vectors_; }

  private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> edge_from_;
    std::vector<int> edge_to_;
    std::unordered_map<std::string, int> edge_index_;
    UnitVectors node_vectors_;
    double max_time_s_ = 0.0;
    double max_co2_g_ = 0.0;
};

}  // namespace pave
