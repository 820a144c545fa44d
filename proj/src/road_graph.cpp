// SPDX-License-Identifier: Apache-2.0
#include "pave/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "pave/errors.hpp"

namespace pave {

double co2_edge_weight(double length_m, double speed_kmh, const EmissionParams& p) {
    if (speed_kmh <= 0.0) {
        throw DomainError("co2_edge_weight: speed_kmh must be > 0, got " +
                          std::to_string(speed_kmh));
    }
    if (length_m < 0.0) {
        throw DomainError("co2_edge_weight: length_m must be >= 0, got " +
                          std::to_string(length_m));
    }
    const double ef = p.a / speed_kmh + p.b + p.c * speed_kmh * speed_kmh;
    return (length_m / 1000.0) * ef;
}

namespace {

double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ParseError(where + ": missing or non-numeric '" + std::string(key) + "'");
    }
    return obj.at(key).get<double>();
}

std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        throw ParseError(where + ": missing or non-string '" + std::string(key) + "'");
    }
    return obj.at(key).get<std::string>();
}

}  // namespace

Graph Graph::load(const std::string& path, const EmissionParams& params) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("network file " + path + ": " + e.what());
    }
    return from_json(doc, params);
}

Graph Graph::from_json(const nlohmann::json& doc, const EmissionParams& params) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
        throw ParseError("network document must contain 'nodes' and 'edges'");
    }

    Graph g;
    for (const auto& jn : doc.at("nodes")) {
        Node n;
        n.id = require_string(jn, "id", "node");
        n.lon = require_number(jn, "lon", "node " + n.id);
        n.lat = require_number(jn, "lat", "node " + n.id);
        if (n.lon < -180.0 || n.lon > 180.0 || n.lat < -90.0 || n.lat > 90.0) {
            throw ValidationError("node " + n.id + ": coordinates out of range");
        }
        g.nodes_.push_back(std::move(n));
    }
    std::sort(g.nodes_.begin(), g.nodes_.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < g.nodes_.size(); ++i) {
        if (g.nodes_[i].id == g.nodes_[i - 1].id) {
            throw ValidationError("duplicate node id: " + g.nodes_[i].id);
        }
    }

    std::unordered_map<std::string, int> index;
    index.reserve(g.nodes_.size());
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
        index[g.nodes_[i].id] = static_cast<int>(i);
        g.node_vectors_.add(g.nodes_[i].lon, g.nodes_[i].lat);
    }

    std::unordered_set<std::string> edge_ids;
    for (const auto& je : doc.at("edges")) {
        Edge e;
        e.id = require_string(je, "id", "edge");
        const std::string where = "edge " + e.id;
        if (!edge_ids.insert(e.id).second) {
            throw ValidationError("duplicate edge id: " + e.id);
        }
        e.from = require_string(je, "from", where);
        e.to = require_string(je, "to", where);
        e.length_m = require_number(je, "length_m", where);
        e.speed_kmh = require_number(je, "speed_kmh", where);
        if (!index.count(e.from)) {
            throw ValidationError(where + ": unknown endpoint '" + e.from + "'");
        }
        if (!index.count(e.to)) {
            throw ValidationError(where + ": unknown endpoint '" + e.to + "'");
        }
        if (!(e.length_m > 0.0) || !std::isfinite(e.length_m)) {
            throw ValidationError(where + ": length_m must be finite and > 0");
        }
        if (!(e.speed_kmh > 0.0) || !std::isfinite(e.speed_kmh)) {
            throw ValidationError(where + ": speed_kmh must be finite and > 0");
        }
        if (je.contains("time_s")) {
            e.time_s = require_number(je, "time_s", where);
        } else {
            e.time_s = e.length_m / (e.speed_kmh / 3.6);
        }
        if (je.contains("co2_g")) {
            e.co2_g = require_number(je, "co2_g", where);
        } else {
            e.co2_g = co2_edge_weight(e.length_m, e.speed_kmh, params);
        }
        if (!(e.time_s > 0.0) || !std::isfinite(e.time_s)) {
            throw ValidationError(where + ": time_s must be finite and > 0");
        }
        if (e.co2_g < 0.0 || !std::isfinite(e.co2_g)) {
            throw ValidationError(where + ": co2_g must be finite and >= 0");
        }
        g.edges_.push_back(std::move(e));
    }

    g.adjacency_.assign(g.nodes_.size(), {});
    g.edge_from_.resize(g.edges_.size());
    g.edge_to_.resize(g.edges_.size());
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        const Edge& e = g.edges_[i];
        g.edge_index_[e.id] = static_cast<int>(i);
        g.edge_from_[i] = index.at(e.from);
        g.edge_to_[i] = index.at(e.to);
        g.adjacency_[g.edge_from_[i]].push_back(static_cast<int>(i));
        g.max_time_s_ = std::max(g.max_time_s_, e.time_s);
        g.max_co2_g_ = std::max(g.max_co2_g_, e.co2_g);
    }
    for (auto& out : g.adjacency_) {
        std::sort(out.begin(), out.end(), [&g](int a, int b) {
            const Edge& ea = g.edges_[a];
            const Edge& eb = g.edges_[b];
            if (ea.to != eb.to) return ea.to < eb.to;
            return ea.id < eb.id;
        });
    }
    return g;
}

bool Graph::has_node(const std::string& id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                     [](const Node& n, const std::string& key) {
                                         return n.id < key;
                                     });
    return it != nodes_.end() && it->id == id;
}

int Graph::edge_index(const std::string& id) const {
    const auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw Error("unknown edge: " + id);
    return it->second;
}

int Graph::node_index(const std::string& id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                     [](const Node& n, const std::string& key) {
                                         return n.id < key;
                                     });
    if (it == nodes_.end() || it->id != id) {
        throw UnknownNodeError("unknown node: " + id);
    }
    return static_cast<int>(it - nodes_.begin());
}

std::string Graph::nearest_node(double lon, double lat) const {
    if (nodes_.empty()) throw EmptyGraphError("nearest_node on empty graph");
    // Nodes are sorted by id, so the lowest-index tie is the
    // lexicographically smallest id.
    const std::size_t idx = argmin_chord_sq(node_vectors_, to_unit_vector(lon, lat));
    return nodes_[idx].id;
}

}  // namespace pave
