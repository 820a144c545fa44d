// SPDX-License-Identifier: Apache-2.0
#include "pave/poi_cache.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "pave/errors.hpp"

namespace pave {

bool match_tags(const Poi& poi, const TagFilter& filter) {
    for (const auto& [k, v] : filter) {
        const auto it = poi.tags.find(k);
        if (it == poi.tags.end() || it->second != v) return false;
    }
    return true;
}

namespace {

// Meters per degree, conservative bounds for box pruning.
constexpr double kMetersPerDegLat = 110500.0;
constexpr double kMetersPerDegLon = 111320.0;

std::pair<long, long> cell_of(double lon, double lat, double cell_deg) {
    return {static_cast<long>(std::floor(lon / cell_deg)),
            static_cast<long>(std::floor(lat / cell_deg))};
}

}  // namespace

PoiCache PoiCache::load(const std::string& path, const Graph& graph, double cell_size_m) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open POI file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("POI file " + path + ": " + e.what());
    }
    return from_json(doc, graph, cell_size_m);
}

PoiCache PoiCache::from_json(const nlohmann::json& doc, const Graph& graph,
                             double cell_size_m) {
    if (graph.nodes().empty()) throw EmptyGraphError("load_pois: graph is empty");
    if (!doc.is_array()) throw ParseError("POI document must be a list");

    PoiCache cache;
    for (const auto& jp : doc) {
        Poi p;
        if (!jp.contains("id") || !jp.at("id").is_string()) {
            throw ParseError("poi: missing or non-string 'id'");
        }
        p.id = jp.at("id").get<std::string>();
        const std::string where = "poi " + p.id;
        if (!jp.contains("name") || !jp.at("name").is_string()) {
            throw ParseError(where + ": missing 'name'");
        }
        p.name = jp.at("name").get<std::string>();
        if (!jp.contains("lon") || !jp.at("lon").is_number() || !jp.contains("lat") ||
            !jp.at("lat").is_number()) {
            throw ParseError(where + ": missing numeric 'lon'/'lat'");
        }
        p.lon = jp.at("lon").get<double>();
        p.lat = jp.at("lat").get<double>();
        if (!jp.contains("tags") || !jp.at("tags").is_object() || jp.at("tags").empty()) {
            throw ParseError(where + ": 'tags' must be a nonempty object");
        }
        for (const auto& [k, v] : jp.at("tags").items()) {
            if (!v.is_string()) throw ParseError(where + ": tag '" + k + "' must be a string");
            p.tags[k] = v.get<std::string>();
        }
        p.linked_node = graph.nearest_node(p.lon, p.lat);
        cache.pois_.push_back(std::move(p));
    }
    std::sort(cache.pois_.begin(), cache.pois_.end(),
              [](const Poi& a, const Poi& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < cache.pois_.size(); ++i) {
        if (cache.pois_[i].id == cache.pois_[i - 1].id) {
            throw ParseError("duplicate poi id: " + cache.pois_[i].id);
        }
    }

    cache.cell_deg_ = cell_size_m / kMetersPerDegLon;
    for (std::size_t i = 0; i < cache.pois_.size(); ++i) {
        const Poi& p = cache.pois_[i];
        cache.vectors_.add(p.lon, p.lat);
        const auto cell = cell_of(p.lon, p.lat, cache.cell_deg_);
        if (cache.grid_.empty()) {
            cache.min_cell_ = cache.max_cell_ = cell;
        } else {
            cache.min_cell_.first = std::min(cache.min_cell_.first, cell.first);
            cache.min_cell_.second = std::min(cache.min_cell_.second, cell.second);
            cache.max_cell_.first = std::max(cache.max_cell_.first, cell.first);
            cache.max_cell_.second = std::max(cache.max_cell_.second, cell.second);
        }
        cache.grid_[cell].push_back(static_cast<int>(i));
    }
    return cache;
}

const Poi* PoiCache::find(const std::string& id) const {
    const auto it = std::lower_bound(pois_.begin(), pois_.end(), id,
                                     [](const Poi& p, const std::string& key) {
                                         return p.id < key;
                                     });
    if (it == pois_.end() || it->id != id) return nullptr;
    return &*it;
}

std::vector<PoiMatch> PoiCache::query_radius(const Route& route, const Graph& graph,
                                             double radius_m, const TagFilter& filter) const {
    if (radius_m <= 0.0) throw PreconditionError("query_radius: radius_m must be > 0");
    std::vector<PoiMatch> out;
    if (pois_.empty() || route.nodes.empty()) return out;

    // Grid pass: gather a candidate superset from the cells around each
    // route node, with a slack margin on the box. Boxes are clamped to
    // the occupied part of the grid; when a clamped box still spans
    // more cells than there are POIs, scanning everything is cheaper.
    std::vector<int> candidates;
    const double pad = radius_m * 1.001 + 5.0;
    for (const auto& node_id : route.nodes) {
        const Node& n = graph.node(node_id);
        const double dlat = pad / kMetersPerDegLat;
        const double coslat = std::max(std::cos(deg_to_rad(n.lat)), 0.05);
        const double dlon = pad / (kMetersPerDegLon * coslat) * 1.01;
        auto [cx0, cy0] = cell_of(n.lon - dlon, n.lat - dlat, cell_deg_);
        auto [cx1, cy1] = cell_of(n.lon + dlon, n.lat + dlat, cell_deg_);
        cx0 = std::max(cx0, min_cell_.first);
        cy0 = std::max(cy0, min_cell_.second);
        cx1 = std::min(cx1, max_cell_.first);
        cy1 = std::min(cy1, max_cell_.second);
        if (cx0 > cx1 || cy0 > cy1) continue;
        const long span = (cx1 - cx0 + 1) * (cy1 - cy0 + 1);
        if (span > static_cast<long>(pois_.size())) {
            candidates.resize(pois_.size());
            for (std::size_t i = 0; i < pois_.size(); ++i) candidates[i] = static_cast<int>(i);
            break;
        }
        for (long cx = cx0; cx <= cx1; ++cx) {
            for (long cy = cy0; cy <= cy1; ++cy) {
                const auto it = grid_.find({cx, cy});
                if (it == grid_.end()) continue;
                candidates.insert(candidates.end(), it->second.begin(), it->second.end());
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) return out;

    // Exact pass: minimum chord^2 from each candidate to the route
    // nodes, batched through the SIMD kernel. chord^2 is monotone in
    // distance, so the radius check is exact.
    UnitVectors gathered;
    for (const int pi : candidates) {
        gathered.x.push_back(vectors_.x[pi]);
        gathered.y.push_back(vectors_.y[pi]);
        gathered.z.push_back(vectors_.z[pi]);
    }
    std::vector<double> min_csq(candidates.size(), std::numeric_limits<double>::infinity());
    std::vector<double> buf(candidates.size());
    for (const auto& node_id : route.nodes) {
        const Vec3 q = graph.node_vectors().at(static_cast<std::size_t>(graph.node_index(node_id)));
        chord_sq(gathered, q, buf.data());
        for (std::size_t i = 0; i < buf.size(); ++i) min_csq[i] = std::min(min_csq[i], buf[i]);
    }

    const double thresh = chord_sq_from_radius_m(radius_m);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (min_csq[i] > thresh) continue;
        const Poi& p = pois_[candidates[i]];
        if (!match_tags(p, filter)) continue;
        out.push_back(PoiMatch{&p, radius_m_from_chord_sq(min_csq[i])});
    }
    std::sort(out.begin(), out.end(), [](const PoiMatch& a, const PoiMatch& b) {
        if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
        return a.poi->id < b.poi->id;
    });
    return out;
}

}  // namespace pave
