// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pave/pathfinding.hpp"
#include "pave/road_graph.hpp"

namespace pave {

inline constexpr double kDefaultRadiusM = 300.0;

struct Poi {
    std::string id;
    std::string name;
    double lon = 0.0;
    double lat = 0.0;
    std::map<std::string, std::string> tags;
    std::string linked_node;
};

/// key -> value pairs that must all match; an empty filter matches
/// every POI (ANY).
using TagFilter = std::map<std::string, std::string>;
inline const TagFilter kAnyTag{};

bool match_tags(const Poi& poi, const TagFilter& filter);

struct PoiMatch {
    const Poi* poi = nullptr;
    double distance_m = 0.0;
};

/// Tagged POIs snapped to their nearest graph node, with a uniform
/// lon/lat grid index for radius queries. The grid only prunes; every
/// result is re-checked with exact haversine distance. Immutable after
/// load.
class PoiCache {
  public:
    static PoiCache load(const std::string& path, const Graph& graph,
                         double cell_size_m = kDefaultRadiusM);
    static PoiCache from_json(const nlohmann::json& doc, const Graph& graph,
                              double cell_size_m = kDefaultRadiusM);

    const std::vector<Poi>& pois() const { return pois_; }
    const Poi* find(const std::string& id) const;

    /// POIs within radius_m of the nearest route node, tag-filtered,
    /// sorted by distance then id.
    std::vector<PoiMatch> query_radius(const Route& route, const Graph& graph,
                                       double radius_m, const TagFilter& filter) const;

  private:
    std::vector<Poi> pois_;
    UnitVectors vectors_;
    double cell_deg_ = 0.0;
    std::map<std::pair<long, long>, std::vector<int>> grid_;
    std::pair<long, long> min_cell_{0, 0};
    std::pair<long, long> max_cell_{-1, -1};
};

}  // namespace pave
