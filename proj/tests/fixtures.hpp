// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures. T3 is the triangle network from the module
// examples: A->B->C at 36 km/h plus a direct A->C edge. B sits ~550 m
// north of the A-C line, so a POI at B is inside a 300 m radius of
// route [A,B,C] but outside it for route [A,C].
#pragma once

#include "json.hpp"
#include "pave/poi_cache.hpp"
#include "pave/road_graph.hpp"

namespace fixtures {

inline nlohmann::json t3_json() {
    return nlohmann::json::parse(R"({
      "nodes": [
        {"id": "A", "lon": 6.100, "lat": 49.600},
        {"id": "B", "lon": 6.105, "lat": 49.605},
        {"id": "C", "lon": 6.110, "lat": 49.600}
      ],
      "edges": [
        {"id": "AB", "from": "A", "to": "B", "length_m": 1000, "speed_kmh": 36},
        {"id": "BC", "from": "B", "to": "C", "length_m": 1000, "speed_kmh": 36},
        {"id": "AC", "from": "A", "to": "C", "length_m": 2500, "speed_kmh": 36}
      ]
    })");
}

inline pave::Graph t3() { return pave::Graph::from_json(t3_json()); }

// T3 with explicit CO2 weights that favor the direct edge, so the time
// and CO2 optima differ.
inline pave::Graph t3_green_direct() {
    auto doc = t3_json();
    doc["edges"][0]["co2_g"] = 100.0;
    doc["edges"][1]["co2_g"] = 100.0;
    doc["edges"][2]["co2_g"] = 150.0;
    return pave::Graph::from_json(doc);
}

inline nlohmann::json fuel_at_b_json() {
    return nlohmann::json::parse(R"([
      {"id": "fuel1", "name": "Station B", "lon": 6.105, "lat": 49.605,
       "tags": {"amenity": "fuel"}}
    ])");
}

inline pave::PoiCache fuel_at_b(const pave::Graph& g) {
    return pave::PoiCache::from_json(fuel_at_b_json(), g);
}

}  // namespace fixtures
