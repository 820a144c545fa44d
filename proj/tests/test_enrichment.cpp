// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pave/enrichment.hpp"
#include "pave/errors.hpp"

using namespace pave;

namespace {

ClassifiedTask task(Priority p, std::map<std::string, std::string> tags,
                    const std::string& text = "task") {
    ClassifiedTask t;
    t.task = text;
    t.priority = p;
    t.osm_tags = std::move(tags);
    return t;
}

}  // namespace

TEST_CASE("no tasks: empty hits, absent urgent fields") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    const Route r = shortest_path(g, "A", "C", Objective::time());
    const RouteAnnotation ann = annotate_route(r, g, cache, {}, 300.0);
    CHECK(ann.poi_hits.empty());
    CHECK_FALSE(ann.urgent_poi_time_s.has_value());
    CHECK_FALSE(ann.urgent_poi_id.has_value());
    CHECK(ann.nodes == r.nodes);
    CHECK(ann.total_time_s == r.total_time_s);
}

TEST_CASE("urgent fuel task on T3") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    const auto tasks = std::vector<ClassifiedTask>{
        task(Priority::Urgent, {{"amenity", "fuel"}}, "I'm running out of gas")};

    const Route abc = shortest_path(g, "A", "C", Objective::time());
    const RouteAnnotation on_route = annotate_route(abc, g, cache, tasks, 300.0);
    REQUIRE(on_route.urgent_poi_time_s.has_value());
    CHECK(*on_route.urgent_poi_time_s == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(*on_route.urgent_poi_id == "fuel1");
    CHECK(*on_route.urgent_poi_node == "B");

    // the direct route stays ~550 m away from the station
    const Route ac = shortest_path(g, "A", "C", Objective::time(), {"B"});
    const RouteAnnotation off_route = annotate_route(ac, g, cache, tasks, 300.0);
    CHECK_FALSE(off_route.urgent_poi_time_s.has_value());
    CHECK_FALSE(off_route.urgent_poi_id.has_value());
    CHECK_FALSE(off_route.urgent_poi_node.has_value());
}

TEST_CASE("urgent time is bounded by the waypoint completion") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    const auto tasks = std::vector<ClassifiedTask>{task(Priority::Urgent, {{"amenity", "fuel"}})};
    const Route abc = shortest_path(g, "A", "C", Objective::time());
    const RouteAnnotation ann = annotate_route(abc, g, cache, tasks, 300.0);
    REQUIRE(ann.urgent_poi_time_s.has_value());
    const Route completion = concat_via_waypoint(g, "A", *ann.urgent_poi_node, "C");
    CHECK(*ann.urgent_poi_time_s >= 0.0);
    CHECK(*ann.urgent_poi_time_s <= completion.total_time_s);
}

TEST_CASE("poi_hits cover NORMAL tasks and avoid tags, sorted by distance") {
    const Graph g = fixtures::t3();
    auto doc = nlohmann::json::parse(R"([
      {"id": "park1", "name": "Park", "lon": 6.1049, "lat": 49.6052,
       "tags": {"leisure": "park"}},
      {"id": "club1", "name": "Club", "lon": 6.1051, "lat": 49.6048,
       "tags": {"amenity": "nightclub"}},
      {"id": "far1", "name": "Far park", "lon": 6.15, "lat": 49.65,
       "tags": {"leisure": "park"}}
    ])");
    const PoiCache cache = PoiCache::from_json(doc, g);
    const auto tasks = std::vector<ClassifiedTask>{task(Priority::Normal, {{"leisure", "park"}})};
    const std::vector<AvoidRule> avoid{{AvoidRule::Kind::Tag, "amenity=nightclub"}};

    const Route abc = shortest_path(g, "A", "C", Objective::time());
    const RouteAnnotation ann = annotate_route(abc, g, cache, tasks, 300.0, avoid);
    REQUIRE(ann.poi_hits.size() == 2);  // park1 and club1; far1 is out of radius
    for (std::size_t i = 1; i < ann.poi_hits.size(); ++i) {
        CHECK(ann.poi_hits[i - 1].distance_m <= ann.poi_hits[i].distance_m);
    }
    const bool has_club = std::any_of(ann.poi_hits.begin(), ann.poi_hits.end(),
                                      [](const PoiHitRecord& h) { return h.poi_id == "club1"; });
    CHECK(has_club);
    CHECK_FALSE(ann.urgent_poi_time_s.has_value());
}

TEST_CASE("poi_hits equal the brute-force radius filter") {
    std::mt19937 rng(61);
    const Graph g = Graph::from_json(oracles::random_network(rng, 10, 25));
    const PoiCache cache = PoiCache::from_json(oracles::random_pois(rng, 150), g);
    const Route r = shortest_path(g, g.nodes().front().id, g.nodes().back().id,
                                  Objective::time());
    const auto tasks = std::vector<ClassifiedTask>{
        task(Priority::Normal, {{"amenity", "fuel"}}),
        task(Priority::Normal, {{"leisure", "park"}}),
    };
    const RouteAnnotation ann = annotate_route(r, g, cache, tasks, 2000.0);

    auto expect_fuel = oracles::brute_radius(cache, g, r.nodes, 2000.0, {{"amenity", "fuel"}});
    auto expect_park = oracles::brute_radius(cache, g, r.nodes, 2000.0, {{"leisure", "park"}});
    std::vector<std::string> expected = expect_fuel;
    expected.insert(expected.end(), expect_park.begin(), expect_park.end());
    std::sort(expected.begin(), expected.end());

    std::vector<std::string> got;
    for (const auto& h : ann.poi_hits) got.push_back(h.poi_id);
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
}

TEST_CASE("dossier serialization is canonical and round-trips") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    const auto tasks = std::vector<ClassifiedTask>{
        task(Priority::Urgent, {{"amenity", "fuel"}}, "I'm running out of gas")};

    const CandidateSet set = k_candidates(g, "A", "C", 2);
    std::vector<RouteAnnotation> anns;
    for (const Route& r : set.routes) anns.push_back(annotate_route(r, g, cache, tasks, 300.0));

    UserContext uc;
    uc.preferences = {"scenic if possible"};
    uc.avoid.push_back({AvoidRule::Kind::Node, "X"});
    ScenarioContext sc;
    sc.time_of_day = "08:30";
    sc.traffic = "MEDIUM";
    sc.notes = "school season";

    const Dossier d = build_dossier(anns, uc, sc, tasks);
    const auto j1 = dossier_to_json(d);
    const auto j2 = dossier_to_json(build_dossier(anns, uc, sc, tasks));
    CHECK(j1.dump() == j2.dump());

    // bit-exact top-level keys
    std::vector<std::string> keys;
    for (const auto& [k, v] : j1.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"routes", "scenario_context", "tasks", "user_context"});

    const Dossier back = dossier_from_json(j1);
    CHECK(dossier_to_json(back).dump() == j1.dump());
}

TEST_CASE("build_dossier rejects an empty annotation list") {
    CHECK_THROWS_AS(build_dossier({}, {}, {}, {}), PreconditionError);
}

TEST_CASE("avoid tag rule parsing") {
    CHECK(avoid_tag_filter({AvoidRule::Kind::Tag, "amenity=fuel"}) ==
          TagFilter{{"amenity", "fuel"}});
    CHECK_THROWS_AS(avoid_tag_filter({AvoidRule::Kind::Tag, "no-equals"}), ParseError);
    CHECK_THROWS_AS(avoid_tag_filter({AvoidRule::Kind::Node, "B"}), PreconditionError);
}
