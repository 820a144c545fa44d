// SPDX-License-Identifier: Apache-2.0
#include "pave/enrichment.hpp"

#include <algorithm>
#include <limits>

#include "pave/errors.hpp"

namespace pave {

TagFilter avoid_tag_filter(const AvoidRule& rule) {
    if (rule.kind != AvoidRule::Kind::Tag) {
        throw PreconditionError("avoid_tag_filter: rule is not a TAG rule");
    }
    const auto eq = rule.value.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= rule.value.size()) {
        throw ParseError("avoid TAG rule must be 'key=value', got '" + rule.value + "'");
    }
    return {{rule.value.substr(0, eq), rule.value.substr(eq + 1)}};
}

RouteAnnotation annotate_route(const Route& route, const Graph& graph, const PoiCache& cache,
                               const std::vector<ClassifiedTask>& tasks, double radius_m,
                               const std::vector<AvoidRule>& avoid) {
    RouteAnnotation ann;
    ann.route_id = route.id;
    ann.nodes = route.nodes;
    ann.total_time_s = route.total_time_s;
    ann.total_co2_g = route.total_co2_g;

    std::vector<TagFilter> hit_filters;
    for (const auto& t : tasks) {
        if (t.priority == Priority::Normal) hit_filters.push_back(t.osm_tags);
    }
    for (const auto& rule : avoid) {
        if (rule.kind == AvoidRule::Kind::Tag) hit_filters.push_back(avoid_tag_filter(rule));
    }

    std::map<std::string, PoiHitRecord> by_id;
    for (const auto& filter : hit_filters) {
        for (const auto& match : cache.query_radius(route, graph, radius_m, filter)) {
            PoiHitRecord rec;
            rec.poi_id = match.poi->id;
            rec.name = match.poi->name;
            rec.tags = match.poi->tags;
            rec.distance_m = match.distance_m;
            rec.linked_node = match.poi->linked_node;
            by_id.emplace(rec.poi_id, std::move(rec));
        }
    }
    for (auto& [id, rec] : by_id) ann.poi_hits.push_back(rec);
    std::sort(ann.poi_hits.begin(), ann.poi_hits.end(),
              [](const PoiHitRecord& a, const PoiHitRecord& b) {
                  if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
                  return a.poi_id < b.poi_id;
              });

    const bool any_urgent = std::any_of(tasks.begin(), tasks.end(), [](const ClassifiedTask& t) {
        return t.priority == Priority::Urgent;
    });
    if (any_urgent && !route.nodes.empty()) {
        const auto times = one_to_all_time(graph, route.nodes.front());
        double best_time = std::numeric_limits<double>::infinity();
        const Poi* best_poi = nullptr;
        for (const auto& t : tasks) {
            if (t.priority != Priority::Urgent) continue;
            for (const auto& match : cache.query_radius(route, graph, radius_m, t.osm_tags)) {
                const double time = times[graph.node_index(match.poi->linked_node)];
                if (!std::isfinite(time)) continue;
                if (time < best_time ||
                    (time == best_time && best_poi && match.poi->id < best_poi->id)) {
                    best_time = time;
                    best_poi = match.poi;
                }
            }
        }
        if (best_poi) {
            ann.urgent_poi_time_s = best_time;
            ann.urgent_poi_id = best_poi->id;
            ann.urgent_poi_node = best_poi->linked_node;
        }
    }
    return ann;
}

Dossier build_dossier(std::vector<RouteAnnotation> annotations, UserContext user_context,
                      ScenarioContext scenario_context, std::vector<ClassifiedTask> tasks) {
    if (annotations.empty()) throw PreconditionError("build_dossier: annotations must be nonempty");
    Dossier d;
    d.routes = std::move(annotations);
    d.user_context = std::move(user_context);
    d.scenario_context = std::move(scenario_context);
    d.tasks = std::move(tasks);
    return d;
}

namespace {

nlohmann::json hit_to_json(const PoiHitRecord& h) {
    return {{"poi_id", h.poi_id},
            {"name", h.name},
            {"tags", h.tags},
            {"distance_m", h.distance_m},
            {"linked_node", h.linked_node}};
}

PoiHitRecord hit_from_json(const nlohmann::json& j) {
    PoiHitRecord h;
    h.poi_id = j.at("poi_id").get<std::string>();
    h.name = j.at("name").get<std::string>();
    for (const auto& [k, v] : j.at("tags").items()) h.tags[k] = v.get<std::string>();
    h.distance_m = j.at("distance_m").get<double>();
    h.linked_node = j.at("linked_node").get<std::string>();
    return h;
}

nlohmann::json annotation_to_json(const RouteAnnotation& a) {
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& h : a.poi_hits) hits.push_back(hit_to_json(h));
    nlohmann::json j{{"route_id", a.route_id},
                     {"nodes", a.nodes},
                     {"total_time_s", a.total_time_s},
                     {"total_co2_g", a.total_co2_g},
                     {"poi_hits", hits}};
    j["urgent_poi_time_s"] =
        a.urgent_poi_time_s ? nlohmann::json(*a.urgent_poi_time_s) : nlohmann::json(nullptr);
    j["urgent_poi_id"] =
        a.urgent_poi_id ? nlohmann::json(*a.urgent_poi_id) : nlohmann::json(nullptr);
    j["urgent_poi_node"] =
        a.urgent_poi_node ? nlohmann::json(*a.urgent_poi_node) : nlohmann::json(nullptr);
    return j;
}

RouteAnnotation annotation_from_json(const nlohmann::json& j) {
    RouteAnnotation a;
    a.route_id = j.at("route_id").get<int>();
    a.nodes = j.at("nodes").get<std::vector<std::string>>();
    a.total_time_s = j.at("total_time_s").get<double>();
    a.total_co2_g = j.at("total_co2_g").get<double>();
    for (const auto& h : j.at("poi_hits")) a.poi_hits.push_back(hit_from_json(h));
    if (j.contains("urgent_poi_time_s") && !j.at("urgent_poi_time_s").is_null()) {
        a.urgent_poi_time_s = j.at("urgent_poi_time_s").get<double>();
    }
    if (j.contains("urgent_poi_id") && !j.at("urgent_poi_id").is_null()) {
        a.urgent_poi_id = j.at("urgent_poi_id").get<std::string>();
    }
    if (j.contains("urgent_poi_node") && !j.at("urgent_poi_node").is_null()) {
        a.urgent_poi_node = j.at("urgent_poi_node").get<std::string>();
    }
    return a;
}

std::string avoid_kind_name(AvoidRule::Kind k) {
    return k == AvoidRule::Kind::Node ? "NODE" : "TAG";
}

AvoidRule::Kind avoid_kind_from_name(const std::string& name) {
    if (name == "NODE") return AvoidRule::Kind::Node;
    if (name == "TAG") return AvoidRule::Kind::Tag;
    throw ParseError("invalid avoid kind: " + name);
}

}  // namespace

nlohmann::json dossier_to_json(const Dossier& d) {
    nlohmann::json avoid = nlohmann::json::array();
    for (const auto& r : d.user_context.avoid) {
        avoid.push_back({{"kind", avoid_kind_name(r.kind)}, {"value", r.value}});
    }
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : d.tasks) tasks.push_back(classified_task_to_json(t));
    nlohmann::json routes = nlohmann::json::array();
    for (const auto& a : d.routes) routes.push_back(annotation_to_json(a));

    return {{"user_context",
             {{"preferences", d.user_context.preferences}, {"avoid", avoid}}},
            {"scenario_context",
             {{"time_of_day", d.scenario_context.time_of_day},
              {"traffic", d.scenario_context.traffic},
              {"notes", d.scenario_context.notes}}},
            {"tasks", tasks},
            {"routes", routes}};
}

Dossier dossier_from_json(const nlohmann::json& j) {
    Dossier d;
    const auto& uc = j.at("user_context");
    d.user_context.preferences = uc.at("preferences").get<std::vector<std::string>>();
    for (const auto& r : uc.at("avoid")) {
        d.user_context.avoid.push_back(
            AvoidRule{avoid_kind_from_name(r.at("kind").get<std::string>()),
                      r.at("value").get<std::string>()});
    }
    const auto& sc = j.at("scenario_context");
    d.scenario_context.time_of_day = sc.at("time_of_day").get<std::string>();
    d.scenario_context.traffic = sc.at("traffic").get<std::string>();
    d.scenario_context.notes = sc.at("notes").get<std::string>();
    for (const auto& t : j.at("tasks")) d.tasks.push_back(classified_task_from_json(t));
    for (const auto& r : j.at("routes")) d.routes.push_back(annotation_from_json(r));
    if (d.routes.empty()) throw ParseError("dossier must contain at least one route");
    return d;
}

}  // namespace pave
