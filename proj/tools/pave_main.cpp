// SPDX-License-Identifier: Apache-2.0
//
// pave CLI: route planning, task classification, and the scenario
// benchmark harness.

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pave/bench.hpp"
#include "pave/errors.hpp"
#include "pave/orchestrator.hpp"
#include "pave/tasking.hpp"

namespace {

pave::BackendConfig backend_config(const std::string& backend, const std::string& fixtures) {
    using pave::BackendKind;
    BackendKind kind;
    if (backend == "stub") {
        kind = BackendKind::Stub;
    } else if (backend == "replay") {
        kind = BackendKind::Replay;
    } else if (backend == "http") {
        kind = BackendKind::Http;
    } else {
        throw pave::PreconditionError("unknown backend: " + backend);
    }
    auto cfg = pave::BackendConfig::from_env(kind);
    if (!fixtures.empty()) cfg.fixture_dir = fixtures;
    return cfg;
}

pave::EvaluatorMode mode_from(const std::string& mode) {
    if (mode == "llm") return pave::EvaluatorMode::Llm;
    if (mode == "det") return pave::EvaluatorMode::Deterministic;
    throw pave::PreconditionError("unknown mode: " + mode);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw pave::WriteError("cannot write " + path);
    out << content;
}

std::vector<pave::AvoidRule> avoid_rules(const std::vector<std::string>& nodes,
                                         const std::vector<std::string>& tags) {
    std::vector<pave::AvoidRule> rules;
    for (const auto& n : nodes) rules.push_back({pave::AvoidRule::Kind::Node, n});
    for (const auto& t : tags) rules.push_back({pave::AvoidRule::Kind::Tag, t});
    return rules;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAVe: personalized agentic vehicular routing"};
    app.require_subcommand(1);

    // --- route ---
    auto* route = app.add_subcommand("route", "Plan a route through the full pipeline");
    std::string net_path, poi_path, from, to, out_path, geojson_path;
    std::string mode = "det", backend = "stub", fixtures;
    std::vector<std::string> tasks, prefers, avoid_nodes, avoid_tags;
    int k = 2;
    double radius_m = pave::kDefaultRadiusM;
    route->add_option("--net", net_path, "Network file")->required();
    route->add_option("--pois", poi_path, "POI file")->required();
    route->add_option("--from", from, "Origin node id")->required();
    route->add_option("--to", to, "Destination node id")->required();
    route->add_option("--task", tasks, "Task text (repeatable)");
    route->add_option("--prefer", prefers, "Preference text (repeatable)");
    route->add_option("--avoid-node", avoid_nodes, "Node id to avoid (repeatable)");
    route->add_option("--avoid-tag", avoid_tags, "key=value POI tag to avoid (repeatable)");
    route->add_option("--k", k, "Number of candidate routes");
    route->add_option("--mode", mode, "Evaluator mode: llm|det");
    route->add_option("--backend", backend, "LLM backend: stub|replay|http");
    route->add_option("--fixtures", fixtures, "Fixture dir for the replay backend");
    route->add_option("--radius-m", radius_m, "POI query radius in meters");
    route->add_option("--out", out_path, "Write the final plan as JSON");
    route->add_option("--geojson", geojson_path, "Write the final route as GeoJSON");

    // --- classify ---
    auto* classify = app.add_subcommand("classify", "Classify tasks without routing");
    std::vector<std::string> classify_tasks_arg;
    std::string classify_backend = "stub", classify_fixtures;
    classify->add_option("--task", classify_tasks_arg, "Task text (repeatable)")->required();
    classify->add_option("--backend", classify_backend, "LLM backend: stub|replay|http");
    classify->add_option("--fixtures", classify_fixtures, "Fixture dir for the replay backend");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "Run the scenario benchmark suite");
    std::string suite_dir, bench_ks, bench_mode = "det", bench_backend = "stub",
                bench_fixtures, bench_out;
    bench->add_option("--suite", suite_dir, "Suite directory")->required();
    bench->add_option("--k", bench_ks, "Comma-separated k values (default: scenario k)");
    bench->add_option("--mode", bench_mode, "Evaluator mode: det|llm");
    bench->add_option("--backend", bench_backend, "LLM backend: stub|replay|http");
    bench->add_option("--fixtures", bench_fixtures, "Fixture dir for the replay backend");
    bench->add_option("--out", bench_out, "Write the report CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*route) {
            const auto graph = pave::Graph::load(net_path);
            const auto cache = pave::PoiCache::load(poi_path, graph);
            auto client = pave::make_backend(backend_config(backend, fixtures));

            pave::PlanRequest req;
            req.origin = from;
            req.destination = to;
            req.tasks = tasks;
            req.preferences = prefers;
            req.avoid = avoid_rules(avoid_nodes, avoid_tags);
            req.k = k;
            req.evaluator_mode = mode_from(mode);
            req.radius_m = radius_m;
            // interactive runs stamp the dossier with the wall clock
            const std::time_t now = std::time(nullptr);
            char hhmm[8];
            std::strftime(hhmm, sizeof hhmm, "%H:%M", std::localtime(&now));
            req.scenario_context.time_of_day = hhmm;
            req.scenario_context.traffic = "LOW";

            const auto plan = pave::plan(req, graph, cache, *client);
            std::cout << "chosen route " << plan.decision.chosen_route_id
                      << (plan.recalculated ? " (recalculated via waypoint)" : "") << "\n"
                      << "  nodes: ";
            for (const auto& n : plan.final_route.nodes) std::cout << n << ' ';
            std::cout << "\n  total: " << plan.final_route.total_time_s << " s, "
                      << plan.final_route.total_co2_g << " g CO2\n"
                      << "  why: " << plan.decision.justification << "\n";
            if (!out_path.empty()) {
                write_file(out_path, pave::final_plan_to_json(plan).dump(2) + "\n");
            }
            if (!geojson_path.empty()) {
                write_file(geojson_path,
                           pave::route_to_geojson(plan.final_route, graph).dump(2) + "\n");
            }
        } else if (*classify) {
            auto client =
                pave::make_backend(backend_config(classify_backend, classify_fixtures));
            nlohmann::json out = nlohmann::json::array();
            for (const auto& t : pave::classify_tasks(*client, classify_tasks_arg)) {
                out.push_back(pave::classified_task_to_json(t));
            }
            std::cout << out.dump(2) << "\n";
        } else if (*bench) {
            const auto graph = pave::Graph::load(suite_dir + "/network.json");
            const auto cache = pave::PoiCache::load(suite_dir + "/pois.json", graph);
            const auto specs = pave::load_suite(suite_dir + "/scenarios");
            auto client = pave::make_backend(backend_config(bench_backend, bench_fixtures));
            const auto mode_v = mode_from(bench_mode);

            std::vector<pave::BenchReport> reports;
            if (bench_ks.empty()) {
                reports.push_back(pave::run_suite(specs, graph, cache, *client, mode_v));
            } else {
                std::vector<int> ks;
                std::stringstream ss(bench_ks);
                std::string item;
                while (std::getline(ss, item, ',')) ks.push_back(std::stoi(item));
                reports = pave::k_sweep(specs, graph, cache, *client, mode_v, ks);
            }
            const std::string csv = pave::render_report_csv(reports);
            std::cout << csv;
            if (!bench_out.empty()) write_file(bench_out, csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
