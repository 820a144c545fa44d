// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pave/bench.hpp"
#include "pave/errors.hpp"

using namespace pave;

namespace {

ScenarioSpec t3_urgency() {
    ScenarioSpec s;
    s.name = "t3-urgency";
    s.family = Family::Urgency;
    s.origin = "A";
    s.destination = "C";
    s.tasks = {"I'm running out of gas"};
    s.repetitions = 3;
    s.k = 2;
    return s;
}

}  // namespace

TEST_CASE("scenario files parse with defaults and validation") {
    const auto j = nlohmann::json::parse(R"({
      "name": "s1", "family": "AVOIDANCE", "origin": "A", "destination": "C",
      "avoid": [{"kind": "NODE", "value": "B"}],
      "context": {"time_of_day": "08:30", "traffic": "HIGH", "notes": "rush hour"}
    })");
    const ScenarioSpec s = scenario_from_json(j);
    CHECK(s.family == Family::Avoidance);
    CHECK(s.repetitions == 3);
    CHECK(s.k == 2);
    CHECK(s.avoid.size() == 1);
    CHECK(s.context.traffic == "HIGH");

    auto bad = j;
    bad["family"] = "WEIRD";
    CHECK_THROWS_AS(scenario_from_json(bad), ParseError);
    auto bad_rep = j;
    bad_rep["repetitions"] = 0;
    CHECK_THROWS_AS(scenario_from_json(bad_rep), ParseError);
}

TEST_CASE("oracle_best applies the family rules on T3") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);

    // urgency: the fuel POI at B makes [A,B,C] the ground truth
    CHECK(oracle_best(g, cache, t3_urgency()) == 0);

    // efficiency: plain argmin over time
    ScenarioSpec eff = t3_urgency();
    eff.family = Family::Efficiency;
    eff.tasks.clear();
    CHECK(oracle_best(g, cache, eff) == 0);

    // avoidance of B: the direct route wins
    ScenarioSpec avoid = eff;
    avoid.family = Family::Avoidance;
    avoid.avoid.push_back({AvoidRule::Kind::Node, "B"});
    const CandidateSet set = k_candidates(g, "A", "C", 2);
    const int id = oracle_best(g, cache, avoid);
    CHECK(set.routes[static_cast<std::size_t>(id)].nodes == std::vector<std::string>{"A", "C"});
}

TEST_CASE("oracle_best is invariant to uniform time rescaling") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    const int base = oracle_best(g, cache, t3_urgency());

    for (const double c : {0.5, 3.0, 10.0}) {
        auto doc = fixtures::t3_json();
        for (auto& e : doc["edges"]) {
            const double t = e.contains("time_s")
                                 ? e["time_s"].get<double>()
                                 : e["length_m"].get<double>() / (e["speed_kmh"].get<double>() / 3.6);
            e["time_s"] = t * c;
        }
        const Graph scaled = Graph::from_json(doc);
        const PoiCache scaled_cache = fixtures::fuel_at_b(scaled);
        CHECK(oracle_best(scaled_cache.pois().empty() ? g : scaled, scaled_cache, t3_urgency()) ==
              base);
    }
}

TEST_CASE("run_scenario produces one result per repetition") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    auto stub = make_backend(BackendConfig{});

    const auto trials = run_scenario(t3_urgency(), g, cache, *stub,
                                     EvaluatorMode::Deterministic);
    REQUIRE(trials.size() == 3);
    for (const auto& t : trials) {
        CHECK(t.error.empty());
        CHECK(t.route_correct);
        CHECK(t.tasks_completed);
        CHECK(t.oracle_route_id == 0);
    }
}

TEST_CASE("a scenario with no tasks is vacuously complete") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    auto stub = make_backend(BackendConfig{});
    ScenarioSpec eff = t3_urgency();
    eff.family = Family::Efficiency;
    eff.tasks.clear();
    eff.repetitions = 2;
    const auto trials = run_scenario(eff, g, cache, *stub, EvaluatorMode::Deterministic);
    REQUIRE(trials.size() == 2);
    for (const auto& t : trials) CHECK(t.tasks_completed);
}

TEST_CASE("broken scenarios score as failures instead of aborting") {
    const Graph g = fixtures::t3();
    const PoiCache cache = fixtures::fuel_at_b(g);
    auto stub = make_backend(BackendConfig{});
    ScenarioSpec broken = t3_urgency();
    broken.destination = "ZZ";  // unknown node
    const auto trials = run_scenario(broken, g, cache, *stub, EvaluatorMode::Deterministic);
    REQUIRE(trials.size() == 3);
    for (const auto& t : trials) {
        CHECK_FALSE(t.route_correct);
        CHECK_FALSE(t.tasks_completed);
        CHECK_FALSE(t.error.empty());
    }
}

TEST_CASE("metrics arithmetic matches the paper's table conventions") {
    std::vector<TrialResult> trials(12);
    for (int i = 0; i < 12; ++i) {
        trials[static_cast<std::size_t>(i)].route_correct = i < 11;
        trials[static_cast<std::size_t>(i)].tasks_completed = i < 9;
    }
    const auto [acc, comp] = metrics(trials);
    CHECK(acc == doctest::Approx(91.67).epsilon(1e-12));   // 11/12, round-half-up
    CHECK(comp == doctest::Approx(75.00).epsilon(1e-12));  // 9/12, Table 1 Avoidance accuracy

    std::vector<TrialResult> none(5);
    const auto [zacc, zcomp] = metrics(none);
    CHECK(zacc == 0.0);
    CHECK(zcomp == 0.0);

    CHECK_THROWS_AS(metrics({}), PreconditionError);
}

TEST_CASE("metrics are permutation invariant") {
    std::mt19937 rng(73);
    std::vector<TrialResult> trials(20);
    for (auto& t : trials) {
        t.route_correct = rng() % 2 == 0;
        t.tasks_completed = rng() % 3 == 0;
    }
    const auto base = metrics(trials);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(trials.begin(), trials.end(), rng);
        CHECK(metrics(trials) == base);
    }
}

TEST_CASE("report CSV renders and parses losslessly") {
    BenchReport r1;
    r1.k = 2;
    r1.rows = {{"SIMPLE", 100.0, 100.0, 12},
               {"URGENCY", 91.67, 58.33, 12},
               {"OVERALL", 95.83, 79.17, 24}};
    BenchReport r2;
    r2.k = 5;
    r2.rows = {{"SIMPLE", 75.0, 50.0, 12}, {"OVERALL", 75.0, 50.0, 12}};

    const std::string csv = render_report_csv({r1, r2});
    const auto parsed = parse_report_csv(csv);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].k == 2);
    CHECK(parsed[0].rows == r1.rows);
    CHECK(parsed[1].k == 5);
    CHECK(parsed[1].rows == r2.rows);

    CHECK_THROWS_AS(parse_report_csv("bad,header\n"), ParseError);
}

#ifdef PAVE_SUITE_DIR
TEST_CASE("bundled suite scores perfectly in both offline modes") {
    const Graph g = Graph::load(std::string(PAVE_SUITE_DIR) + "/network.json");
    const PoiCache cache = PoiCache::load(std::string(PAVE_SUITE_DIR) + "/pois.json", g);
    const auto specs = load_suite(std::string(PAVE_SUITE_DIR) + "/scenarios");
    REQUIRE(specs.size() == 16);

    auto stub = make_backend(BackendConfig{});
    for (const auto mode : {EvaluatorMode::Deterministic, EvaluatorMode::Llm}) {
        const BenchReport report = run_suite(specs, g, cache, *stub, mode);
        REQUIRE(report.trials.size() == 48);
        const auto& overall = report.rows.back();
        CHECK(overall.family == "OVERALL");
        CHECK(overall.accuracy_pct == 100.0);
        CHECK(overall.completeness_pct == 100.0);
        CHECK(overall.n_trials == 48);
    }
}

TEST_CASE("k sweep emits a well-formed byte-stable table") {
    const Graph g = Graph::load(std::string(PAVE_SUITE_DIR) + "/network.json");
    const PoiCache cache = PoiCache::load(std::string(PAVE_SUITE_DIR) + "/pois.json", g);
    const auto specs = load_suite(std::string(PAVE_SUITE_DIR) + "/scenarios");
    auto stub = make_backend(BackendConfig{});

    const auto single = k_sweep(specs, g, cache, *stub, EvaluatorMode::Deterministic, {1});
    REQUIRE(single.size() == 1);
    CHECK(single[0].k == 1);

    const std::vector<int> ks{1, 3};
    const auto a = render_report_csv(k_sweep(specs, g, cache, *stub, EvaluatorMode::Llm, ks));
    const auto b = render_report_csv(k_sweep(specs, g, cache, *stub, EvaluatorMode::Llm, ks));
    CHECK(a == b);
}
#endif
