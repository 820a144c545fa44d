// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pave/orchestrator.hpp"

namespace pave {

enum class Family { Simple, Urgency, Avoidance, Efficiency };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct ScenarioSpec {
    std::string name;
    Family family = Family::Simple;
    std::string origin;
    std::string destination;
    std::vector<std::string> tasks;
    std::vector<std::string> preferences;
    std::vector<AvoidRule> avoid;
    ScenarioContext context;
    int repetitions = 3;
    int k = 2;
};

ScenarioSpec scenario_from_json(const nlohmann::json& j);
ScenarioSpec load_scenario(const std::string& path);
/// All *.json scenarios in a directory, sorted by filename.
std::vector<ScenarioSpec> load_suite(const std::string& dir);

struct TrialResult {
    std::string scenario;
    int repetition = 0;
    int chosen_route_id = -1;
    int oracle_route_id = -1;
    bool route_correct = false;
    bool tasks_completed = false;
    Route final_route;
    std::string error;  // empty when the trial ran clean
};

struct FamilyStats {
    std::string family;  // family name or "overall"
    double accuracy_pct = 0.0;
    double completeness_pct = 0.0;
    int n_trials = 0;

    bool operator==(const FamilyStats&) const = default;
};

struct BenchReport {
    int k = 0;
    std::vector<FamilyStats> rows;
    std::vector<TrialResult> trials;  // not part of the CSV
};

/// Ground-truth best candidate id, by brute-force application of the
/// family rule over the same candidate set the agent sees. Tasks are
/// classified with the offline keyword rules.
int oracle_best(const Graph& graph, const PoiCache& cache, const ScenarioSpec& spec);

/// Runs spec.repetitions independent plan() trials. Errors score as
/// incorrect and incomplete rather than aborting.
std::vector<TrialResult> run_scenario(const ScenarioSpec& spec, const Graph& graph,
                                      const PoiCache& cache, Backend& client,
                                      EvaluatorMode mode);

/// (accuracy_pct, completeness_pct), both rounded to two decimals with
/// round-half-up.
std::pair<double, double> metrics(const std::vector<TrialResult>& trials);

BenchReport run_suite(const std::vector<ScenarioSpec>& specs, const Graph& graph,
                      const PoiCache& cache, Backend& client, EvaluatorMode mode,
                      std::optional<int> k_override = std::nullopt);

std::vector<BenchReport> k_sweep(const std::vector<ScenarioSpec>& specs, const Graph& graph,
                                 const PoiCache& cache, Backend& client, EvaluatorMode mode,
                                 const std::vector<int>& ks = {1, 3, 5, 10, 20});

/// CSV with columns k,family,accuracy_pct,completeness_pct,n_trials.
std::string render_report_csv(const std::vector<BenchReport>& reports);
/// Inverse of render_report_csv (trial tables are not round-tripped).
std::vector<BenchReport> parse_report_csv(const std::string& csv);

}  // namespace pave
