// SPDX-License-Identifier: Apache-2.0
#include "pave/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "pave/errors.hpp"
#include "pave/tasking.hpp"

namespace pave {

std::string family_name(Family f) {
    switch (f) {
        case Family::Simple: return "SIMPLE";
        case Family::Urgency: return "URGENCY";
        case Family::Avoidance: return "AVOIDANCE";
        case Family::Efficiency: return "EFFICIENCY";
    }
    return "SIMPLE";
}

Family family_from_name(const std::string& name) {
    if (name == "SIMPLE") return Family::Simple;
    if (name == "URGENCY") return Family::Urgency;
    if (name == "AVOIDANCE") return Family::Avoidance;
    if (name == "EFFICIENCY") return Family::Efficiency;
    throw ParseError("invalid scenario family: " + name);
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    ScenarioSpec s;
    s.name = j.at("name").get<std::string>();
    s.family = family_from_name(j.at("family").get<std::string>());
    s.origin = j.at("origin").get<std::string>();
    s.destination = j.at("destination").get<std::string>();
    if (j.contains("tasks")) s.tasks = j.at("tasks").get<std::vector<std::string>>();
    if (j.contains("preferences")) {
        s.preferences = j.at("preferences").get<std::vector<std::string>>();
    }
    if (j.contains("avoid")) {
        for (const auto& r : j.at("avoid")) {
            AvoidRule rule;
            const std::string kind = r.at("kind").get<std::string>();
            rule.kind = kind == "NODE" ? AvoidRule::Kind::Node : AvoidRule::Kind::Tag;
            if (kind != "NODE" && kind != "TAG") {
                throw ParseError("scenario " + s.name + ": invalid avoid kind " + kind);
            }
            rule.value = r.at("value").get<std::string>();
            s.avoid.push_back(rule);
        }
    }
    if (j.contains("context")) {
        const auto& c = j.at("context");
        if (c.contains("time_of_day")) s.context.time_of_day = c.at("time_of_day");
        if (c.contains("traffic")) s.context.traffic = c.at("traffic");
        if (c.contains("notes")) s.context.notes = c.at("notes");
    }
    if (j.contains("repetitions")) s.repetitions = j.at("repetitions").get<int>();
    if (j.contains("k")) s.k = j.at("k").get<int>();
    if (s.repetitions < 1) throw ParseError("scenario " + s.name + ": repetitions must be >= 1");
    if (s.k < 1) throw ParseError("scenario " + s.name + ": k must be >= 1");
    return s;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("scenario file " + path + ": " + e.what());
    }
    return scenario_from_json(doc);
}

std::vector<ScenarioSpec> load_suite(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<ScenarioSpec> specs;
    for (const auto& f : files) specs.push_back(load_scenario(f.string()));
    if (specs.empty()) throw ParseError("no scenario files in " + dir);
    return specs;
}

namespace {

bool tags_match_map(const std::map<std::string, std::string>& tags, const TagFilter& filter) {
    for (const auto& [k, v] : filter) {
        const auto it = tags.find(k);
        if (it == tags.end() || it->second != v) return false;
    }
    return true;
}

bool route_has_node(const Route& r, const std::string& node_id) {
    return std::find(r.nodes.begin(), r.nodes.end(), node_id) != r.nodes.end();
}

bool oracle_violates(const Route& r, const Graph& graph, const PoiCache& cache,
                     const std::vector<AvoidRule>& avoid, double radius_m) {
    for (const auto& rule : avoid) {
        if (rule.kind == AvoidRule::Kind::Node) {
            if (route_has_node(r, rule.value)) return true;
        } else {
            if (!cache.query_radius(r, graph, radius_m, avoid_tag_filter(rule)).empty()) {
                return true;
            }
        }
    }
    return false;
}

bool better_route_cost(const Route& a, const Route& b) {
    if (a.total_time_s != b.total_time_s) return a.total_time_s < b.total_time_s;
    if (a.total_co2_g != b.total_co2_g) return a.total_co2_g < b.total_co2_g;
    return a.id < b.id;
}

}  // namespace

int oracle_best(const Graph& graph, const PoiCache& cache, const ScenarioSpec& spec) {
    const double radius_m = kDefaultRadiusM;
    const auto tasks = stub_rules::classify(spec.tasks);
    const CandidateSet set = k_candidates(graph, spec.origin, spec.destination, spec.k);

    std::vector<const Route*> eligible;
    for (const Route& r : set.routes) {
        if (!oracle_violates(r, graph, cache, spec.avoid, radius_m)) eligible.push_back(&r);
    }
    if (eligible.empty()) {
        for (const Route& r : set.routes) eligible.push_back(&r);
    }

    const bool any_urgent = std::any_of(tasks.begin(), tasks.end(), [](const ClassifiedTask& t) {
        return t.priority == Priority::Urgent;
    });

    if (any_urgent) {
        const auto times = one_to_all_time(graph, spec.origin);
        const auto urgent_access = [&](const Route& r) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& t : tasks) {
                if (t.priority != Priority::Urgent) continue;
                for (const auto& m : cache.query_radius(r, graph, radius_m, t.osm_tags)) {
                    best = std::min(best, times[graph.node_index(m.poi->linked_node)]);
                }
            }
            return best;
        };
        const Route* best = nullptr;
        double best_time = std::numeric_limits<double>::infinity();
        for (const Route* r : eligible) {
            const double t = urgent_access(*r);
            if (!best || t < best_time ||
                (t == best_time && better_route_cost(*r, *best))) {
                best = r;
                best_time = t;
            }
        }
        return best->id;
    }

    if (!tasks.empty()) {
        const auto coverage = [&](const Route& r) {
            int covered = 0;
            for (const auto& t : tasks) {
                if (t.priority == Priority::Urgent) continue;
                const auto matches = cache.query_radius(r, graph, radius_m, t.osm_tags);
                const bool hit = std::any_of(matches.begin(), matches.end(),
                                             [&](const PoiMatch& m) {
                                                 return route_has_node(r, m.poi->linked_node);
                                             });
                if (hit) ++covered;
            }
            return covered;
        };
        const Route* best = nullptr;
        int best_cov = -1;
        for (const Route* r : eligible) {
            const int cov = coverage(*r);
            if (cov > best_cov || (cov == best_cov && better_route_cost(*r, *best))) {
                best = r;
                best_cov = cov;
            }
        }
        return best->id;
    }

    const Route* best = eligible.front();
    for (const Route* r : eligible) {
        if (better_route_cost(*r, *best)) best = r;
    }
    return best->id;
}

namespace {

bool all_tasks_completed(const std::vector<ClassifiedTask>& tasks, const Route& final_route,
                         const PoiCache& cache) {
    for (const auto& task : tasks) {
        bool served = false;
        for (const Poi& poi : cache.pois()) {
            if (tags_match_map(poi.tags, task.osm_tags) &&
                route_has_node(final_route, poi.linked_node)) {
                served = true;
                break;
            }
        }
        if (!served) return false;
    }
    return true;
}

}  // namespace

std::vector<TrialResult> run_scenario(const ScenarioSpec& spec, const Graph& graph,
                                      const PoiCache& cache, Backend& client,
                                      EvaluatorMode mode) {
    std::vector<TrialResult> results;
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        TrialResult tr;
        tr.scenario = spec.name;
        tr.repetition = rep;
        try {
            tr.oracle_route_id = oracle_best(graph, cache, spec);

            PlanRequest req;
            req.origin = spec.origin;
            req.destination = spec.destination;
            req.tasks = spec.tasks;
            req.preferences = spec.preferences;
            req.avoid = spec.avoid;
            req.k = spec.k;
            req.scenario_context = spec.context;
            req.evaluator_mode = mode;
            req.radius_m = kDefaultRadiusM;
            const FinalPlan p = plan(req, graph, cache, client);

            tr.chosen_route_id = p.decision.chosen_route_id;
            tr.route_correct = tr.chosen_route_id == tr.oracle_route_id;
            tr.tasks_completed = all_tasks_completed(p.dossier.tasks, p.final_route, cache);
            tr.final_route = p.final_route;
        } catch (const std::exception& e) {
            tr.error = e.what();
            tr.route_correct = false;
            tr.tasks_completed = false;
        }
        results.push_back(std::move(tr));
    }
    return results;
}

namespace {

double round2_half_up(double x) { return std::floor(x * 100.0 + 0.5) / 100.0; }

std::string format_pct(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

FamilyStats stats_for(const std::string& label, const std::vector<TrialResult>& trials) {
    FamilyStats fs;
    fs.family = label;
    fs.n_trials = static_cast<int>(trials.size());
    const auto [acc, comp] = metrics(trials);
    fs.accuracy_pct = acc;
    fs.completeness_pct = comp;
    return fs;
}

}  // namespace

std::pair<double, double> metrics(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw PreconditionError("metrics: trials must be nonempty");
    const auto n = static_cast<double>(trials.size());
    const auto correct = static_cast<double>(
        std::count_if(trials.begin(), trials.end(),
                      [](const TrialResult& t) { return t.route_correct; }));
    const auto completed = static_cast<double>(
        std::count_if(trials.begin(), trials.end(),
                      [](const TrialResult& t) { return t.tasks_completed; }));
    return {round2_half_up(100.0 * correct / n), round2_half_up(100.0 * completed / n)};
}

BenchReport run_suite(const std::vector<ScenarioSpec>& specs, const Graph& graph,
                      const PoiCache& cache, Backend& client, EvaluatorMode mode,
                      std::optional<int> k_override) {
    if (specs.empty()) throw PreconditionError("run_suite: specs must be nonempty");
    BenchReport report;
    report.k = k_override.value_or(specs.front().k);

    std::vector<std::pair<Family, std::vector<TrialResult>>> by_family;
    for (const ScenarioSpec& spec : specs) {
        ScenarioSpec s = spec;
        if (k_override) s.k = *k_override;
        auto trials = run_scenario(s, graph, cache, client, mode);
        auto it = std::find_if(by_family.begin(), by_family.end(),
                               [&](const auto& p) { return p.first == s.family; });
        if (it == by_family.end()) {
            by_family.emplace_back(s.family, std::vector<TrialResult>{});
            it = std::prev(by_family.end());
        }
        it->second.insert(it->second.end(), trials.begin(), trials.end());
        report.trials.insert(report.trials.end(), trials.begin(), trials.end());
    }

    const Family canonical[] = {Family::Simple, Family::Urgency, Family::Avoidance,
                                Family::Efficiency};
    for (const Family f : canonical) {
        const auto it = std::find_if(by_family.begin(), by_family.end(),
                                     [&](const auto& p) { return p.first == f; });
        if (it != by_family.end()) report.rows.push_back(stats_for(family_name(f), it->second));
    }
    report.rows.push_back(stats_for("OVERALL", report.trials));
    return report;
}

std::vector<BenchReport> k_sweep(const std::vector<ScenarioSpec>& specs, const Graph& graph,
                                 const PoiCache& cache, Backend& client, EvaluatorMode mode,
                                 const std::vector<int>& ks) {
    if (specs.empty()) throw PreconditionError("k_sweep: specs must be nonempty");
    std::vector<BenchReport> reports;
    for (const int k : ks) {
        reports.push_back(run_suite(specs, graph, cache, client, mode, k));
    }
    return reports;
}

std::string render_report_csv(const std::vector<BenchReport>& reports) {
    std::ostringstream out;
    out << "k,family,accuracy_pct,completeness_pct,n_trials\n";
    for (const BenchReport& r : reports) {
        for (const FamilyStats& row : r.rows) {
            out << r.k << ',' << row.family << ',' << format_pct(row.accuracy_pct) << ','
                << format_pct(row.completeness_pct) << ',' << row.n_trials << '\n';
        }
    }
    return out.str();
}

std::vector<BenchReport> parse_report_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "k,family,accuracy_pct,completeness_pct,n_trials") {
        throw ParseError("report CSV: bad header");
    }
    std::vector<BenchReport> reports;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 5) throw ParseError("report CSV: bad row: " + line);
        const int k = std::stoi(fields[0]);
        FamilyStats fs;
        fs.family = fields[1];
        fs.accuracy_pct = std::stod(fields[2]);
        fs.completeness_pct = std::stod(fields[3]);
        fs.n_trials = std::stoi(fields[4]);
        if (reports.empty() || reports.back().k != k) {
            reports.push_back(BenchReport{k, {}, {}});
        }
        reports.back().rows.push_back(fs);
    }
    return reports;
}

}  // namespace pave
