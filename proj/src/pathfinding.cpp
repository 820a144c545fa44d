// SPDX-License-Identifier: Apache-2.0
#include "pave/pathfinding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "pave/errors.hpp"

namespace pave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> edge_weights(const Graph& g, const Objective& o) {
    std::vector<double> w(g.edges().size());
    const double tmax = g.max_time_s() > 0.0 ? g.max_time_s() : 1.0;
    const double cmax = g.max_co2_g() > 0.0 ? g.max_co2_g() : 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Edge& e = g.edges()[i];
        switch (o.kind) {
            case Objective::Kind::Time: w[i] = e.time_s; break;
            case Objective::Kind::Co2: w[i] = e.co2_g; break;
            case Objective::Kind::Scalarized:
                w[i] = o.lambda * (e.time_s / tmax) + (1.0 - o.lambda) * (e.co2_g / cmax);
                break;
        }
    }
    return w;
}

// A partial path. Node indices are in id-sorted order, so comparing
// index sequences lexicographically compares id sequences.
struct Label {
    double cost = 0.0;
    std::vector<int> nodes;
    std::vector<int> edges;
};

struct LabelGreater {
    bool operator()(const Label& a, const Label& b) const {
        if (a.cost != b.cost) return a.cost > b.cost;
        return b.nodes < a.nodes;
    }
};

// Dijkstra over (cost, node-id-sequence) labels. The first label popped
// for a node is its minimum-cost, lexicographically-smallest simple
// path, which makes every tie-break reproducible.
bool dijkstra_lex(const Graph& g, int s, int d, const std::vector<double>& w,
                  const std::vector<char>& excluded, const std::vector<char>& banned_edge,
                  Label& out) {
    const std::size_t n = g.nodes().size();
    std::vector<char> finalized(n, 0);
    std::vector<double> best_cost(n, kInf);
    std::vector<std::vector<int>> best_nodes(n);

    std::priority_queue<Label, std::vector<Label>, LabelGreater> heap;
    heap.push(Label{0.0, {s}, {}});
    best_cost[s] = 0.0;
    best_nodes[s] = {s};

    while (!heap.empty()) {
        Label lab = heap.top();
        heap.pop();
        const int u = lab.nodes.back();
        if (finalized[u]) continue;
        finalized[u] = 1;
        if (u == d) {
            out = std::move(lab);
            return true;
        }
        for (const int ei : g.out_edges(u)) {
            if (!banned_edge.empty() && banned_edge[ei]) continue;
            const int v = g.edge_to_idx(ei);
            if (excluded[v] || finalized[v]) continue;
            if (std::find(lab.nodes.begin(), lab.nodes.end(), v) != lab.nodes.end()) continue;
            const double c2 = lab.cost + w[ei];
            if (c2 > best_cost[v]) continue;
            std::vector<int> cand = lab.nodes;
            cand.push_back(v);
            if (c2 == best_cost[v] && !(cand < best_nodes[v])) continue;
            best_cost[v] = c2;
            best_nodes[v] = cand;
            Label next;
            next.cost = c2;
            next.nodes = std::move(cand);
            next.edges = lab.edges;
            next.edges.push_back(ei);
            heap.push(std::move(next));
        }
    }
    return false;
}

Route route_from_label(const Graph& g, const Label& lab) {
    Route r;
    r.nodes.reserve(lab.nodes.size());
    for (const int ni : lab.nodes) r.nodes.push_back(g.nodes()[ni].id);
    r.edges.reserve(lab.edges.size());
    for (const int ei : lab.edges) {
        const Edge& e = g.edges()[ei];
        r.edges.push_back(e.id);
        r.total_time_s += e.time_s;
        r.total_co2_g += e.co2_g;
    }
    return r;
}

std::vector<char> excluded_mask(const Graph& g, const NodeSet& excluded) {
    std::vector<char> mask(g.nodes().size(), 0);
    for (const auto& id : excluded) mask[g.node_index(id)] = 1;
    return mask;
}

}  // namespace

Route shortest_path(const Graph& g, const std::string& s, const std::string& d,
                    const Objective& objective, const NodeSet& excluded_nodes) {
    const int si = g.node_index(s);
    const int di = g.node_index(d);
    if (excluded_nodes.count(s) || excluded_nodes.count(d)) {
        throw PreconditionError("excluded_nodes may not contain the endpoints");
    }
    if (si == di) {
        Route r;
        r.nodes = {s};
        return r;
    }
    const std::vector<double> w = edge_weights(g, objective);
    Label lab;
    if (!dijkstra_lex(g, si, di, w, excluded_mask(g, excluded_nodes), {}, lab)) {
        throw NoPathError("no path from " + s + " to " + d);
    }
    return route_from_label(g, lab);
}

std::vector<Route> yen_k_shortest(const Graph& g, const std::string& s, const std::string& d,
                                  int k, const Objective& objective,
                                  const NodeSet& excluded_nodes) {
    if (k < 1) throw PreconditionError("yen_k_shortest: k must be >= 1");
    const int si = g.node_index(s);
    const int di = g.node_index(d);
    if (excluded_nodes.count(s) || excluded_nodes.count(d)) {
        throw PreconditionError("excluded_nodes may not contain the endpoints");
    }
    const std::vector<double> w = edge_weights(g, objective);
    const std::vector<char> base_excluded = excluded_mask(g, excluded_nodes);

    if (si == di) {
        Route r;
        r.nodes = {s};
        r.id = 0;
        return {r};
    }

    struct Candidate {
        double cost;
        std::vector<int> nodes;
        std::vector<int> edges;
        bool operator<(const Candidate& o) const {
            if (cost != o.cost) return cost < o.cost;
            if (nodes != o.nodes) return nodes < o.nodes;
            return edges < o.edges;
        }
    };

    const auto resum = [&w](const std::vector<int>& edges) {
        double c = 0.0;
        for (const int ei : edges) c += w[ei];
        return c;
    };

    std::vector<Candidate> accepted;
    {
        Label first;
        if (!dijkstra_lex(g, si, di, w, base_excluded, {}, first)) {
            throw NoPathError("no path from " + s + " to " + d);
        }
        accepted.push_back(Candidate{first.cost, std::move(first.nodes), std::move(first.edges)});
    }

    std::set<Candidate> pool;
    while (static_cast<int>(accepted.size()) < k) {
        const Candidate& prev = accepted.back();
        for (std::size_t spur = 0; spur + 1 < prev.nodes.size(); ++spur) {
            std::vector<int> root_nodes(prev.nodes.begin(), prev.nodes.begin() + spur + 1);
            std::vector<int> root_edges(prev.edges.begin(), prev.edges.begin() + spur);

            std::vector<char> banned(g.edges().size(), 0);
            for (const Candidate& p : accepted) {
                if (p.nodes.size() > spur &&
                    std::equal(root_nodes.begin(), root_nodes.end(), p.nodes.begin()) &&
                    p.edges.size() > spur) {
                    banned[p.edges[spur]] = 1;
                }
            }
            std::vector<char> excluded = base_excluded;
            for (std::size_t i = 0; i < spur; ++i) excluded[root_nodes[i]] = 1;

            Label spur_lab;
            if (!dijkstra_lex(g, root_nodes.back(), di, w, excluded, banned, spur_lab)) {
                continue;
            }
            Candidate cand;
            cand.nodes = root_nodes;
            cand.nodes.insert(cand.nodes.end(), spur_lab.nodes.begin() + 1, spur_lab.nodes.end());
            cand.edges = root_edges;
            cand.edges.insert(cand.edges.end(), spur_lab.edges.begin(), spur_lab.edges.end());
            cand.cost = resum(cand.edges);
            const bool dup = std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& p) {
                return p.nodes == cand.nodes && p.edges == cand.edges;
            });
            if (!dup) pool.insert(std::move(cand));
        }
        if (pool.empty()) break;
        accepted.push_back(*pool.begin());
        pool.erase(pool.begin());
    }

    std::vector<Route> out;
    out.reserve(accepted.size());
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        Label lab{accepted[i].cost, accepted[i].nodes, accepted[i].edges};
        Route r = route_from_label(g, lab);
        r.id = static_cast<int>(i);
        out.push_back(std::move(r));
    }
    return out;
}

CandidateSet k_candidates(const Graph& g, const std::string& s, const std::string& d, int k) {
    if (k < 1) throw PreconditionError("k_candidates: k must be >= 1");
    if (s == d) throw PreconditionError("k_candidates: origin equals destination");

    // lambda = 1 and 0 run the pure objectives directly, which pins the
    // time-optimal and CO2-optimal routes into every set with k >= 2.
    std::vector<double> lambdas;
    if (k == 1) {
        lambdas = {1.0};
    } else {
        for (int i = 0; i < k; ++i) {
            lambdas.push_back(1.0 - static_cast<double>(i) / static_cast<double>(k - 1));
        }
    }

    CandidateSet set;
    set.k_requested = k;
    const auto push_unique = [&set](Route r) {
        for (const Route& have : set.routes) {
            if (have.nodes == r.nodes) return false;
        }
        r.id = static_cast<int>(set.routes.size());
        set.routes.push_back(std::move(r));
        return true;
    };

    for (const double lambda : lambdas) {
        Objective obj = lambda == 1.0   ? Objective::time()
                        : lambda == 0.0 ? Objective::co2()
                                        : Objective::scalarized(lambda);
        push_unique(shortest_path(g, s, d, obj));
    }
    if (static_cast<int>(set.routes.size()) < k) {
        for (Route& r : yen_k_shortest(g, s, d, k, Objective::time())) {
            if (static_cast<int>(set.routes.size()) >= k) break;
            push_unique(std::move(r));
        }
    }
    return set;
}

Route concat_via_waypoint(const Graph& g, const std::string& s, const std::string& w,
                          const std::string& d, const NodeSet& excluded_nodes) {
    NodeSet excluded = excluded_nodes;
    excluded.erase(s);
    excluded.erase(w);
    excluded.erase(d);
    const Route leg1 = shortest_path(g, s, w, Objective::time(), excluded);
    const Route leg2 = shortest_path(g, w, d, Objective::time(), excluded);

    Route r;
    r.nodes = leg1.nodes;
    r.nodes.insert(r.nodes.end(), leg2.nodes.begin() + 1, leg2.nodes.end());
    r.edges = leg1.edges;
    r.edges.insert(r.edges.end(), leg2.edges.begin(), leg2.edges.end());
    r.total_time_s = leg1.total_time_s + leg2.total_time_s;
    r.total_co2_g = leg1.total_co2_g + leg2.total_co2_g;
    return r;
}

double route_cost(const Graph& g, const Route& r, const Objective& objective) {
    const std::vector<double> w = edge_weights(g, objective);
    double c = 0.0;
    for (const auto& eid : r.edges) c += w[g.edge_index(eid)];
    return c;
}

std::vector<double> one_to_all_time(const Graph& g, const std::string& origin) {
    const int s = g.node_index(origin);
    std::vector<double> dist(g.nodes().size(), kInf);
    dist[s] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
        const auto [c, u] = heap.top();
        heap.pop();
        if (c != dist[u]) continue;
        for (const int ei : g.out_edges(u)) {
            const int v = g.edge_to_idx(ei);
            const double c2 = c + g.edges()[ei].time_s;
            if (c2 < dist[v]) {
                dist[v] = c2;
                heap.emplace(c2, v);
            }
        }
    }
    return dist;
}

}  // namespace pave
