#include "npin/gtsp.hpp"

#include <algorithm>

#include "npin/path_planner.hpp"

namespace npin {

int GtspGraph::set_of(int v) const {
    for (std::size_t s = 0; s < sets.size(); ++s) {
        if (std::find(sets[s].begin(), sets[s].end(), v) != sets[s].end()) return static_cast<int>(s);
    }
    return -1;
}

GtspGraph make_gtsp_graph(std::vector<std::vector<int>> sets, std::vector<std::vector<double>> transit,
                          std::vector<double> push) {
    GtspGraph g;
    g.sets = std::move(sets);
    g.transit = std::move(transit);
    g.push = std::move(push);
    const std::size_t n = g.push.size();
    if (g.transit.size() != n) throw PlanningError("transit matrix size does not match the vertex count");
    for (const auto& row : g.transit) {
        if (row.size() != n) throw PlanningError("transit matrix must be square");
    }
    std::vector<bool> seen(n, false);
    for (const auto& s : g.sets) {
        if (s.empty()) throw PlanningError("empty GTSP set");
        for (int v : s) {
            if (v <= 0 || static_cast<std::size_t>(v) >= n) throw PlanningError("set vertex out of range");
            if (seen[v]) throw PlanningError("GTSP sets must be disjoint");
            seen[v] = true;
        }
    }
    return g;
}

GtspGraph build_gtsp_graph(std::vector<ClearancePath> paths, Vec2 robot_start, const OccupancyGrid& static_map,
                           double clearance_radius) {
    const StaticPathPlanner planner(static_map, clearance_radius);
    const std::size_t n = paths.size() + 1;
    std::vector<Vec2> ends{robot_start}, starts{robot_start};
    std::vector<double> push{0.0};
    std::vector<std::vector<int>> sets;
    std::vector<int> box_of_set;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        ends.push_back(paths[i].exit);
        starts.push_back(paths[i].approach);
        push.push_back(paths[i].push_length());
        const auto it = std::find(box_of_set.begin(), box_of_set.end(), paths[i].box_id);
        if (it == box_of_set.end()) {
            box_of_set.push_back(paths[i].box_id);
            sets.push_back({static_cast<int>(i) + 1});
        } else {
            sets[static_cast<std::size_t>(it - box_of_set.begin())].push_back(static_cast<int>(i) + 1);
        }
    }
    std::vector<std::vector<double>> transit(n, std::vector<double>(n, kNoEdge));
    for (std::size_t v = 1; v < n; ++v) {
        bool reachable = false;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v) continue;
            try {
                transit[u][v] = planner.point_distance(ends[u], starts[v]);
                reachable = true;
            } catch (const UnreachableError&) {
            }
        }
        if (!reachable) {
            throw PlanningError("clearance path of box " + std::to_string(paths[v - 1].box_id) + " across the " +
                                to_string(paths[v - 1].edge) + " edge is unreachable");
        }
    }
    GtspGraph g = make_gtsp_graph(std::move(sets), std::move(transit), std::move(push));
    g.paths = std::move(paths);
    return g;
}

GtspTour solve_gtsp_exact(const GtspGraph& g) {
    const std::size_t m = g.sets.size();
    if (m == 0) return {{}, 0.0, true};
    if (m > 20) throw PlanningError("exact GTSP limited to 20 sets");
    const std::size_t n = g.vertex_count();
    const std::size_t full = (std::size_t{1} << m) - 1;
    std::vector<int> set_of(n, -1);
    for (std::size_t s = 0; s < m; ++s) {
        for (int v : g.sets[s]) set_of[static_cast<std::size_t>(v)] = static_cast<int>(s);
    }
    // dp[mask][v]: cheapest path from the start covering `mask`, ending at v (v's set in mask)
    std::vector<std::vector<double>> dp(full + 1, std::vector<double>(n, kNoEdge));
    std::vector<std::vector<int>> parent(full + 1, std::vector<int>(n, -1));
    for (std::size_t s = 0; s < m; ++s) {
        for (int v : g.sets[s]) dp[std::size_t{1} << s][static_cast<std::size_t>(v)] = g.cost(0, v);
    }
    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t u = 1; u < n; ++u) {
            const double base = dp[mask][u];
            if (base == kNoEdge) continue;
            for (std::size_t s = 0; s < m; ++s) {
                if (mask & (std::size_t{1} << s)) continue;
                const std::size_t next = mask | (std::size_t{1} << s);
                for (int v : g.sets[s]) {
                    const double c = base + g.cost(static_cast<int>(u), v);
                    if (c < dp[next][static_cast<std::size_t>(v)]) {
                        dp[next][static_cast<std::size_t>(v)] = c;
                        parent[next][static_cast<std::size_t>(v)] = static_cast<int>(u);
                    }
                }
            }
        }
    }
    int best = -1;
    for (std::size_t v = 1; v < n; ++v) {
        if (set_of[v] >= 0 && dp[full][v] < kNoEdge && (best < 0 || dp[full][v] < dp[full][static_cast<std::size_t>(best)])) {
            best = static_cast<int>(v);
        }
    }
    if (best < 0) throw PlanningError("GTSP instance is infeasible: no tour covers every set");
    GtspTour tour{{}, dp[full][static_cast<std::size_t>(best)], true};
    std::size_t mask = full;
    for (int v = best; v > 0;) {
        tour.vertices.push_back(v);
        const int p = parent[mask][static_cast<std::size_t>(v)];
        mask &= ~(std::size_t{1} << set_of[static_cast<std::size_t>(v)]);
        v = p;
    }
    std::reverse(tour.vertices.begin(), tour.vertices.end());
    return tour;
}

GtspTour best_vertices_for_order(const GtspGraph& g, const std::vector<int>& order) {
    std::vector<int> prev_layer{0};
    std::vector<double> prev_cost{0.0};
    std::vector<std::vector<int>> back;
    for (int s : order) {
        const auto& layer = g.sets[static_cast<std::size_t>(s)];
        std::vector<double> cost(layer.size(), kNoEdge);
        std::vector<int> from(layer.size(), -1);
        for (std::size_t j = 0; j < layer.size(); ++j) {
            for (std::size_t i = 0; i < prev_layer.size(); ++i) {
                const double c = prev_cost[i] + g.cost(prev_layer[i], layer[j]);
                if (c < cost[j]) {
                    cost[j] = c;
                    from[j] = static_cast<int>(i);
                }
            }
        }
        back.push_back(from);
        prev_layer = layer;
        prev_cost = cost;
    }
    GtspTour tour;
    if (order.empty()) return tour;
    const auto it = std::min_element(prev_cost.begin(), prev_cost.end());
    tour.cost = *it;
    if (tour.cost == kNoEdge) return tour;
    int j = static_cast<int>(it - prev_cost.begin());
    tour.vertices.resize(order.size());
    for (std::size_t k = order.size(); k-- > 0;) {
        tour.vertices[k] = g.sets[static_cast<std::size_t>(order[k])][static_cast<std::size_t>(j)];
        j = back[k][static_cast<std::size_t>(j)];
    }
    return tour;
}

GtspTour solve_gtsp_heuristic(const GtspGraph& g) {
    const std::size_t m = g.sets.size();
    std::vector<int> order;
    std::vector<bool> used(m, false);
    int at = 0;
    for (std::size_t step = 0; step < m; ++step) {
        int best_set = -1, best_vertex = -1;
        double best = kNoEdge;
        for (std::size_t s = 0; s < m; ++s) {
            if (used[s]) continue;
            for (int v : g.sets[s]) {
                if (g.cost(at, v) < best) {
                    best = g.cost(at, v);
                    best_set = static_cast<int>(s);
                    best_vertex = v;
                }
            }
        }
        if (best_set < 0) {
            for (std::size_t s = 0; s < m; ++s) {
                if (!used[s]) throw PlanningError("GTSP set " + std::to_string(s) + " is unreachable");
            }
        }
        used[static_cast<std::size_t>(best_set)] = true;
        order.push_back(best_set);
        at = best_vertex;
    }
    GtspTour tour = best_vertices_for_order(g, order);
    // 2-opt on the set order, first improvement in index order.
    for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t i = 0; i + 1 < m && !improved; ++i) {
            for (std::size_t j = i + 1; j < m && !improved; ++j) {
                std::vector<int> candidate = order;
                std::reverse(candidate.begin() + static_cast<std::ptrdiff_t>(i),
                             candidate.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                GtspTour t = best_vertices_for_order(g, candidate);
                if (t.cost < tour.cost - 1e-12) {
                    order = std::move(candidate);
                    tour = std::move(t);
                    improved = true;
                }
            }
        }
    }
    if (tour.cost == kNoEdge) throw PlanningError("GTSP heuristic found no feasible tour");
    return tour;
}

GtspTour solve_gtsp(const GtspGraph& g, std::size_t exact_limit) {
    return g.sets.size() <= exact_limit ? solve_gtsp_exact(g) : solve_gtsp_heuristic(g);
}

nlohmann::json plan_to_json(const GtspGraph& g, const GtspTour& tour) {
    nlohmann::json paths = nlohmann::json::array();
    for (int v : tour.vertices) {
        if (v >= 1 && static_cast<std::size_t>(v) <= g.paths.size()) {
            paths.push_back(clearance_path_to_json(g.paths[static_cast<std::size_t>(v) - 1]));
        } else {
            paths.push_back({{"vertex", v}});
        }
    }
    return {{"cost", tour.cost},
            {"exact", tour.exact},
            {"vertex_count", g.vertex_count()},
            {"set_count", g.sets.size()},
            {"paths", std::move(paths)}};
}

}  // namespace npin
