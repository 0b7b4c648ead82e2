#pragma once

// Reference implementations shared by the unit tests and the acceptance
// binary. Each one is written the slow, obvious way on purpose: none of them
// reuses the algorithm it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "npin/grid.hpp"
#include "npin/gtsp.hpp"
#include "npin/metrics.hpp"

namespace npin::oracle {

/// Bellman-Ford style relaxation sweep over the same 8-neighbour move rules
/// (no corner cutting) as the priority-queue transform.
inline DistanceGrid relaxation_dt(const OccupancyGrid& occ, const std::vector<Cell>& sources) {
    DistanceGrid d(occ.width(), occ.height(), occ.resolution(), occ.origin(), kUnreachable);
    for (const Cell& s : sources) d[s] = 0.0;
    const double res = occ.resolution();
    const auto free = [&](Cell c) { return occ.contains(c) && occ[c] == 0; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < occ.height(); ++y) {
            for (int x = 0; x < occ.width(); ++x) {
                const Cell c{x, y};
                if (!free(c) || d[c] == 0.0) continue;
                double best = d[c];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const Cell n{x + dx, y + dy};
                        if (!occ.contains(n) || d[n] == kUnreachable) continue;
                        if (!free(n) && d[n] != 0.0) continue;
                        if (dx != 0 && dy != 0 && (!free(Cell{x + dx, y}) || !free(Cell{x, y + dy}))) continue;
                        const double step = (dx != 0 && dy != 0) ? std::sqrt(2.0) * res : res;
                        best = std::min(best, d[n] + step);
                    }
                }
                if (best < d[c]) {
                    d[c] = best;
                    changed = true;
                }
            }
        }
    }
    return d;
}

/// Enumerates every (n-1)-edge subset and keeps the lightest spanning tree.
inline double brute_force_mst(int n, const std::vector<GraphEdge>& edges) {
    const std::size_t m = edges.size();
    double best = std::numeric_limits<double>::infinity();
    if (n <= 1) return 0.0;
    std::vector<int> pick(static_cast<std::size_t>(n - 1));
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == pick.size()) {
            std::vector<int> parent(static_cast<std::size_t>(n));
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) {
                return parent[static_cast<std::size_t>(x)] == x ? x : find(parent[static_cast<std::size_t>(x)]);
            };
            double w = 0.0;
            for (int idx : pick) {
                const GraphEdge& e = edges[static_cast<std::size_t>(idx)];
                const int a = find(e.u), b = find(e.v);
                if (a == b) return;
                parent[static_cast<std::size_t>(a)] = b;
                w += e.weight;
            }
            best = std::min(best, w);
            return;
        }
        for (std::size_t i = start; i < m; ++i) {
            pick[depth] = static_cast<int>(i);
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

/// Connected random graph on n vertices (a path backbone plus random chords).
inline std::vector<GraphEdge> random_graph(std::mt19937& gen, int n, double chord_probability = 0.8) {
    std::vector<GraphEdge> edges;
    std::uniform_real_distribution<double> w(0.0, 10.0);
    std::bernoulli_distribution keep(chord_probability);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            // half-metre weights force plenty of ties
            if (j == i + 1 || keep(gen)) edges.push_back({i, j, std::round(w(gen) * 2.0) / 2.0});
        }
    }
    return edges;
}

/// Every set order times every vertex choice.
inline double brute_force_gtsp(const GtspGraph& g) {
    std::vector<int> order(g.sets.size());
    std::iota(order.begin(), order.end(), 0);
    double best = kNoEdge;
    do {
        std::vector<std::size_t> pick(order.size(), 0);
        while (true) {
            double cost = 0.0;
            int prev = 0;
            for (std::size_t k = 0; k < order.size(); ++k) {
                const int v = g.sets[order[k]][pick[k]];
                cost += g.cost(prev, v);
                prev = v;
            }
            best = std::min(best, cost);
            std::size_t k = 0;
            while (k < pick.size() && ++pick[k] == g.sets[order[k]].size()) pick[k++] = 0;
            if (k == pick.size()) break;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

inline GtspGraph random_gtsp(std::mt19937_64& rng, int set_count, int max_per_set, double missing = 0.0) {
    std::uniform_int_distribution<int> per(1, max_per_set);
    std::uniform_real_distribution<double> w(0.5, 10.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::vector<int>> sets;
    int next = 1;
    for (int s = 0; s < set_count; ++s) {
        std::vector<int> members;
        for (int k = per(rng); k > 0; --k) members.push_back(next++);
        sets.push_back(members);
    }
    const std::size_t n = static_cast<std::size_t>(next);
    std::vector<std::vector<double>> transit(n, std::vector<double>(n, kNoEdge));
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 1; v < n; ++v) {
            if (u != v && coin(rng) >= missing) transit[u][v] = w(rng);
        }
    }
    std::vector<double> push(n, 0.0);
    for (std::size_t v = 1; v < n; ++v) push[v] = w(rng);
    return make_gtsp_graph(sets, transit, push);
}

// Score formulas typed straight from their definitions, one loop each.

inline double nav_e(bool success, double l0_star, double l0) { return success ? l0_star / l0 : 0.0; }

inline double nav_i(const EpisodeRecord& r) {
    double work = r.robot_mass * r.robot_path_length;
    for (const ObjectRecord& o : r.objects) work += o.mass * o.traveled;
    return r.robot_mass * r.robot_path_length / work;
}

inline double manip_s(const EpisodeRecord& r) {
    double done = 0.0;
    for (const ObjectRecord& o : r.objects) done += o.success ? 1.0 : 0.0;
    return done / static_cast<double>(r.objects.size());
}

inline double manip_e(double spanning_length, double l0) { return spanning_length / l0; }

inline double manip_i(const EpisodeRecord& r, const std::vector<double>& shortest) {
    double ideal = r.robot_mass * r.robot_path_length;
    double actual = r.robot_mass * r.robot_path_length;
    for (std::size_t i = 0; i < r.objects.size(); ++i) {
        if (r.objects[i].success) ideal += r.objects[i].mass * shortest[i];
        actual += r.objects[i].mass * r.objects[i].traveled;
    }
    return ideal / actual;
}

}  // namespace npin::oracle
