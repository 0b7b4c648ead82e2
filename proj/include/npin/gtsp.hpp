#pragma once

#include <limits>
#include <vector>

#include <json.hpp>

#include "npin/clearance.hpp"
#include "npin/grid.hpp"

namespace npin {

inline constexpr double kNoEdge = std::numeric_limits<double>::infinity();

/// Vertex 0 is the robot start; vertex i >= 1 is paths[i - 1]. One set per box.
/// transit[u][v] is the static-map path length from the end of u (its exit
/// point, or the start) to the approach point of v; entering v also costs
/// push[v]. Missing edges hold kNoEdge.
struct GtspGraph {
    std::vector<ClearancePath> paths;
    std::vector<std::vector<int>> sets;
    std::vector<std::vector<double>> transit;
    std::vector<double> push;

    std::size_t vertex_count() const { return push.size(); }
    double cost(int u, int v) const { return transit[u][v] + push[v]; }
    int set_of(int v) const;
};

/// Transit lengths come from a StaticPathPlanner inflated by `clearance_radius`.
/// Throws PlanningError when a vertex cannot be reached from anywhere.
GtspGraph build_gtsp_graph(std::vector<ClearancePath> paths, Vec2 robot_start, const OccupancyGrid& static_map,
                           double clearance_radius);

/// Builds a graph straight from cost matrices (used by tests and random instances).
GtspGraph make_gtsp_graph(std::vector<std::vector<int>> sets, std::vector<std::vector<double>> transit,
                          std::vector<double> push);

struct GtspTour {
    std::vector<int> vertices;  // one per set, in visiting order, start excluded
    double cost = 0.0;
    bool exact = false;
};

/// Open tour from vertex 0 through exactly one vertex of every set.
/// Exact subset DP up to `exact_limit` sets, otherwise nearest neighbour + 2-opt.
GtspTour solve_gtsp(const GtspGraph& g, std::size_t exact_limit = 10);
GtspTour solve_gtsp_exact(const GtspGraph& g);
GtspTour solve_gtsp_heuristic(const GtspGraph& g);

/// Cost of visiting the sets in `order` with the best vertex per set (layered shortest path).
GtspTour best_vertices_for_order(const GtspGraph& g, const std::vector<int>& order);

nlohmann::json plan_to_json(const GtspGraph& g, const GtspTour& tour);

}  // namespace npin
