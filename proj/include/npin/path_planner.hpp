#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "npin/goal_region.hpp"
#include "npin/grid.hpp"

namespace npin {

class UnreachableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StaticPath {
    double length = 0.0;
    std::vector<Vec2> waypoints;  // start, intermediate corners, goal point
};

/// Shortest paths on a static occupancy map inflated by a clearance radius.
///
/// The search runs 8-connected Dijkstra from the start cell until it settles a
/// goal cell, then pulls the cell chain taut with line-of-sight shortcuts (corners
/// may slide within their cell toward the wrapped obstacle corner) on the
/// inflated map; the reported length is the Euclidean length of that polyline.
/// Movable bodies never appear in the map.
class StaticPathPlanner {
public:
    StaticPathPlanner(const OccupancyGrid& static_map, double inflation_radius);

    const OccupancyGrid& inflated() const { return inflated_; }
    double inflation_radius() const { return radius_; }

    bool blocked(Cell c) const { return !inflated_.contains(c) || inflated_[c] != 0; }
    /// True when every cell the segment crosses is free (supercover traversal).
    bool line_of_sight(Vec2 a, Vec2 b) const;

    /// Throws UnreachableError when no free path reaches the goal.
    StaticPath plan(Vec2 start, const GoalRegion& goal) const;
    double shortest_distance(Vec2 start, const GoalRegion& goal) const { return plan(start, goal).length; }
    /// Point-to-point distance; an endpoint inside inflated geometry is joined
    /// to its nearest free cell by a straight segment.
    double point_distance(Vec2 a, Vec2 b) const;

    /// Maximum distance a blocked start is moved to the nearest free cell.
    static constexpr double kMaxSnap = 1.0;

private:
    bool snap_to_free(Cell from, Cell& out) const;
    void refine(std::vector<Vec2>& waypoints, std::size_t first_free) const;

    OccupancyGrid inflated_;
    double radius_ = 0.0;
};

double shortest_static_path(Vec2 start, const GoalRegion& goal, const OccupancyGrid& static_map,
                            double inflation_radius);

}  // namespace npin
