#pragma once

#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "npin/geometry.hpp"
#include "npin/physics.hpp"

namespace npin {

/// Edges of an axis-aligned clearance rectangle, named by their outward normal.
enum class BoundaryEdge { south = 0, east = 1, north = 2, west = 3 };
std::string to_string(BoundaryEdge e);
Vec2 outward_normal(BoundaryEdge e);
/// Where a push from `from` along the edge's outward normal crosses that edge.
Vec2 edge_crossing(const Aabb& rect, BoundaryEdge e, Vec2 from);

/// Straight push of one box across one boundary edge.
struct ClearancePath {
    int box_id = 0;
    BoundaryEdge edge = BoundaryEdge::south;
    Vec2 box_start;
    Vec2 approach;   // robot centre before the push, behind the box
    Vec2 direction;  // unit push direction (the edge's outward normal)
    Vec2 exit;       // where the push line crosses the edge

    double push_length() const { return distance(approach, exit); }
};

class PlanningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One candidate per (box, edge). The approach point sits behind the box at
/// robot half-length + box circumradius + `margin`; candidates whose approach
/// footprint hits a fixed body or leaves the workspace are dropped.
/// Throws PlanningError when a box is left with no candidate.
std::vector<ClearancePath> enumerate_clearance_paths(const WorldState& world, const std::vector<int>& box_ids,
                                                     const Aabb& clearance, const ConvexPolygon& robot_shape,
                                                     const Aabb& workspace, double margin = 0.1);

nlohmann::json clearance_path_to_json(const ClearancePath& p);

}  // namespace npin
