#include "npin/clearance.hpp"

#include <cmath>

#include "npin/world_json.hpp"

namespace npin {

std::string to_string(BoundaryEdge e) {
    switch (e) {
        case BoundaryEdge::south: return "south";
        case BoundaryEdge::east: return "east";
        case BoundaryEdge::north: return "north";
        case BoundaryEdge::west: return "west";
    }
    return "?";
}

Vec2 outward_normal(BoundaryEdge e) {
    switch (e) {
        case BoundaryEdge::south: return {0.0, -1.0};
        case BoundaryEdge::east: return {1.0, 0.0};
        case BoundaryEdge::north: return {0.0, 1.0};
        case BoundaryEdge::west: return {-1.0, 0.0};
    }
    return {};
}

Vec2 edge_crossing(const Aabb& rect, BoundaryEdge e, Vec2 c) {
    switch (e) {
        case BoundaryEdge::south: return {c.x, rect.lo.y};
        case BoundaryEdge::east: return {rect.hi.x, c.y};
        case BoundaryEdge::north: return {c.x, rect.hi.y};
        case BoundaryEdge::west: return {rect.lo.x, c.y};
    }
    return c;
}

std::vector<ClearancePath> enumerate_clearance_paths(const WorldState& world, const std::vector<int>& box_ids,
                                                     const Aabb& clearance, const ConvexPolygon& robot_shape,
                                                     const Aabb& workspace, double margin) {
    const double half_length = robot_shape.support({1.0, 0.0});
    std::vector<ClearancePath> out;
    for (int id : box_ids) {
        const Body* box = world.find(id);
        if (!box) throw PlanningError("no body with id " + std::to_string(id));
        const Vec2 c = box->pose.position();
        const double offset = half_length + box->shape.circumradius() + margin;
        std::size_t kept = 0;
        for (int k = 0; k < 4; ++k) {
            const auto edge = static_cast<BoundaryEdge>(k);
            const Vec2 d = outward_normal(edge);
            ClearancePath p{id, edge, c, c - d * offset, d, edge_crossing(clearance, edge, c)};
            const auto footprint = robot_shape.transformed(Pose{p.approach.x, p.approach.y, std::atan2(d.y, d.x)});
            bool feasible = true;
            for (const Vec2& v : footprint) feasible = feasible && workspace.contains(v);
            for (const Body& b : world.bodies) {
                if (feasible && b.is_fixed() && convex_overlap(footprint, b.world_vertices())) feasible = false;
            }
            if (!feasible) continue;
            out.push_back(p);
            ++kept;
        }
        if (kept == 0) throw PlanningError("box " + std::to_string(id) + " has no feasible clearance path");
    }
    return out;
}

nlohmann::json clearance_path_to_json(const ClearancePath& p) {
    return {{"box_id", p.box_id},
            {"edge", to_string(p.edge)},
            {"box_start", vec_to_json(p.box_start)},
            {"approach", vec_to_json(p.approach)},
            {"direction", vec_to_json(p.direction)},
            {"exit", vec_to_json(p.exit)}};
}

}  // namespace npin
