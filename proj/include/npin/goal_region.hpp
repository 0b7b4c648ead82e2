#pragma once

#include <string>
#include <variant>
#include <vector>

#include "npin/geometry.hpp"

namespace npin {

/// Goal disk (navigation goal; radius 0 is a single point).
struct GoalDisk {
    Vec2 center;
    double radius = 0.0;
};

/// Everything at or beyond y = line_y (the ship's goal line).
struct GoalLine {
    double line_y = 0.0;
};

/// Interior of a convex receptacle polygon.
struct GoalPolygon {
    std::vector<Vec2> vertices;  // CCW
};

/// Everything outside (or on the boundary of) an axis-aligned clearance rectangle.
struct GoalRectExterior {
    Aabb rect;
};

class GoalRegion {
public:
    using Shape = std::variant<GoalDisk, GoalLine, GoalPolygon, GoalRectExterior>;

    GoalRegion() = default;
    GoalRegion(Shape shape) : shape_(std::move(shape)) {}  // NOLINT(google-explicit-constructor)

    bool contains(Vec2 p) const;
    /// Closest goal point to p (p itself when p is already inside).
    Vec2 nearest_point(Vec2 p) const;
    double distance(Vec2 p) const { return npin::distance(p, nearest_point(p)); }

    const Shape& shape() const { return shape_; }
    std::string kind() const;

private:
    Shape shape_ = GoalDisk{};
};

}  // namespace npin
