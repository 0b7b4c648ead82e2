#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "npin/env_config.hpp"
#include "npin/goal_region.hpp"
#include "npin/grid.hpp"
#include "npin/physics.hpp"
#include "npin/rng.hpp"

namespace npin {

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Body id conventions: robot 0, movables 1..K, static geometry from kFirstStaticId.
inline constexpr int kRobotId = 0;
inline constexpr int kFirstStaticId = 1000;

/// Named wall sets for the maze task. Arena coordinates start at the origin.
struct MazeLayout {
    std::string name;
    double width = 8.0;
    double height = 8.0;
    std::vector<std::vector<Vec2>> walls;  // interior walls, world frame, CCW
    Pose start;
    GoalDisk goal;
};

MazeLayout maze_layout(const std::string& name);

/// Output of procedural generation, everything an environment needs at reset.
struct GeneratedWorld {
    WorldState world;
    Aabb workspace;            // region the task lives in (boundary walls sit just outside)
    OccupancyGrid static_map;  // static bodies rasterized, padded by kMapMargin around the workspace
    GoalRegion goal;
    std::vector<int> movable_ids;
};

/// Static map padding so boundary walls appear in the grid.
inline constexpr double kMapMargin = 0.5;

GeneratedWorld generate_world(const EnvConfig& config);

/// Random convex floes covering `concentration` of `region` (within +/-1% absolute).
/// Radii (circumradius) lie in [0.3, 1.0] m with 5-8 vertices; floes never overlap.
std::vector<std::vector<Vec2>> generate_ice_field(Rng& rng, double concentration, const Aabb& region);

/// Total floe area divided by region area.
double ice_coverage(const std::vector<std::vector<Vec2>>& floes, const Aabb& region);

/// Region of the ice channel for a config (between the ship start zone and the goal line).
Aabb ice_region(const EnvConfig& config);

/// Robot hull in its body frame (forward = +x). Rectangle for ground robots,
/// pointed pentagon for the ship.
ConvexPolygon robot_shape(const EnvConfig& config);

/// Rasterizes every fixed body into a grid covering `workspace` plus the margin.
OccupancyGrid rasterize_static(const WorldState& world, const Aabb& workspace, double resolution);

}  // namespace npin
