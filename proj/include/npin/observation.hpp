#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "npin/env_config.hpp"
#include "npin/goal_region.hpp"
#include "npin/grid.hpp"
#include "npin/physics.hpp"

namespace npin {

using ChannelGrid = Grid<float>;

/// Stacked H x W channels, values in [0, 1]. Row 0 is the far edge ahead of
/// the window frame, column 0 its left edge.
struct Observation {
    std::vector<std::string> names;
    std::vector<ChannelGrid> channels;

    int height() const { return channels.empty() ? 0 : channels.front().height(); }
    int width() const { return channels.empty() ? 0 : channels.front().width(); }
    const ChannelGrid& channel(const std::string& name) const;
};

/// Window placement: centred on `center`, rows running against the frame's
/// forward axis. A world-aligned frame keeps forward = +y whatever the robot does.
struct WindowFrame {
    Vec2 center;
    double angle = 0.0;  // forward direction of the window
    int height = 64;
    int width = 64;
    double resolution = 0.1;

    Vec2 cell_center(int row, int col) const;
    /// Continuous pixel coordinates (u = column, v = row); cell (r, c) spans [c, c+1) x [r, r+1).
    Vec2 to_pixel(Vec2 world) const;
};

/// Window used for a robot pose: heading-aligned, except north-up for the ship.
WindowFrame observation_frame(const EnvConfig& config, const Pose& robot);

/// Continuous distance-to-goal from a cell DT: 0 inside the goal, otherwise the
/// best of (neighbour DT + straight hop) over the 3x3 block around p.
/// Returns kUnreachable when no neighbour reaches the goal.
double sample_distance(const DistanceGrid& dt, Vec2 p, bool inside_goal);

/// Goal DT on `static_map` inflated by `clearance`; sources are cells whose centre lies in the goal.
DistanceGrid goal_distance_transform(const OccupancyGrid& static_map, const GoalRegion& goal, double clearance);

/// Occupancy values in the manipulation tasks' combined channel.
inline constexpr float kStaticValue = 1.0f;
inline constexpr float kMovableValue = 0.5f;
inline constexpr float kCompletedValue = 0.25f;

/// Per-movable rendering hint for the manipulation channels.
enum class MovableStyle : std::uint8_t { normal, completed, hidden };

class ObservationRenderer {
public:
    ObservationRenderer() = default;
    ObservationRenderer(const EnvConfig& config, const OccupancyGrid& static_map, const GoalRegion& goal,
                        DistanceGrid goal_dt);

    /// `styles` is indexed by movable id - 1; missing entries render as normal.
    Observation render(const WorldState& world, const std::vector<MovableStyle>& styles = {}) const;
    WindowFrame frame_for(const Pose& robot) const;
    const DistanceGrid& goal_dt() const { return goal_dt_; }

    static std::vector<std::string> channel_names(EnvKind kind);

private:
    ChannelGrid static_channel(const WorldState& world, const WindowFrame& f) const;

    EnvKind kind_ = EnvKind::maze;
    int window_ = 64;
    double resolution_ = 0.1;
    Aabb map_bounds_;
    double map_diagonal_ = 1.0;
    GoalRegion goal_;
    DistanceGrid goal_dt_;
};

/// Sets every cell whose centre lies inside the polygon to max(current, value).
void rasterize_window(ChannelGrid& grid, const WindowFrame& frame, std::span<const Vec2> polygon, float value);

/// 8-connected single-cell line from the window centre along `heading` to the border.
void draw_heading_line(ChannelGrid& grid, const WindowFrame& frame, double heading);

nlohmann::json observation_to_json(const Observation& obs);
/// Writes <stem>_<channel>.pgm (8-bit, 255 = 1.0) per channel; returns the paths.
std::vector<std::filesystem::path> write_pgm(const Observation& obs, const std::filesystem::path& stem);

}  // namespace npin
