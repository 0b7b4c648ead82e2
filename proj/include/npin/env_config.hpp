#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "npin/geometry.hpp"
#include "npin/physics.hpp"

namespace npin {

enum class EnvKind { maze, ship_ice, box_delivery, area_clearing };
enum class ActionMode { angular_velocity, heading_step, waypoint };

std::string to_string(EnvKind kind);
std::string to_string(ActionMode mode);
EnvKind env_kind_from_string(const std::string& name);
ActionMode action_mode_from_string(const std::string& name);

inline bool is_navigation(EnvKind kind) { return kind == EnvKind::maze || kind == EnvKind::ship_ice; }

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reward magnitudes; only their structure is prescribed by the task definitions.
struct RewardConfig {
    double collision_beta = 1.0;
    double impulse_cap = 1.0;          // N*s per action
    double distance_reward = 10.0;     // per metre of goal-DT decrease (maze)
    double heading_reward = 0.1;       // scale of cos(heading error) (ship-ice)
    double terminal_reward = 10.0;
    double box_progress_reward = 5.0;  // per metre of box goal-DT decrease
    double box_completion_reward = 3.0;
};

/// Explicit placement of a movable body; used by scripted scenarios.
struct MovableSpec {
    std::vector<Vec2> vertices;  // world frame, CCW
};

struct EnvConfig {
    EnvKind kind = EnvKind::maze;
    std::uint64_t seed = 0;

    // maze
    std::string layout = "u_shape";
    int obstacle_count = 5;
    double obstacle_min_size = 0.4;
    double obstacle_max_size = 0.8;

    // ship_ice
    double concentration = 0.1;
    double goal_distance = 10.0;
    double channel_width = 12.0;

    // box_delivery / area_clearing
    int box_count = 10;
    int static_obstacle_count = 0;
    double box_size = 0.4;
    double column_size = 0.6;
    double workspace_width = 10.0;
    double workspace_height = 10.0;
    Aabb receptacle{{8.5, 8.5}, {10.0, 10.0}};
    Aabb clearance{{3.0, 3.5}, {9.0, 9.5}};

    // observation
    double resolution = 0.1;
    int window = 64;

    // actions and episode limits
    ActionMode action_mode = ActionMode::angular_velocity;
    double step_distance = 0.25;
    int max_steps = 3000;           // 0 disables the hard cap
    int no_progress_limit = 200;    // manipulation tasks only

    // bodies
    double robot_length = 0.7;
    double robot_width = 0.5;
    double robot_mass = 10.0;
    double movable_density = 10.0;  // kg per m^2

    std::optional<Pose> robot_start;
    std::optional<std::vector<MovableSpec>> movables;

    PhysicsConfig physics;
    RewardConfig rewards;

    /// Defaults tuned per task (arena sizes, action mode, step caps).
    static EnvConfig defaults_for(EnvKind kind);
    void validate() const;
};

/// Flat JSON object; every key is also a CLI flag of the same name.
nlohmann::json config_to_json(const EnvConfig& config);
/// Starts from defaults_for(kind) and applies every present key. Unknown keys are rejected.
EnvConfig config_from_json(const nlohmann::json& j);
/// Applies the keys in `overrides` on top of an existing config.
EnvConfig apply_overrides(const EnvConfig& base, const nlohmann::json& overrides);

}  // namespace npin
