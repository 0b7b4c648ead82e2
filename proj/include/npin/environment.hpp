#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include <json.hpp>

#include "npin/env_config.hpp"
#include "npin/generation.hpp"
#include "npin/metrics.hpp"
#include "npin/observation.hpp"

namespace npin {

struct AngularAction {
    double omega = 0.0;  // rad/s, clamped by the physics config
};
struct HeadingAction {
    double heading = 0.0;  // world-frame heading for one rotate-then-drive step
};
/// Rotate-then-drive heading steps toward `target` until within one cell or stuck.
struct WaypointAction {
    Vec2 target;
};
using Action = std::variant<AngularAction, HeadingAction, WaypointAction>;

nlohmann::json action_to_json(const Action& action);
Action action_from_json(const nlohmann::json& j);

struct RewardBreakdown {
    double collision = 0.0;
    double progress = 0.0;
    double completion = 0.0;
    double total() const { return collision + progress + completion; }
};

struct EpisodeStatus {
    bool terminated = false;
    bool truncated = false;
    bool nav_success = false;
    std::vector<bool> completed;  // per movable (index = id - 1); latched, manipulation tasks only
    int steps = 0;
    int steps_since_completion = 0;

    bool finished() const { return terminated || truncated; }
    int completed_count() const;
};

nlohmann::json reward_to_json(const RewardBreakdown& r);
nlohmann::json status_to_json(const EpisodeStatus& s);

struct StepResult {
    Observation observation;
    RewardBreakdown reward;
    EpisodeStatus status;
    StepInfo info;
};

/// Raised when the caller breaks the step protocol (wrong action kind, stepping a finished episode).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class Environment {
public:
    explicit Environment(EnvConfig config);

    /// Regenerates the world from config.seed (or the given seed) and returns the first observation.
    Observation reset();
    Observation reset(std::uint64_t seed);
    StepResult step(const Action& action);
    Observation observe() const;

    const EnvConfig& config() const { return config_; }
    const WorldState& world() const { return generated_.world; }
    const EpisodeStatus& status() const { return status_; }
    const OccupancyGrid& static_map() const { return generated_.static_map; }
    const GoalRegion& goal() const { return generated_.goal; }
    const Aabb& workspace() const { return generated_.workspace; }
    const std::vector<int>& movable_ids() const { return generated_.movable_ids; }
    const Pose& robot_start() const { return robot_start_; }
    /// Physics summary of the most recent action.
    const StepInfo& last_info() const { return last_info_; }

    /// Continuous goal distance of the robot centre on the robot-inflated static map (metres).
    double robot_goal_distance() const;
    /// Same for a box centroid on the box-inflated map.
    double box_goal_distance(const Body& box) const;
    /// Goal test for one movable: centroid in the receptacle, or every vertex clear of the clearance area.
    bool box_done(const Body& box) const;

    /// Scores-ready summary of the episode so far.
    EpisodeRecord record() const;

private:
    StepInfo execute(const Action& action);
    double collision_impulse(const StepInfo& info) const;
    std::vector<MovableStyle> styles() const;

    EnvConfig config_;
    GeneratedWorld generated_;
    ObservationRenderer renderer_;
    DistanceGrid box_dt_;
    EpisodeStatus status_;
    Pose robot_start_;
    std::vector<Vec2> initial_centroids_;
    double last_goal_distance_ = 0.0;
    StepInfo last_info_;
};

}  // namespace npin
