#include "npin/environment.hpp"

#include <algorithm>
#include <cmath>

#include "npin/overloaded.hpp"

namespace npin {

nlohmann::json action_to_json(const Action& action) {
    return std::visit(overloaded{
                          [](const AngularAction& a) { return nlohmann::json{{"omega", a.omega}}; },
                          [](const HeadingAction& a) { return nlohmann::json{{"heading", a.heading}}; },
                          [](const WaypointAction& a) {
                              return nlohmann::json{{"waypoint", {a.target.x, a.target.y}}};
                          },
                      },
                      action);
}

Action action_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("action must be a JSON object");
    if (j.contains("omega")) return AngularAction{j.at("omega").get<double>()};
    if (j.contains("heading")) return HeadingAction{j.at("heading").get<double>()};
    if (j.contains("waypoint")) {
        const auto& w = j.at("waypoint");
        return WaypointAction{{w.at(0).get<double>(), w.at(1).get<double>()}};
    }
    throw std::invalid_argument("action needs one of omega, heading, waypoint");
}

int EpisodeStatus::completed_count() const {
    return static_cast<int>(std::count(completed.begin(), completed.end(), true));
}

nlohmann::json reward_to_json(const RewardBreakdown& r) {
    return {{"collision", r.collision}, {"progress", r.progress}, {"completion", r.completion}, {"total", r.total()}};
}

nlohmann::json status_to_json(const EpisodeStatus& s) {
    return {{"terminated", s.terminated},
            {"truncated", s.truncated},
            {"nav_success", s.nav_success},
            {"completed", s.completed},
            {"steps", s.steps},
            {"steps_since_completion", s.steps_since_completion}};
}

Environment::Environment(EnvConfig config) : config_(std::move(config)) {
    config_.validate();
    reset();
}

Observation Environment::reset() { return reset(config_.seed); }

Observation Environment::reset(std::uint64_t seed) {
    config_.seed = seed;
    generated_ = generate_world(config_);
    robot_start_ = generated_.world.robot().pose;
    DistanceGrid goal_dt = goal_distance_transform(generated_.static_map, generated_.goal, 0.5 * config_.robot_width);
    renderer_ = ObservationRenderer(config_, generated_.static_map, generated_.goal, std::move(goal_dt));
    box_dt_ = is_navigation(config_.kind)
                  ? DistanceGrid{}
                  : goal_distance_transform(generated_.static_map, generated_.goal, 0.5 * config_.box_size);
    status_ = EpisodeStatus{};
    last_info_ = StepInfo{};
    initial_centroids_.clear();
    for (int id : generated_.movable_ids) initial_centroids_.push_back(generated_.world.find(id)->pose.position());
    if (!is_navigation(config_.kind)) {
        status_.completed.assign(generated_.movable_ids.size(), false);
        // Boxes never start completed by construction, but overrides might place them so.
        for (std::size_t i = 0; i < generated_.movable_ids.size(); ++i) {
            status_.completed[i] = box_done(*generated_.world.find(generated_.movable_ids[i]));
        }
    }
    last_goal_distance_ = robot_goal_distance();
    return observe();
}

double Environment::robot_goal_distance() const {
    const Vec2 p = world().robot().pose.position();
    return sample_distance(renderer_.goal_dt(), p, goal().contains(p));
}

double Environment::box_goal_distance(const Body& box) const {
    const Vec2 p = box.pose.position();
    return sample_distance(box_dt_, p, goal().contains(p));
}

bool Environment::box_done(const Body& box) const {
    if (config_.kind == EnvKind::box_delivery) return goal().contains(box.pose.position());
    const auto verts = box.world_vertices();
    return std::all_of(verts.begin(), verts.end(), [&](Vec2 v) { return goal().contains(v); });
}

std::vector<MovableStyle> Environment::styles() const {
    std::vector<MovableStyle> out(status_.completed.size(), MovableStyle::normal);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!status_.completed[i]) continue;
        out[i] = config_.kind == EnvKind::box_delivery ? MovableStyle::hidden : MovableStyle::completed;
    }
    return out;
}

Observation Environment::observe() const { return renderer_.render(world(), styles()); }

StepInfo Environment::execute(const Action& action) {
    WorldState& w = generated_.world;
    const PhysicsConfig& phys = config_.physics;
    const auto wrong = [&](const char* got) {
        return ContractViolation(std::string(got) + " action sent to an environment in " +
                                 to_string(config_.action_mode) + " mode");
    };
    return std::visit(
        overloaded{
            [&](const AngularAction& a) {
                if (config_.action_mode != ActionMode::angular_velocity) throw wrong("angular velocity");
                return step_world(w, UnicycleDrive{a.omega}, phys);
            },
            [&](const HeadingAction& a) {
                if (config_.action_mode != ActionMode::heading_step) throw wrong("heading");
                return apply_heading_step(w, a.heading, config_.step_distance, phys);
            },
            [&](const WaypointAction& a) {
                if (config_.action_mode != ActionMode::waypoint) throw wrong("waypoint");
                StepInfo total;
                const double start_gap = distance(w.robot().pose.position(), a.target);
                const int max_legs = static_cast<int>(std::ceil(2.0 * start_gap / config_.step_distance)) + 8;
                for (int leg = 0; leg < max_legs; ++leg) {
                    const Vec2 gap = a.target - w.robot().pose.position();
                    if (norm(gap) <= config_.resolution) break;
                    const StepInfo s = apply_heading_step(w, std::atan2(gap.y, gap.x),
                                                          std::min(config_.step_distance, norm(gap)), phys);
                    total.accumulate(s);
                    if (s.immobilized) {
                        total.immobilized = true;
                        break;
                    }
                }
                return total;
            },
        },
        action);
}

double Environment::collision_impulse(const StepInfo& info) const {
    double sum = 0.0;
    for (const CollisionEvent& c : info.collisions) {
        if (c.body_a != kRobotId && c.body_b != kRobotId) continue;
        const int other = c.body_a == kRobotId ? c.body_b : c.body_a;
        const bool other_static = other >= kFirstStaticId;
        const bool counts = config_.kind == EnvKind::maze ||
                            (config_.kind == EnvKind::ship_ice ? !other_static : other_static);
        if (counts) sum += c.impulse;
    }
    return sum;
}

StepResult Environment::step(const Action& action) {
    if (status_.finished()) throw ContractViolation("step called after the episode finished; call reset first");

    std::vector<double> box_before;
    if (!is_navigation(config_.kind)) {
        for (int id : movable_ids()) box_before.push_back(box_goal_distance(*world().find(id)));
    }

    StepResult out;
    out.info = execute(action);
    last_info_ = out.info;
    ++status_.steps;

    RewardBreakdown& r = out.reward;
    const RewardConfig& rc = config_.rewards;
    r.collision = -rc.collision_beta * std::min(collision_impulse(out.info), rc.impulse_cap) / rc.impulse_cap;

    const Body& robot = world().robot();
    if (is_navigation(config_.kind)) {
        const double now = robot_goal_distance();
        if (config_.kind == EnvKind::maze) {
            if (now != kUnreachable && last_goal_distance_ != kUnreachable) {
                r.progress = rc.distance_reward * (last_goal_distance_ - now);
            }
        } else {
            const Vec2 to_goal = goal().nearest_point(robot.pose.position()) - robot.pose.position();
            if (norm(to_goal) > 0.0) r.progress = rc.heading_reward * dot(robot.pose.heading(), normalized(to_goal));
        }
        last_goal_distance_ = now;
        if (goal().contains(robot.pose.position())) {
            status_.nav_success = true;
            status_.terminated = true;
            r.completion = rc.terminal_reward;
        } else if (config_.max_steps > 0 && status_.steps >= config_.max_steps) {
            status_.truncated = true;
        }
    } else {
        int newly = 0;
        for (std::size_t i = 0; i < movable_ids().size(); ++i) {
            if (status_.completed[i]) continue;
            const Body& box = *world().find(movable_ids()[i]);
            const double now = box_goal_distance(box);
            if (now != kUnreachable && box_before[i] != kUnreachable) {
                r.progress += rc.box_progress_reward * (box_before[i] - now);
            }
            if (box_done(box)) {
                status_.completed[i] = true;
                ++newly;
            }
        }
        r.completion = rc.box_completion_reward * newly;
        status_.steps_since_completion = newly > 0 ? 0 : status_.steps_since_completion + 1;
        if (status_.completed_count() == static_cast<int>(status_.completed.size())) {
            status_.terminated = true;
        } else if (status_.steps_since_completion >= config_.no_progress_limit ||
                   (config_.max_steps > 0 && status_.steps >= config_.max_steps)) {
            status_.truncated = true;
        }
    }

    out.observation = observe();
    out.status = status_;
    return out;
}

EpisodeRecord Environment::record() const {
    EpisodeRecord rec;
    rec.env = to_string(config_.kind);
    rec.seed = config_.seed;
    rec.navigation = is_navigation(config_.kind);
    const Body& robot = world().robot();
    rec.robot_mass = robot.mass;
    rec.robot_path_length = robot.traveled;
    rec.robot_start = robot_start_.position();
    rec.robot_radius = 0.5 * config_.robot_width;
    rec.nav_success = status_.nav_success;
    for (std::size_t i = 0; i < movable_ids().size(); ++i) {
        const Body& b = *world().find(movable_ids()[i]);
        ObjectRecord o;
        o.id = b.id;
        o.mass = b.mass;
        o.traveled = b.traveled;
        o.initial_centroid = initial_centroids_[i];
        o.success = !rec.navigation && status_.completed[i];
        o.inradius = b.shape.inradius();
        rec.objects.push_back(o);
    }
    rec.static_map = static_map();
    rec.goal = goal();
    return rec;
}

}  // namespace npin
