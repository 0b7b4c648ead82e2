#include "npin/env_config.hpp"


namespace npin {

using nlohmann::json;

std::string to_string(EnvKind kind) {
    switch (kind) {
        case EnvKind::maze: return "maze";
        case EnvKind::ship_ice: return "ship_ice";
        case EnvKind::box_delivery: return "box_delivery";
        case EnvKind::area_clearing: return "area_clearing";
    }
    return "unknown";
}

std::string to_string(ActionMode mode) {
    switch (mode) {
        case ActionMode::angular_velocity: return "angular_velocity";
        case ActionMode::heading_step: return "heading_step";
        case ActionMode::waypoint: return "waypoint";
    }
    return "unknown";
}

EnvKind env_kind_from_string(const std::string& name) {
    if (name == "maze") return EnvKind::maze;
    if (name == "ship_ice") return EnvKind::ship_ice;
    if (name == "box_delivery") return EnvKind::box_delivery;
    if (name == "area_clearing") return EnvKind::area_clearing;
    throw ConfigError("unknown environment kind: " + name);
}

ActionMode action_mode_from_string(const std::string& name) {
    if (name == "angular_velocity") return ActionMode::angular_velocity;
    if (name == "heading_step") return ActionMode::heading_step;
    if (name == "waypoint") return ActionMode::waypoint;
    throw ConfigError("unknown action mode: " + name);
}

EnvConfig EnvConfig::defaults_for(EnvKind kind) {
    EnvConfig c;
    c.kind = kind;
    switch (kind) {
        case EnvKind::maze:
            c.action_mode = ActionMode::angular_velocity;
            c.max_steps = 3000;
            break;
        case EnvKind::ship_ice:
            c.action_mode = ActionMode::angular_velocity;
            c.max_steps = 3000;
            c.robot_length = 2.0;
            c.robot_width = 1.0;
            c.robot_mass = 50.0;
            c.movable_density = 9.0;
            break;
        case EnvKind::box_delivery:
            c.action_mode = ActionMode::heading_step;
            c.max_steps = 0;
            c.workspace_width = 10.0;
            c.workspace_height = 10.0;
            c.receptacle = {{8.5, 8.5}, {10.0, 10.0}};
            break;
        case EnvKind::area_clearing:
            c.action_mode = ActionMode::heading_step;
            c.max_steps = 0;
            c.workspace_width = 12.0;
            c.workspace_height = 12.0;
            c.clearance = {{3.0, 3.5}, {9.0, 9.5}};
            break;
    }
    return c;
}

void EnvConfig::validate() const {
    physics.validate();
    if (!(concentration >= 0.0 && concentration <= 0.5)) {
        throw ConfigError("concentration must lie in [0, 0.5]");
    }
    if (!is_navigation(kind) && box_count < 1) throw ConfigError("box_count must be >= 1");
    if (obstacle_count < 0 || static_obstacle_count < 0) throw ConfigError("obstacle counts must be >= 0");
    if (window <= 0 || window % 2 != 0) throw ConfigError("window must be a positive even number of cells");
    if (!(resolution > 0.0)) throw ConfigError("resolution must be > 0");
    if (!(step_distance > 0.0)) throw ConfigError("step_distance must be > 0");
    if (!(goal_distance > 2.0)) throw ConfigError("goal_distance must exceed 2 m");
    if (!(channel_width > 2.0 * robot_width)) throw ConfigError("channel_width too small for the ship");
    if (!(robot_length > 0.0 && robot_width > 0.0 && robot_mass > 0.0)) {
        throw ConfigError("robot dimensions and mass must be positive");
    }
    if (!(movable_density > 0.0)) throw ConfigError("movable_density must be > 0");
    if (!(box_size > 0.0 && column_size > 0.0)) throw ConfigError("box_size and column_size must be > 0");
    if (!(obstacle_min_size > 0.0 && obstacle_max_size >= obstacle_min_size)) {
        throw ConfigError("obstacle size range is invalid");
    }
    if (max_steps < 0 || no_progress_limit < 1) throw ConfigError("step limits out of range");
    if (rewards.impulse_cap <= 0.0) throw ConfigError("impulse_cap must be > 0");
    if (is_navigation(kind) && action_mode != ActionMode::angular_velocity) {
        throw ConfigError("navigation tasks use the angular_velocity action mode");
    }
    if (!is_navigation(kind) && action_mode == ActionMode::angular_velocity) {
        throw ConfigError("manipulation tasks use heading_step or waypoint actions");
    }
    if (layout != "u_shape" && layout != "open" && layout != "zigzag") {
        throw ConfigError("unknown maze layout: " + layout);
    }
    const auto rect_ok = [](const Aabb& r) { return r.hi.x > r.lo.x && r.hi.y > r.lo.y; };
    if (!rect_ok(receptacle) || !rect_ok(clearance)) throw ConfigError("receptacle/clearance rectangle is empty");
}

namespace {

json rect_to_json(const Aabb& r) { return json::array({r.lo.x, r.lo.y, r.hi.x, r.hi.y}); }
Aabb rect_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw ConfigError("rectangle must be [x0, y0, x1, y1]");
    return {{j[0].get<double>(), j[1].get<double>()}, {j[2].get<double>(), j[3].get<double>()}};
}

// Visits every config key with a reference to its storage.
template <class Config, class F>
void visit_fields(Config& c, F&& f) {
    f("seed", c.seed);
    f("layout", c.layout);
    f("obstacle_count", c.obstacle_count);
    f("obstacle_min_size", c.obstacle_min_size);
    f("obstacle_max_size", c.obstacle_max_size);
    f("concentration", c.concentration);
    f("goal_distance", c.goal_distance);
    f("channel_width", c.channel_width);
    f("box_count", c.box_count);
    f("static_obstacle_count", c.static_obstacle_count);
    f("box_size", c.box_size);
    f("column_size", c.column_size);
    f("workspace_width", c.workspace_width);
    f("workspace_height", c.workspace_height);
    f("resolution", c.resolution);
    f("window", c.window);
    f("step_distance", c.step_distance);
    f("max_steps", c.max_steps);
    f("no_progress_limit", c.no_progress_limit);
    f("robot_length", c.robot_length);
    f("robot_width", c.robot_width);
    f("robot_mass", c.robot_mass);
    f("movable_density", c.movable_density);
    f("dt", c.physics.dt);
    f("mu", c.physics.mu);
    f("g", c.physics.g);
    f("restitution", c.physics.restitution);
    f("robot_speed", c.physics.robot_speed);
    f("linear_damping", c.physics.linear_damping);
    f("angular_damping", c.physics.angular_damping);
    f("max_angular_velocity", c.physics.max_angular_velocity);
    f("contact_friction", c.physics.contact_friction);
    f("solver_iterations", c.physics.solver_iterations);
    f("position_iterations", c.physics.position_iterations);
    f("movable_collisions", c.physics.movable_collisions);
    f("collision_beta", c.rewards.collision_beta);
    f("impulse_cap", c.rewards.impulse_cap);
    f("distance_reward", c.rewards.distance_reward);
    f("heading_reward", c.rewards.heading_reward);
    f("terminal_reward", c.rewards.terminal_reward);
    f("box_progress_reward", c.rewards.box_progress_reward);
    f("box_completion_reward", c.rewards.box_completion_reward);
}

void apply_key(EnvConfig& c, const std::string& key, const json& value) {
    try {
        if (key == "kind") {
            c.kind = env_kind_from_string(value.get<std::string>());
        } else if (key == "action_mode") {
            c.action_mode = action_mode_from_string(value.get<std::string>());
        } else if (key == "receptacle") {
            c.receptacle = rect_from_json(value);
        } else if (key == "clearance") {
            c.clearance = rect_from_json(value);
        } else if (key == "robot_start") {
            if (value.is_null()) {
                c.robot_start.reset();
            } else {
                if (!value.is_array() || value.size() != 3) throw ConfigError("robot_start must be [x, y, theta]");
                c.robot_start = Pose{value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
            }
        } else if (key == "movables") {
            if (value.is_null()) {
                c.movables.reset();
            } else {
                std::vector<MovableSpec> specs;
                for (const json& m : value) {
                    MovableSpec spec;
                    for (const json& v : m.at("vertices")) spec.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                    specs.push_back(std::move(spec));
                }
                c.movables = std::move(specs);
            }
        } else {
            bool found = false;
            visit_fields(c, [&](const char* name, auto& field) {
                if (key == name) {
                    field = value.get<std::remove_reference_t<decltype(field)>>();
                    found = true;
                }
            });
            if (!found) throw ConfigError("unknown config key: " + key);
        }
    } catch (const json::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

}  // namespace

json config_to_json(const EnvConfig& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["action_mode"] = to_string(c.action_mode);
    visit_fields(c, [&](const char* name, const auto& field) { j[name] = field; });
    j["receptacle"] = rect_to_json(c.receptacle);
    j["clearance"] = rect_to_json(c.clearance);
    j["robot_start"] = c.robot_start ? json::array({c.robot_start->x, c.robot_start->y, c.robot_start->theta})
                                     : json(nullptr);
    if (c.movables) {
        json ms = json::array();
        for (const MovableSpec& m : *c.movables) {
            json verts = json::array();
            for (const Vec2& v : m.vertices) verts.push_back({v.x, v.y});
            ms.push_back({{"vertices", std::move(verts)}});
        }
        j["movables"] = std::move(ms);
    } else {
        j["movables"] = nullptr;
    }
    return j;
}

EnvConfig apply_overrides(const EnvConfig& base, const json& overrides) {
    if (!overrides.is_object()) throw ConfigError("config must be a JSON object");
    EnvConfig c = base;
    for (const auto& [key, value] : overrides.items()) {
        if (key == "kind") continue;
        apply_key(c, key, value);
    }
    return c;
}

EnvConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    EnvKind kind = EnvKind::maze;
    if (j.contains("kind")) kind = env_kind_from_string(j.at("kind").get<std::string>());
    EnvConfig c = apply_overrides(EnvConfig::defaults_for(kind), j);
    c.validate();
    return c;
}

}  // namespace npin
