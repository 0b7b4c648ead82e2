#include "npin/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "npin/path_planner.hpp"

namespace npin {

DtDescentPolicy::DtDescentPolicy(double lookahead, double gain) : lookahead_(lookahead), gain_(gain) {}

std::optional<Action> DtDescentPolicy::act(const Observation& obs, const Environment& env) {
    const Pose pose = env.world().robot().pose;
    const WindowFrame frame = observation_frame(env.config(), pose);
    const ChannelGrid& dt = obs.channel("goal_dt");
    constexpr int kSteps = 12;  // 15 degree spokes over the full circle
    double best = std::numeric_limits<double>::infinity(), worst = -best;
    double best_angle = 0.0;
    // Spokes in order of increasing turn so ties keep the current heading.
    for (int i = 0; i <= 2 * kSteps; ++i) {
        const int k = (i % 2 == 0 ? 1 : -1) * ((i + 1) / 2);
        if (k == kSteps + 1 || k == -kSteps) continue;
        const double turn = k * std::numbers::pi / kSteps;
        const Vec2 px = frame.to_pixel(pose.position() + unit_from_angle(pose.theta + turn) * lookahead_);
        const Cell c{static_cast<int>(std::floor(px.x)), static_cast<int>(std::floor(px.y))};
        if (!dt.contains(c)) continue;
        const double v = dt[c];
        worst = std::max(worst, v);
        if (v < best) {
            best = v;
            best_angle = turn;
        }
    }
    if (!(worst - best > 1e-9)) {
        notes_.push_back("flat goal-DT window at step " + std::to_string(env.status().steps));
        return AngularAction{0.0};
    }
    const double limit = env.config().physics.max_angular_velocity;
    return AngularAction{std::clamp(gain_ * best_angle, -limit, limit)};
}

void RandomPolicy::reset(std::uint64_t seed) {
    rng_ = Rng(seed);
    notes_.clear();
}

std::optional<Action> RandomPolicy::act(const Observation&, const Environment& env) {
    switch (env.config().action_mode) {
        case ActionMode::angular_velocity: {
            const double w = env.config().physics.max_angular_velocity;
            return AngularAction{rng_.uniform(-w, w)};
        }
        case ActionMode::heading_step: return HeadingAction{rng_.uniform(-std::numbers::pi, std::numbers::pi)};
        case ActionMode::waypoint: {
            const Aabb& ws = env.workspace();
            return WaypointAction{{rng_.uniform(ws.lo.x, ws.hi.x), rng_.uniform(ws.lo.y, ws.hi.y)}};
        }
    }
    return std::nullopt;
}

std::optional<Action> ScriptedPolicy::act(const Observation&, const Environment&) {
    if (next_ >= actions_.size()) return std::nullopt;
    return actions_[next_++];
}

GtspPolicy::GtspPolicy(std::size_t exact_limit, double approach_margin)
    : exact_limit_(exact_limit), margin_(approach_margin) {}

void GtspPolicy::reset(std::uint64_t) {
    planned_ = false;
    graph_ = GtspGraph{};
    tour_ = GtspTour{};
    cursor_ = 0;
    queue_.clear();
    transit_left_ = 0;
    last_was_transit_ = false;
    executed_.clear();
    notes_.clear();
}

void GtspPolicy::plan(const Environment& env) {
    const EnvConfig& c = env.config();
    if (c.kind != EnvKind::area_clearing || c.action_mode != ActionMode::waypoint) {
        throw ConfigError("gtsp policy needs area_clearing in waypoint mode");
    }
    std::vector<int> boxes;
    for (std::size_t i = 0; i < env.movable_ids().size(); ++i) {
        if (!env.status().completed[i]) boxes.push_back(env.movable_ids()[i]);
    }
    auto paths = enumerate_clearance_paths(env.world(), boxes, c.clearance, robot_shape(c), env.workspace(), margin_);
    graph_ = build_gtsp_graph(std::move(paths), env.world().robot().pose.position(), env.static_map(),
                              0.5 * c.robot_width);
    tour_ = solve_gtsp(graph_, exact_limit_);
    planned_ = true;
}

bool GtspPolicy::start_next_path(const Environment& env) {
    const EnvConfig& c = env.config();
    const double half_length = robot_shape(c).support({1.0, 0.0});
    while (cursor_ < tour_.vertices.size()) {
        const std::size_t idx = cursor_++;
        const ClearancePath& p = graph_.paths[static_cast<std::size_t>(tour_.vertices[idx]) - 1];
        if (env.status().completed[static_cast<std::size_t>(p.box_id) - 1]) {
            notes_.push_back("box " + std::to_string(p.box_id) + " already cleared, leg skipped");
            continue;
        }
        // Geometry follows the box if it was knocked since planning; the edge stays as planned.
        const Body& box = *env.world().find(p.box_id);
        const Vec2 centre = box.pose.position();
        const Vec2 approach = centre - p.direction * (half_length + box.shape.circumradius() + margin_);
        const Vec2 push_end = edge_crossing(c.clearance, p.edge, centre) + p.direction * (2.0 * box.shape.inradius());

        OccupancyGrid map = env.static_map();
        rasterize_polygon(map, box.world_vertices());
        std::vector<Vec2> route;
        try {
            const StaticPath path = StaticPathPlanner(map, 0.5 * c.robot_width + 0.1)
                                        .plan(env.world().robot().pose.position(), GoalRegion(GoalDisk{approach, 0.0}));
            route.assign(path.waypoints.begin() + 1, path.waypoints.end());
        } catch (const UnreachableError&) {
            notes_.push_back("no detour around box " + std::to_string(p.box_id) + ", driving straight");
        }
        if (route.empty() || distance(route.back(), approach) > 1e-9) route.push_back(approach);
        queue_ = route;
        queue_.push_back(push_end);
        transit_left_ = route.size();
        executed_.push_back(idx);
        return true;
    }
    return false;
}

std::optional<Action> GtspPolicy::act(const Observation&, const Environment& env) {
    if (!planned_) plan(env);
    if (last_was_transit_ && env.last_info().immobilized) {
        notes_.push_back("immobilized before reaching the push of tour entry " + std::to_string(executed_.back()) +
                         ", leg skipped");
        queue_.clear();
        transit_left_ = 0;
    }
    while (queue_.empty()) {
        if (!start_next_path(env)) return std::nullopt;
    }
    const Vec2 next = queue_.front();
    queue_.erase(queue_.begin());
    last_was_transit_ = transit_left_ > 0;
    if (transit_left_ > 0) --transit_left_;
    return WaypointAction{next};
}

nlohmann::json GtspPolicy::plan_dump() const {
    if (!planned_) return nullptr;
    nlohmann::json j = plan_to_json(graph_, tour_);
    j["executed"] = executed_;
    j["notes"] = notes_;
    return j;
}

std::vector<std::string> policy_names() { return {"dt_descent", "random", "gtsp"}; }

std::unique_ptr<Policy> make_policy(const std::string& name, const nlohmann::json& params) {
    if (name == "dt_descent") {
        return std::make_unique<DtDescentPolicy>(params.value("lookahead", 0.6), params.value("gain", 2.0));
    }
    if (name == "random") return std::make_unique<RandomPolicy>();
    if (name == "gtsp") {
        return std::make_unique<GtspPolicy>(params.value("exact_limit", std::size_t{10}),
                                            params.value("approach_margin", 0.1));
    }
    throw ConfigError("unknown policy: " + name + " (expected dt_descent, random or gtsp)");
}

}  // namespace npin
