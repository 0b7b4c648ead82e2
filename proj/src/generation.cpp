#include "npin/generation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace npin {

namespace {

std::vector<Vec2> rect(Vec2 lo, Vec2 hi) { return {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}; }

std::vector<Vec2> rotated_square(Vec2 c, double side, double angle) {
    const double h = 0.5 * side;
    std::vector<Vec2> out;
    for (const Vec2 v : {Vec2{-h, -h}, Vec2{h, -h}, Vec2{h, h}, Vec2{-h, h}}) out.push_back(c + rotate(v, angle));
    return out;
}

// Pushes every vertex `gap` further from the centroid.
std::vector<Vec2> expanded(const std::vector<Vec2>& poly, double gap) {
    const Vec2 c = polygon_centroid(poly);
    std::vector<Vec2> out;
    out.reserve(poly.size());
    for (const Vec2& v : poly) out.push_back(v + normalized(v - c) * gap);
    return out;
}

bool inside(const Aabb& outer, const std::vector<Vec2>& poly, double margin = 0.0) {
    const Aabb b = bounds_of(poly);
    return b.lo.x >= outer.lo.x + margin && b.lo.y >= outer.lo.y + margin && b.hi.x <= outer.hi.x - margin &&
           b.hi.y <= outer.hi.y - margin;
}

// Rejection-sampling bookkeeping: polygons already claimed plus their bounds.
class Placer {
public:
    void add(std::vector<Vec2> poly) {
        boxes_.push_back(bounds_of(poly));
        polys_.push_back(std::move(poly));
    }
    bool free(const std::vector<Vec2>& poly, double gap) const {
        const std::vector<Vec2> grown = expanded(poly, gap);
        const Aabb b = bounds_of(grown);
        for (std::size_t i = 0; i < polys_.size(); ++i) {
            if (b.overlaps(boxes_[i]) && convex_overlap(grown, polys_[i], 0.0)) return false;
        }
        return true;
    }

private:
    std::vector<std::vector<Vec2>> polys_;
    std::vector<Aabb> boxes_;
};

void add_boundary(WorldState& world, const Aabb& ws, int& next_static) {
    constexpr double t = kMapMargin;
    const std::vector<std::vector<Vec2>> walls = {
        rect({ws.lo.x - t, ws.lo.y - t}, {ws.hi.x + t, ws.lo.y}),
        rect({ws.lo.x - t, ws.hi.y}, {ws.hi.x + t, ws.hi.y + t}),
        rect({ws.lo.x - t, ws.lo.y}, {ws.lo.x, ws.hi.y}),
        rect({ws.hi.x, ws.lo.y}, {ws.hi.x + t, ws.hi.y}),
    };
    for (const auto& w : walls) world.bodies.push_back(make_body(next_static++, BodyKind::fixed, w));
}

Body make_robot(const EnvConfig& config, const Pose& pose) {
    return make_body(kRobotId, BodyKind::robot, robot_shape(config), pose, config.robot_mass);
}

void add_movable(GeneratedWorld& out, const EnvConfig& config, std::vector<Vec2> verts) {
    const int id = static_cast<int>(out.movable_ids.size()) + 1;
    const double area = ConvexPolygon(verts).area();
    out.world.bodies.push_back(make_body(id, BodyKind::movable, std::move(verts), config.movable_density * area));
    out.movable_ids.push_back(id);
}

// Explicit movables from the config replace the sampled ones.
bool add_override_movables(GeneratedWorld& out, const EnvConfig& config) {
    if (!config.movables) return false;
    for (const MovableSpec& m : *config.movables) add_movable(out, config, m.vertices);
    return true;
}

std::vector<Vec2> random_floe(Rng& rng, double radius) {
    const int k = static_cast<int>(rng.uniform_int(5, 8));
    const double step = 2.0 * std::numbers::pi / k;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<Vec2> verts;
    for (int i = 0; i < k; ++i) {
        // Jitter keeps every gap above 0.4 * step, so the polygon stays convex.
        const double a = phase + step * (i + rng.uniform(-0.3, 0.3));
        verts.push_back(unit_from_angle(a) * radius);
    }
    return verts;
}

void generate_maze(GeneratedWorld& out, const EnvConfig& config, Rng& rng) {
    const MazeLayout layout = maze_layout(config.layout);
    out.workspace = {{0.0, 0.0}, {layout.width, layout.height}};
    int next_static = kFirstStaticId;
    add_boundary(out.world, out.workspace, next_static);
    Placer placer;
    for (const auto& w : layout.walls) {
        out.world.bodies.push_back(make_body(next_static++, BodyKind::fixed, w));
        placer.add(w);
    }
    const Pose start = config.robot_start.value_or(layout.start);
    const Body robot = make_robot(config, start);
    out.world.bodies.insert(out.world.bodies.begin(), robot);
    out.goal = GoalRegion(layout.goal);
    if (add_override_movables(out, config)) return;

    placer.add(expanded(robot.world_vertices(), 0.3));
    for (int i = 0; i < config.obstacle_count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
            const double side = rng.uniform(config.obstacle_min_size, config.obstacle_max_size);
            const double angle = rng.uniform(0.0, std::numbers::pi / 2.0);
            const Vec2 c{rng.uniform(0.0, layout.width), rng.uniform(0.0, layout.height)};
            const auto poly = rotated_square(c, side, angle);
            if (!inside(out.workspace, poly, 0.05) || !placer.free(poly, 0.05)) continue;
            if (distance(c, layout.goal.center) < layout.goal.radius + side) continue;
            placer.add(poly);
            add_movable(out, config, poly);
            placed = true;
        }
        if (!placed) {
            throw GenerationError("maze: could not place movable obstacle " + std::to_string(i + 1) + " of " +
                                  std::to_string(config.obstacle_count) + " in free space");
        }
    }
}

void generate_ship_ice(GeneratedWorld& out, const EnvConfig& config, Rng& rng) {
    const double w = config.channel_width;
    out.workspace = {{0.0, -2.0}, {w, config.goal_distance + 2.0}};
    int next_static = kFirstStaticId;
    add_boundary(out.world, out.workspace, next_static);
    const double margin = std::max(2.0, config.robot_width);
    const Pose start = config.robot_start.value_or(Pose{rng.uniform(margin, w - margin), 0.0, std::numbers::pi / 2.0});
    out.world.bodies.insert(out.world.bodies.begin(), make_robot(config, start));
    out.goal = GoalRegion(GoalLine{config.goal_distance});
    if (add_override_movables(out, config)) return;
    for (auto& floe : generate_ice_field(rng, config.concentration, ice_region(config))) {
        add_movable(out, config, std::move(floe));
    }
}

void place_columns(GeneratedWorld& out, const EnvConfig& config, Rng& rng, Placer& placer, const Aabb& keep_out,
                   int& next_static) {
    for (int i = 0; i < config.static_obstacle_count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
            const Vec2 c{rng.uniform(out.workspace.lo.x, out.workspace.hi.x),
                         rng.uniform(out.workspace.lo.y, out.workspace.hi.y)};
            const auto poly = rotated_square(c, config.column_size, 0.0);
            if (!inside(out.workspace, poly, 0.6)) continue;
            if (keep_out.overlaps(bounds_of(poly), 0.3) || !placer.free(poly, 0.6)) continue;
            placer.add(poly);
            out.world.bodies.push_back(make_body(next_static++, BodyKind::fixed, poly));
            placed = true;
        }
        if (!placed) {
            throw GenerationError("could not place static column " + std::to_string(i + 1) + " of " +
                                  std::to_string(config.static_obstacle_count));
        }
    }
}

void place_boxes(GeneratedWorld& out, const EnvConfig& config, Rng& rng, Placer& placer, const Aabb& region,
                 const Aabb* keep_out) {
    for (int i = 0; i < config.box_count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 4000 && !placed; ++attempt) {
            const Vec2 c{rng.uniform(region.lo.x, region.hi.x), rng.uniform(region.lo.y, region.hi.y)};
            const double angle = rng.uniform(0.0, std::numbers::pi / 2.0);
            const auto poly = rotated_square(c, config.box_size, angle);
            if (!inside(region, poly, 0.05) || !placer.free(poly, 0.1)) continue;
            if (keep_out && keep_out->overlaps(bounds_of(poly), 0.3)) continue;
            placer.add(poly);
            add_movable(out, config, poly);
            placed = true;
        }
        if (!placed) {
            throw GenerationError("could not place box " + std::to_string(i + 1) + " of " +
                                  std::to_string(config.box_count) + " without overlaps");
        }
    }
}

void generate_box_delivery(GeneratedWorld& out, const EnvConfig& config, Rng& rng) {
    out.workspace = {{0.0, 0.0}, {config.workspace_width, config.workspace_height}};
    int next_static = kFirstStaticId;
    add_boundary(out.world, out.workspace, next_static);
    out.goal = GoalRegion(GoalPolygon{rect(config.receptacle.lo, config.receptacle.hi)});
    Placer placer;
    place_columns(out, config, rng, placer, config.receptacle, next_static);

    Pose start;
    if (config.robot_start) {
        start = *config.robot_start;
    } else {
        bool placed = false;
        for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
            start = Pose{rng.uniform(out.workspace.lo.x, out.workspace.hi.x),
                         rng.uniform(out.workspace.lo.y, out.workspace.hi.y),
                         normalize_angle(rng.uniform(-std::numbers::pi, std::numbers::pi))};
            const auto fp = robot_shape(config).transformed(start);
            placed = inside(out.workspace, fp, 0.1) && placer.free(fp, 0.2) &&
                     !config.receptacle.overlaps(bounds_of(fp), 0.2);
        }
        if (!placed) throw GenerationError("box_delivery: could not place the robot");
    }
    const Body robot = make_robot(config, start);
    out.world.bodies.insert(out.world.bodies.begin(), robot);
    if (add_override_movables(out, config)) return;
    placer.add(expanded(robot.world_vertices(), 0.2));
    const Aabb region{out.workspace.lo + Vec2{0.3, 0.3}, out.workspace.hi - Vec2{0.3, 0.3}};
    place_boxes(out, config, rng, placer, region, &config.receptacle);
}

void generate_area_clearing(GeneratedWorld& out, const EnvConfig& config, Rng& rng) {
    out.workspace = {{0.0, 0.0}, {config.workspace_width, config.workspace_height}};
    int next_static = kFirstStaticId;
    add_boundary(out.world, out.workspace, next_static);
    out.goal = GoalRegion(GoalRectExterior{config.clearance});
    Placer placer;
    // Keep the spawn band clear of columns.
    placer.add(rect({out.workspace.lo.x, out.workspace.lo.y}, {out.workspace.hi.x, out.workspace.lo.y + 1.6}));
    place_columns(out, config, rng, placer, config.clearance, next_static);

    const double margin = std::max(1.0, 0.5 * config.robot_length + 0.2);
    const Pose start = config.robot_start.value_or(
        Pose{rng.uniform(out.workspace.lo.x + margin, out.workspace.hi.x - margin), out.workspace.lo.y + 1.0,
             std::numbers::pi / 2.0});
    out.world.bodies.insert(out.world.bodies.begin(), make_robot(config, start));
    if (add_override_movables(out, config)) return;
    place_boxes(out, config, rng, placer, config.clearance, nullptr);
}

}  // namespace

MazeLayout maze_layout(const std::string& name) {
    MazeLayout m;
    m.name = name;
    if (name == "u_shape") {
        // One divider from the bottom wall: start and goal sit on either side of it,
        // so the collision-free route wraps over the divider's top end.
        m.walls.push_back(rect({3.8, 0.0}, {4.2, 5.5}));
        m.start = Pose{6.0, 1.0, std::numbers::pi / 2.0};
        m.goal = GoalDisk{{2.0, 1.0}, 0.5};
    } else if (name == "open") {
        m.start = Pose{4.0, 1.0, std::numbers::pi / 2.0};
        m.goal = GoalDisk{{4.0, 7.0}, 0.5};
    } else if (name == "zigzag") {
        m.walls.push_back(rect({2.5, 0.0}, {2.9, 5.5}));
        m.walls.push_back(rect({5.1, 2.5}, {5.5, 8.0}));
        m.start = Pose{1.2, 1.0, std::numbers::pi / 2.0};
        m.goal = GoalDisk{{6.8, 1.0}, 0.5};
    } else {
        throw GenerationError("unknown maze layout: " + name);
    }
    return m;
}

ConvexPolygon robot_shape(const EnvConfig& config) {
    const double l = config.robot_length, w = config.robot_width;
    if (config.kind == EnvKind::ship_ice) {
        return ConvexPolygon({{-0.5 * l, -0.5 * w}, {0.3 * l, -0.5 * w}, {0.5 * l, 0.0}, {0.3 * l, 0.5 * w},
                              {-0.5 * l, 0.5 * w}});
    }
    return ConvexPolygon::rectangle(l, w);
}

Aabb ice_region(const EnvConfig& config) {
    return {{0.0, 1.5}, {config.channel_width, config.goal_distance}};
}

double ice_coverage(const std::vector<std::vector<Vec2>>& floes, const Aabb& region) {
    double area = 0.0;
    for (const auto& f : floes) area += signed_area(f);
    return area / region.area();
}

std::vector<std::vector<Vec2>> generate_ice_field(Rng& rng, double concentration, const Aabb& region) {
    if (!(concentration >= 0.0 && concentration <= 0.5)) {
        throw GenerationError("ice concentration must lie in [0, 0.5]");
    }
    constexpr double min_radius = 0.3, max_radius = 1.0;
    const double target = concentration * region.area();
    const double tolerance = 0.005 * region.area();
    std::vector<std::vector<Vec2>> floes;
    Placer placer;
    double covered = 0.0;
    double cap = max_radius;  // shrinks as the field jams: large floes first, small ones fill gaps
    int failures_at_min = 0;
    while (covered < target - tolerance) {
        const double deficit = target - covered;
        std::vector<Vec2> shape = random_floe(rng, rng.uniform(min_radius, cap));
        const double area = signed_area(shape);
        if (area > deficit) {
            // Last floe: shrink it to land on the target, but never below the minimum radius.
            const double scale = std::max(std::sqrt(deficit / area), min_radius / norm(shape[0]));
            for (Vec2& v : shape) v *= scale;
        }
        const Aabb local = bounds_of(shape);
        bool placed = false;
        for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
            const Vec2 c{rng.uniform(region.lo.x - local.lo.x, region.hi.x - local.hi.x),
                         rng.uniform(region.lo.y - local.lo.y, region.hi.y - local.hi.y)};
            std::vector<Vec2> floe;
            for (const Vec2& v : shape) floe.push_back(c + v);
            if (!placer.free(floe, 0.02)) continue;
            covered += signed_area(floe);
            placer.add(floe);
            floes.push_back(std::move(floe));
            placed = true;
        }
        if (placed) {
            failures_at_min = 0;
        } else if (cap > min_radius) {
            cap = std::max(min_radius, cap * 0.9);
        } else if (++failures_at_min > 60) {
            throw GenerationError("ice field: cannot reach concentration " + std::to_string(concentration) +
                                  " (stuck at " + std::to_string(covered / region.area()) + ")");
        }
    }
    return floes;
}

OccupancyGrid rasterize_static(const WorldState& world, const Aabb& workspace, double resolution) {
    const int w = static_cast<int>(std::ceil((workspace.width() + 2.0 * kMapMargin) / resolution - 1e-9));
    const int h = static_cast<int>(std::ceil((workspace.height() + 2.0 * kMapMargin) / resolution - 1e-9));
    OccupancyGrid grid(w, h, resolution, workspace.lo - Vec2{kMapMargin, kMapMargin});
    for (const Body& b : world.bodies) {
        if (b.is_fixed()) rasterize_polygon(grid, b.world_vertices());
    }
    return grid;
}

GeneratedWorld generate_world(const EnvConfig& config) {
    config.validate();
    GeneratedWorld out;
    Rng rng(config.seed);
    switch (config.kind) {
        case EnvKind::maze: generate_maze(out, config, rng); break;
        case EnvKind::ship_ice: generate_ship_ice(out, config, rng); break;
        case EnvKind::box_delivery: generate_box_delivery(out, config, rng); break;
        case EnvKind::area_clearing: generate_area_clearing(out, config, rng); break;
    }
    out.static_map = rasterize_static(out.world, out.workspace, config.resolution);
    return out;
}

}  // namespace npin
