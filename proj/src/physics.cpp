#include "npin/physics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace npin {

std::string to_string(BodyKind kind) {
    switch (kind) {
        case BodyKind::robot: return "robot";
        case BodyKind::movable: return "movable";
        case BodyKind::fixed: return "static";
    }
    return "unknown";
}

BodyKind body_kind_from_string(const std::string& name) {
    if (name == "robot") return BodyKind::robot;
    if (name == "movable") return BodyKind::movable;
    if (name == "static") return BodyKind::fixed;
    throw std::invalid_argument("unknown body kind: " + name);
}

Body make_body(int id, BodyKind kind, ConvexPolygon shape, Pose pose, double mass) {
    if (kind != BodyKind::fixed && !(mass > 0.0 && std::isfinite(mass))) {
        throw std::invalid_argument("body " + std::to_string(id) + ": mass must be positive");
    }
    Body body;
    body.id = id;
    body.kind = kind;
    body.shape = std::move(shape);
    body.pose = pose;
    body.pose.theta = normalize_angle(pose.theta);
    body.mass = kind == BodyKind::fixed ? std::numeric_limits<double>::infinity() : mass;
    return body;
}

Body make_body(int id, BodyKind kind, std::vector<Vec2> world_vertices, double mass) {
    ConvexPolygon shape(std::move(world_vertices));
    const Vec2 c = shape.input_centroid();
    return make_body(id, kind, std::move(shape), Pose{c.x, c.y, 0.0}, mass);
}

void PhysicsConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("physics: dt must be > 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("physics: mu must be >= 0");
    if (!(restitution >= 0.0 && restitution <= 1.0)) {
        throw std::invalid_argument("physics: restitution must lie in [0, 1]");
    }
    if (!(robot_speed > 0.0)) throw std::invalid_argument("physics: robot_speed must be > 0");
    if (!(max_angular_velocity > 0.0)) {
        throw std::invalid_argument("physics: max_angular_velocity must be > 0");
    }
    if (solver_iterations < 1 || position_iterations < 0) {
        throw std::invalid_argument("physics: solver iteration counts out of range");
    }
}

const Body& WorldState::robot() const {
    for (const Body& b : bodies) {
        if (b.kind == BodyKind::robot) return b;
    }
    throw std::logic_error("world has no robot body");
}

Body& WorldState::robot() {
    return const_cast<Body&>(std::as_const(*this).robot());
}

const Body* WorldState::find(int id) const {
    for (const Body& b : bodies) {
        if (b.id == id) return &b;
    }
    return nullptr;
}

Body* WorldState::find(int id) {
    return const_cast<Body*>(std::as_const(*this).find(id));
}

double StepInfo::displacement_of(int id) const {
    for (const auto& d : displacements) {
        if (d.id == id) return d.distance;
    }
    return 0.0;
}

void StepInfo::accumulate(const StepInfo& later) {
    for (const auto& d : later.displacements) {
        auto it = std::find_if(displacements.begin(), displacements.end(),
                               [&](const BodyDisplacement& e) { return e.id == d.id; });
        if (it == displacements.end()) {
            displacements.push_back(d);
        } else {
            it->distance += d.distance;
        }
    }
    for (const auto& c : later.collisions) {
        auto it = std::find_if(collisions.begin(), collisions.end(), [&](const CollisionEvent& e) {
            return e.body_a == c.body_a && e.body_b == c.body_b;
        });
        if (it == collisions.end()) {
            collisions.push_back(c);
        } else {
            it->impulse += c.impulse;
            it->point = c.point;
        }
    }
    robot_static_contact = robot_static_contact || later.robot_static_contact;
    robot_movable_contact = robot_movable_contact || later.robot_movable_contact;
    immobilized = immobilized || later.immobilized;
    robot_progress += later.robot_progress;
    substeps += later.substeps;
}

Pose apply_unicycle_command(const Pose& pose, double angular_velocity, const PhysicsConfig& config) {
    const double w = std::clamp(angular_velocity, -config.max_angular_velocity, config.max_angular_velocity);
    const double v = config.robot_speed;
    const double dt = config.dt;
    Pose out = pose;
    if (std::abs(w) < 1e-12) {
        out.x += v * dt * std::cos(pose.theta);
        out.y += v * dt * std::sin(pose.theta);
    } else {
        const double th1 = pose.theta + w * dt;
        out.x += v / w * (std::sin(th1) - std::sin(pose.theta));
        out.y -= v / w * (std::cos(th1) - std::cos(pose.theta));
        out.theta = th1;
    }
    out.theta = normalize_angle(out.theta);
    return out;
}

double kinetic_energy(const WorldState& world) {
    double e = 0.0;
    for (const Body& b : world.bodies) {
        if (b.is_fixed()) continue;
        e += 0.5 * b.mass * dot(b.linear_velocity, b.linear_velocity);
        e += 0.5 * b.inertia() * b.angular_velocity * b.angular_velocity;
    }
    return e;
}

namespace {

struct EdgeSeparation {
    double separation = -std::numeric_limits<double>::infinity();
    std::size_t edge = 0;
};

EdgeSeparation find_max_separation(std::span<const Vec2> a, std::span<const Vec2> b) {
    EdgeSeparation best;
    for (std::size_t i = 0, n = a.size(); i < n; ++i) {
        const Vec2 edge = a[(i + 1) % n] - a[i];
        const Vec2 normal = normalized(Vec2{edge.y, -edge.x});
        double min_b = std::numeric_limits<double>::infinity();
        for (const Vec2& v : b) {
            min_b = std::min(min_b, dot(normal, v - a[i]));
        }
        if (min_b > best.separation) {
            best.separation = min_b;
            best.edge = i;
        }
    }
    return best;
}

}  // namespace

ContactManifold collide_polygons(std::span<const Vec2> a, std::span<const Vec2> b) {
    ContactManifold manifold;
    const EdgeSeparation sep_a = find_max_separation(a, b);
    if (sep_a.separation > 0.0) return manifold;
    const EdgeSeparation sep_b = find_max_separation(b, a);
    if (sep_b.separation > 0.0) return manifold;

    constexpr double k_tol = 1e-4;
    const bool flip = sep_b.separation > sep_a.separation + k_tol;
    const std::span<const Vec2> ref = flip ? b : a;
    const std::span<const Vec2> inc = flip ? a : b;
    const std::size_t ref_edge = flip ? sep_b.edge : sep_a.edge;

    const Vec2 v1 = ref[ref_edge];
    const Vec2 v2 = ref[(ref_edge + 1) % ref.size()];
    const Vec2 tangent = normalized(v2 - v1);
    const Vec2 normal{tangent.y, -tangent.x};  // outward for CCW

    // Incident edge: most anti-parallel normal.
    std::size_t inc_edge = 0;
    double min_dot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = inc.size(); i < n; ++i) {
        const Vec2 e = inc[(i + 1) % n] - inc[i];
        const double d = dot(normalized(Vec2{e.y, -e.x}), normal);
        if (d < min_dot) {
            min_dot = d;
            inc_edge = i;
        }
    }
    std::array<Vec2, 2> seg{inc[inc_edge], inc[(inc_edge + 1) % inc.size()]};

    // Clip the incident segment to the reference edge's side planes.
    const auto clip = [](std::array<Vec2, 2>& s, Vec2 n, double offset) -> bool {
        const double d0 = dot(n, s[0]) - offset;
        const double d1 = dot(n, s[1]) - offset;
        std::array<Vec2, 2> out = s;
        int count = 0;
        if (d0 <= 0.0) out[count++] = s[0];
        if (d1 <= 0.0) out[count++] = s[1];
        if (d0 * d1 < 0.0 && count < 2) {
            out[count++] = s[0] + (s[1] - s[0]) * (d0 / (d0 - d1));
        }
        if (count < 2) return false;
        s = out;
        return true;
    };
    if (!clip(seg, -tangent, -dot(tangent, v1))) return manifold;
    if (!clip(seg, tangent, dot(tangent, v2))) return manifold;

    manifold.normal = flip ? -normal : normal;
    for (const Vec2& p : seg) {
        const double separation = dot(normal, p - v1);
        if (separation <= 0.0) {
            // Contact point midway between the two surfaces.
            manifold.points.push_back(p - normal * (0.5 * separation));
            manifold.depths.push_back(-separation);
        }
    }
    return manifold;
}

namespace {

constexpr double k_restitution_threshold = 0.05;  // m/s
constexpr double k_slop = 0.004;                  // m
constexpr double k_correction = 0.8;

struct ContactPoint {
    Vec2 ra, rb;
    double normal_mass = 0.0;
    double tangent_mass = 0.0;
    double bias = 0.0;  // target separating velocity
    double jn = 0.0;
    double jt = 0.0;
};

struct Contact {
    std::size_t a = 0, b = 0;
    Vec2 normal;
    std::vector<ContactPoint> points;
    Vec2 location;
};

bool pair_collides(const Body& a, const Body& b, const PhysicsConfig& config) {
    if (a.is_fixed() && b.is_fixed()) return false;
    if (!config.movable_collisions && a.kind == BodyKind::movable && b.kind == BodyKind::movable) {
        return false;
    }
    return true;
}

Vec2 velocity_at(const Body& b, Vec2 r) { return b.linear_velocity + cross(b.angular_velocity, r); }

void apply_impulse(Body& b, Vec2 r, Vec2 impulse, double sign) {
    if (b.is_fixed()) return;
    b.linear_velocity += impulse * (sign * b.inverse_mass());
    b.angular_velocity += sign * b.inverse_inertia() * cross(r, impulse);
}

void apply_ground_friction(Body& b, const PhysicsConfig& config) {
    if (b.kind != BodyKind::movable) return;
    const double dv = config.mu * config.g * config.dt;
    const double speed = norm(b.linear_velocity);
    if (speed <= dv) {
        b.linear_velocity = {};
    } else {
        b.linear_velocity *= (speed - dv) / speed;
    }
    // Uniform-pressure patch: torque ~ mu*m*g*(2/3 r); decelerate about the radius of gyration.
    const double gyration = std::sqrt(b.shape.second_moment() / b.shape.area());
    const double dw = gyration > 0.0 ? config.mu * config.g * config.dt * (2.0 / 3.0) / gyration : 0.0;
    if (std::abs(b.angular_velocity) <= dw) {
        b.angular_velocity = 0.0;
    } else {
        b.angular_velocity -= std::copysign(dw, b.angular_velocity);
    }
    b.linear_velocity *= 1.0 / (1.0 + config.linear_damping * config.dt);
    b.angular_velocity *= 1.0 / (1.0 + config.angular_damping * config.dt);
}

std::vector<Contact> detect_contacts(const WorldState& world, const std::vector<std::vector<Vec2>>& verts,
                                     const std::vector<Aabb>& boxes, const PhysicsConfig& config) {
    std::vector<Contact> contacts;
    const std::size_t n = world.bodies.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Body& a = world.bodies[i];
            const Body& b = world.bodies[j];
            if (!pair_collides(a, b, config) || !boxes[i].overlaps(boxes[j])) continue;
            ContactManifold m = collide_polygons(verts[i], verts[j]);
            if (m.empty()) continue;
            Contact c;
            c.a = i;
            c.b = j;
            c.normal = m.normal;
            Vec2 sum;
            for (const Vec2& p : m.points) {
                ContactPoint cp;
                cp.ra = p - a.pose.position();
                cp.rb = p - b.pose.position();
                sum += p;
                c.points.push_back(cp);
            }
            c.location = sum / static_cast<double>(m.points.size());
            contacts.push_back(std::move(c));
        }
    }
    return contacts;
}

void prepare_contacts(std::vector<Contact>& contacts, const WorldState& world, const PhysicsConfig& config) {
    for (Contact& c : contacts) {
        const Body& a = world.bodies[c.a];
        const Body& b = world.bodies[c.b];
        const Vec2 t = perp(c.normal);
        for (ContactPoint& cp : c.points) {
            const double rna = cross(cp.ra, c.normal), rnb = cross(cp.rb, c.normal);
            const double kn = a.inverse_mass() + b.inverse_mass() + a.inverse_inertia() * rna * rna +
                              b.inverse_inertia() * rnb * rnb;
            cp.normal_mass = kn > 0.0 ? 1.0 / kn : 0.0;
            const double rta = cross(cp.ra, t), rtb = cross(cp.rb, t);
            const double kt = a.inverse_mass() + b.inverse_mass() + a.inverse_inertia() * rta * rta +
                              b.inverse_inertia() * rtb * rtb;
            cp.tangent_mass = kt > 0.0 ? 1.0 / kt : 0.0;
            const double vn = dot(velocity_at(b, cp.rb) - velocity_at(a, cp.ra), c.normal);
            cp.bias = vn < -k_restitution_threshold ? -config.restitution * vn : 0.0;
        }
    }
}

void solve_velocities(std::vector<Contact>& contacts, WorldState& world, const PhysicsConfig& config) {
    for (int iter = 0; iter < config.solver_iterations; ++iter) {
        for (Contact& c : contacts) {
            Body& a = world.bodies[c.a];
            Body& b = world.bodies[c.b];
            const Vec2 t = perp(c.normal);
            for (ContactPoint& cp : c.points) {
                Vec2 dv = velocity_at(b, cp.rb) - velocity_at(a, cp.ra);
                const double vt = dot(dv, t);
                double djt = -vt * cp.tangent_mass;
                const double max_jt = config.contact_friction * cp.jn;
                const double jt_new = std::clamp(cp.jt + djt, -max_jt, max_jt);
                djt = jt_new - cp.jt;
                cp.jt = jt_new;
                apply_impulse(a, cp.ra, t * djt, -1.0);
                apply_impulse(b, cp.rb, t * djt, 1.0);

                dv = velocity_at(b, cp.rb) - velocity_at(a, cp.ra);
                const double vn = dot(dv, c.normal);
                double djn = (cp.bias - vn) * cp.normal_mass;
                const double jn_new = std::max(cp.jn + djn, 0.0);
                djn = jn_new - cp.jn;
                cp.jn = jn_new;
                apply_impulse(a, cp.ra, c.normal * djn, -1.0);
                apply_impulse(b, cp.rb, c.normal * djn, 1.0);
            }
        }
    }
}

void correct_positions(WorldState& world, const PhysicsConfig& config) {
    const std::size_t n = world.bodies.size();
    for (int iter = 0; iter < config.position_iterations; ++iter) {
        std::vector<std::vector<Vec2>> verts(n);
        std::vector<Aabb> boxes(n);
        for (std::size_t i = 0; i < n; ++i) {
            verts[i] = world.bodies[i].world_vertices();
            boxes[i] = bounds_of(verts[i]);
        }
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                Body& a = world.bodies[i];
                Body& b = world.bodies[j];
                if (!pair_collides(a, b, config) || !boxes[i].overlaps(boxes[j])) continue;
                const ContactManifold m = collide_polygons(verts[i], verts[j]);
                if (m.empty()) continue;
                const double depth = *std::max_element(m.depths.begin(), m.depths.end());
                const double excess = depth - k_slop;
                const double inv_sum = a.inverse_mass() + b.inverse_mass();
                if (excess <= 0.0 || inv_sum == 0.0) continue;
                const Vec2 shift = m.normal * (k_correction * excess / inv_sum);
                a.pose.x -= shift.x * a.inverse_mass();
                a.pose.y -= shift.y * a.inverse_mass();
                b.pose.x += shift.x * b.inverse_mass();
                b.pose.y += shift.y * b.inverse_mass();
                any = true;
            }
        }
        if (!any) break;
    }
}

void check_finite(const WorldState& world) {
    for (const Body& b : world.bodies) {
        if (!std::isfinite(b.pose.x) || !std::isfinite(b.pose.y) || !std::isfinite(b.pose.theta) ||
            !std::isfinite(b.linear_velocity.x) || !std::isfinite(b.linear_velocity.y) ||
            !std::isfinite(b.angular_velocity)) {
            throw SimulationDiverged(b.id, "simulation diverged: body " + std::to_string(b.id) +
                                               " has a non-finite pose or velocity");
        }
    }
}

}  // namespace

StepInfo step_world(WorldState& world, const DriveCommand& command, const PhysicsConfig& config) {
    check_finite(world);
    const std::size_t n = world.bodies.size();
    std::vector<Vec2> start(n);
    for (std::size_t i = 0; i < n; ++i) {
        start[i] = world.bodies[i].pose.position();
    }

    Body* robot = nullptr;
    for (Body& b : world.bodies) {
        if (b.kind == BodyKind::robot) robot = &b;
    }
    const Pose robot_start = robot ? robot->pose : Pose{};
    double command_w = 0.0;
    Vec2 commanded_v;
    if (robot) {
        if (const auto* uni = std::get_if<UnicycleDrive>(&command)) {
            command_w = std::clamp(uni->angular_velocity, -config.max_angular_velocity, config.max_angular_velocity);
            commanded_v = robot->pose.heading() * config.robot_speed;
        }
        robot->linear_velocity = commanded_v;
        robot->angular_velocity = command_w;
    }
    const double commanded_w = command_w;

    for (Body& b : world.bodies) {
        apply_ground_friction(b, config);
    }

    std::vector<std::vector<Vec2>> verts(n);
    std::vector<Aabb> boxes(n);
    for (std::size_t i = 0; i < n; ++i) {
        verts[i] = world.bodies[i].world_vertices();
        boxes[i] = bounds_of(verts[i]);
    }
    std::vector<Contact> contacts = detect_contacts(world, verts, boxes, config);
    prepare_contacts(contacts, world, config);
    solve_velocities(contacts, world, config);

    for (Body& b : world.bodies) {
        if (b.is_fixed()) {
            b.linear_velocity = {};
            b.angular_velocity = 0.0;
            continue;
        }
        const bool untouched = b.kind == BodyKind::robot && b.linear_velocity == commanded_v &&
                               b.angular_velocity == commanded_w && std::holds_alternative<UnicycleDrive>(command);
        if (untouched) {
            b.pose = apply_unicycle_command(robot_start, command_w, config);
        } else {
            b.pose.x += b.linear_velocity.x * config.dt;
            b.pose.y += b.linear_velocity.y * config.dt;
            b.pose.theta = normalize_angle(b.pose.theta + b.angular_velocity * config.dt);
        }
    }
    correct_positions(world, config);
    check_finite(world);

    StepInfo info;
    info.substeps = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Body& b = world.bodies[i];
        const double d = b.is_fixed() ? 0.0 : distance(start[i], b.pose.position());
        b.traveled += d;
        info.displacements.push_back({b.id, d});
    }
    for (const Contact& c : contacts) {
        const Body& a = world.bodies[c.a];
        const Body& b = world.bodies[c.b];
        double impulse = 0.0;
        for (const ContactPoint& cp : c.points) impulse += cp.jn;
        info.collisions.push_back({a.id, b.id, impulse, c.location});
        const bool has_robot = a.kind == BodyKind::robot || b.kind == BodyKind::robot;
        if (has_robot) {
            const BodyKind other = a.kind == BodyKind::robot ? b.kind : a.kind;
            if (other == BodyKind::fixed) info.robot_static_contact = true;
            if (other == BodyKind::movable) info.robot_movable_contact = true;
        }
    }
    if (robot) {
        info.robot_progress = dot(robot->pose.position() - robot_start.position(), robot_start.heading());
    }
    world.time += config.dt;
    world.substeps += 1;
    return info;
}

StepInfo apply_heading_step(WorldState& world, double heading, double step_distance, const PhysicsConfig& config) {
    if (!(step_distance > 0.0)) {
        throw std::invalid_argument("heading step: step_distance must be > 0");
    }
    Body& robot = world.robot();
    robot.pose.theta = normalize_angle(heading);
    robot.angular_velocity = 0.0;

    StepInfo total;
    const double per_substep = config.robot_speed * config.dt;
    double remaining = step_distance;
    int stalled = 0;
    while (remaining > 1e-12) {
        PhysicsConfig sub = config;
        if (remaining < per_substep) {
            sub.dt = remaining / config.robot_speed;
        }
        const double expected = config.robot_speed * sub.dt;
        StepInfo info = step_world(world, UnicycleDrive{0.0}, sub);
        remaining -= expected;
        const bool stalled_now = info.robot_progress < 0.1 * expected;
        total.accumulate(info);
        if (stalled_now) {
            ++stalled;
            if (info.robot_static_contact || stalled >= 5) {
                total.immobilized = true;
                break;
            }
        } else {
            stalled = 0;
        }
    }
    return total;
}

}  // namespace npin
