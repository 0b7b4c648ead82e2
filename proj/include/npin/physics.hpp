#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "npin/geometry.hpp"

namespace npin {

enum class BodyKind { robot, movable, fixed };

std::string to_string(BodyKind kind);
BodyKind body_kind_from_string(const std::string& name);

struct Body {
    int id = 0;
    BodyKind kind = BodyKind::movable;
    ConvexPolygon shape;
    Pose pose;                 // position is the polygon centroid
    double mass = 1.0;         // ignored for fixed bodies
    Vec2 linear_velocity;
    double angular_velocity = 0.0;
    double traveled = 0.0;     // accumulated centroid arc length

    bool is_fixed() const { return kind == BodyKind::fixed; }
    double inverse_mass() const { return is_fixed() ? 0.0 : 1.0 / mass; }
    double inertia() const { return mass * shape.second_moment() / shape.area(); }
    double inverse_inertia() const { return is_fixed() ? 0.0 : 1.0 / inertia(); }
    std::vector<Vec2> world_vertices() const { return shape.transformed(pose); }
};

/// Validates and builds a body. Throws GeometryError on a degenerate polygon and
/// std::invalid_argument on a non-positive mass for robot/movable bodies.
Body make_body(int id, BodyKind kind, std::vector<Vec2> world_vertices, double mass = 1.0);
Body make_body(int id, BodyKind kind, ConvexPolygon shape, Pose pose, double mass = 1.0);

struct PhysicsConfig {
    double dt = 0.02;
    double mu = 0.5;               // ground kinetic friction
    double g = 9.81;
    double restitution = 0.1;
    double robot_speed = 1.0;
    double linear_damping = 0.0;
    double angular_damping = 0.0;
    double max_angular_velocity = 1.5;
    double contact_friction = 0.3;  // body-body Coulomb coefficient
    int solver_iterations = 12;
    int position_iterations = 4;
    bool movable_collisions = true;  // movable-vs-movable contacts

    void validate() const;
};

struct WorldState {
    std::vector<Body> bodies;
    double time = 0.0;
    std::uint64_t substeps = 0;

    const Body& robot() const;
    Body& robot();
    const Body* find(int id) const;
    Body* find(int id);
};

struct UnicycleDrive {
    double angular_velocity = 0.0;
};
/// Robot commanded to rest; it can still be shoved by contacts.
struct IdleDrive {};
using DriveCommand = std::variant<UnicycleDrive, IdleDrive>;

struct CollisionEvent {
    int body_a = 0;
    int body_b = 0;
    double impulse = 0.0;  // N*s, accumulated normal impulse
    Vec2 point;
};

struct BodyDisplacement {
    int id = 0;
    double distance = 0.0;
};

struct StepInfo {
    std::vector<BodyDisplacement> displacements;
    std::vector<CollisionEvent> collisions;
    bool robot_static_contact = false;
    bool robot_movable_contact = false;
    bool immobilized = false;
    double robot_progress = 0.0;  // net centroid advance of the robot
    int substeps = 0;

    double displacement_of(int id) const;
    /// Folds a later substep into this aggregate.
    void accumulate(const StepInfo& later);
};

class SimulationDiverged : public std::runtime_error {
public:
    SimulationDiverged(int body_id, const std::string& what)
        : std::runtime_error(what), body_id_(body_id) {}
    int body_id() const { return body_id_; }

private:
    int body_id_;
};

/// Exact constant-speed unicycle integration over one dt. The angular
/// velocity is clamped to config.max_angular_velocity.
Pose apply_unicycle_command(const Pose& pose, double angular_velocity, const PhysicsConfig& config);

/// One substep: drive, ground friction, contact impulses, integration and
/// penetration correction. Deterministic for identical inputs.
StepInfo step_world(WorldState& world, const DriveCommand& command, const PhysicsConfig& config);

/// Rotates the robot in place to `heading` and drives it forward up to
/// `step_distance`, stopping early when static geometry blocks it.
StepInfo apply_heading_step(WorldState& world, double heading, double step_distance,
                            const PhysicsConfig& config);

double kinetic_energy(const WorldState& world);

struct ContactManifold {
    Vec2 normal;  // from a to b
    std::vector<Vec2> points;
    std::vector<double> depths;
    bool empty() const { return points.empty(); }
};

/// Convex polygon contact manifold (reference-face clipping). Empty when separated.
ContactManifold collide_polygons(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace npin
