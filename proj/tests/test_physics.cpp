#include <doctest.h>

#include <random>

#include "npin/physics.hpp"
#include "npin/world_json.hpp"

using namespace npin;

namespace {

Body robot_at(double x, double y, double theta, double mass = 10.0) {
    return make_body(0, BodyKind::robot, ConvexPolygon::rectangle(0.7, 0.5), Pose{x, y, theta}, mass);
}

Body box_at(int id, double x, double y, double side, double mass, BodyKind kind = BodyKind::movable) {
    return make_body(id, kind, ConvexPolygon::rectangle(side, side), Pose{x, y, 0.0}, mass);
}

bool same_world(const WorldState& a, const WorldState& b) {
    if (a.bodies.size() != b.bodies.size() || a.time != b.time) return false;
    for (std::size_t i = 0; i < a.bodies.size(); ++i) {
        const Body& p = a.bodies[i];
        const Body& q = b.bodies[i];
        if (!(p.pose == q.pose) || !(p.linear_velocity == q.linear_velocity) ||
            p.angular_velocity != q.angular_velocity || p.traveled != q.traveled) {
            return false;
        }
    }
    return true;
}

WorldState scattered_world(std::uint32_t seed, int count) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> pos(0.5, 5.5), vel(-1.5, 1.5), ang(-2.0, 2.0);
    WorldState w;
    int id = 1;
    while (static_cast<int>(w.bodies.size()) < count) {
        Body b = box_at(id, pos(gen), pos(gen), 0.4, 1.6);
        bool free = true;
        for (const Body& o : w.bodies) free = free && distance(o.pose.position(), b.pose.position()) > 0.6;
        if (!free) continue;
        b.linear_velocity = {vel(gen), vel(gen)};
        b.angular_velocity = ang(gen);
        w.bodies.push_back(b);
        ++id;
    }
    return w;
}

}  // namespace

TEST_CASE("unicycle straight-line motion") {
    PhysicsConfig cfg;
    cfg.dt = 0.1;
    const Pose p = apply_unicycle_command(Pose{0, 0, 0}, 0.0, cfg);
    CHECK(p.x == doctest::Approx(0.1));
    CHECK(p.y == doctest::Approx(0.0));

    WorldState w;
    w.bodies.push_back(robot_at(0, 0, 0));
    step_world(w, UnicycleDrive{0.0}, cfg);
    CHECK(w.robot().pose.x == doctest::Approx(0.1));
    CHECK(w.robot().traveled == doctest::Approx(0.1));
}

TEST_CASE("unicycle arc matches the closed-form solution") {
    PhysicsConfig cfg;
    cfg.dt = 0.1;
    const double w = 0.5, v = 1.0, dt = 0.1;
    const Pose p = apply_unicycle_command(Pose{0, 0, 0}, w, cfg);
    // Integrate x' = v cos(w t), y' = v sin(w t) analytically.
    CHECK(std::abs(p.x - v / w * std::sin(w * dt)) < 1e-9);
    CHECK(std::abs(p.y - v / w * (1.0 - std::cos(w * dt))) < 1e-9);
    CHECK(std::abs(p.theta - w * dt) < 1e-12);

    // quarter turn in one step: heading changes by exactly w*dt
    PhysicsConfig big = cfg;
    big.max_angular_velocity = 100.0;
    const double wq = std::numbers::pi / 2.0 / dt;
    const Pose q = apply_unicycle_command(Pose{0, 0, 0}, wq, big);
    CHECK(q.theta == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("angular velocity is clamped to the configured bound") {
    PhysicsConfig cfg;
    const Pose a = apply_unicycle_command(Pose{}, 100.0, cfg);
    const Pose b = apply_unicycle_command(Pose{}, cfg.max_angular_velocity, cfg);
    CHECK(a == b);
}

TEST_CASE("sliding box decelerates under ground friction and stops") {
    PhysicsConfig cfg;
    WorldState w;
    w.bodies.push_back(box_at(1, 0, 0, 0.4, 1.6));
    w.bodies[0].linear_velocity = {1.0, 0.0};
    double last_speed = 1.0;
    for (int i = 0; i < 200; ++i) {
        step_world(w, IdleDrive{}, cfg);
        const double speed = norm(w.bodies[0].linear_velocity);
        CHECK(speed <= last_speed);
        last_speed = speed;
    }
    CHECK(last_speed == 0.0);
    // Coulomb deceleration: stopping distance v^2 / (2 mu g) up to one substep of slack
    const double expected = 1.0 / (2.0 * cfg.mu * cfg.g);
    CHECK(w.bodies[0].traveled == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("robot pushing a lighter box transfers momentum like a 1D impact") {
    PhysicsConfig cfg;
    cfg.mu = 0.0;
    const double m0 = 10.0, m1 = 1.6;
    WorldState w;
    w.bodies.push_back(robot_at(0.0, 0.0, 0.0, m0));
    // front face at x = 0.35; box face starts 0.01 m ahead
    w.bodies.push_back(box_at(1, 0.35 + 0.2 + 0.01, 0.0, 0.4, m1));
    bool contacted = false;
    for (int i = 0; i < 10 && !contacted; ++i) {
        const StepInfo info = step_world(w, UnicycleDrive{0.0}, cfg);
        if (info.robot_movable_contact) {
            contacted = true;
            double impulse = 0.0;
            for (const auto& c : info.collisions) impulse += c.impulse;
            CHECK(impulse > 0.0);
            // Inelastic two-body impact with restitution e: v1' = m0 (1 + e) v / (m0 + m1)
            const double oracle = m0 * (1.0 + cfg.restitution) * cfg.robot_speed / (m0 + m1);
            CHECK(w.bodies[1].linear_velocity.x == doctest::Approx(oracle).epsilon(0.01));
            CHECK(std::abs(w.bodies[1].linear_velocity.y) < 1e-6);
        }
    }
    REQUIRE(contacted);
    for (int i = 0; i < 20; ++i) step_world(w, UnicycleDrive{0.0}, cfg);
    CHECK(w.bodies[1].traveled > 0.1);
}

TEST_CASE("elastic frictionless collision conserves kinetic energy") {
    PhysicsConfig cfg;
    cfg.mu = 0.0;
    cfg.restitution = 1.0;
    cfg.contact_friction = 0.0;
    WorldState w;
    w.bodies.push_back(box_at(1, 0.0, 0.0, 0.4, 1.0));
    w.bodies.push_back(box_at(2, 1.0, 0.0, 0.4, 2.0));
    w.bodies[0].linear_velocity = {1.0, 0.0};
    w.bodies[1].linear_velocity = {-0.5, 0.0};
    const double e0 = kinetic_energy(w);
    bool collided = false;
    for (int i = 0; i < 100; ++i) {
        const StepInfo info = step_world(w, IdleDrive{}, cfg);
        collided = collided || !info.collisions.empty();
    }
    REQUIRE(collided);
    CHECK(kinetic_energy(w) == doctest::Approx(e0).epsilon(0.01));
    // 1D elastic oracle for the final velocities
    const double v1 = ((1.0 - 2.0) * 1.0 + 2.0 * 2.0 * -0.5) / 3.0;
    const double v2 = ((2.0 - 1.0) * -0.5 + 2.0 * 1.0 * 1.0) / 3.0;
    CHECK(w.bodies[0].linear_velocity.x == doctest::Approx(v1).epsilon(0.01));
    CHECK(w.bodies[1].linear_velocity.x == doctest::Approx(v2).epsilon(0.01));
}

TEST_CASE("kinetic energy never increases with friction and no actuation") {
    PhysicsConfig cfg;
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        WorldState w = scattered_world(seed, 12);
        w.bodies.push_back(box_at(100, 3.0, 3.0, 0.6, 1.0, BodyKind::fixed));
        double last = kinetic_energy(w);
        for (int i = 0; i < 150; ++i) {
            step_world(w, IdleDrive{}, cfg);
            const double e = kinetic_energy(w);
            CHECK(e <= last + 1e-12);
            last = e;
        }
    }
}

TEST_CASE("traveled equals the sum of per-substep displacements") {
    PhysicsConfig cfg;
    WorldState w = scattered_world(7, 10);
    w.bodies.push_back(robot_at(3.0, 0.2, 1.2));
    std::vector<double> sums(w.bodies.size(), 0.0);
    for (int i = 0; i < 200; ++i) {
        const StepInfo info = step_world(w, UnicycleDrive{0.3}, cfg);
        for (std::size_t k = 0; k < w.bodies.size(); ++k) sums[k] += info.displacement_of(w.bodies[k].id);
    }
    for (std::size_t k = 0; k < w.bodies.size(); ++k) {
        CHECK(std::abs(w.bodies[k].traveled - sums[k]) < 1e-9);
    }
}

TEST_CASE("static bodies never move and stepping is deterministic") {
    PhysicsConfig cfg;
    WorldState a = scattered_world(3, 10);
    a.bodies.push_back(box_at(50, 2.0, 2.0, 0.8, 1.0, BodyKind::fixed));
    a.bodies.push_back(robot_at(1.0, 1.0, 0.4));
    WorldState b = a;
    const Pose wall = a.bodies[10].pose;
    for (int i = 0; i < 300; ++i) {
        const double w = std::sin(i * 0.05);
        const StepInfo info = step_world(a, UnicycleDrive{w}, cfg);
        step_world(b, UnicycleDrive{w}, cfg);
        CHECK(info.displacement_of(50) == 0.0);
    }
    CHECK(a.bodies[10].pose == wall);
    CHECK(same_world(a, b));
}

TEST_CASE("non-finite state is reported with the body id") {
    PhysicsConfig cfg;
    WorldState w;
    w.bodies.push_back(box_at(4, 0, 0, 0.4, 1.0));
    w.bodies[0].linear_velocity = {std::nan(""), 0.0};
    try {
        step_world(w, IdleDrive{}, cfg);
        FAIL("expected divergence");
    } catch (const SimulationDiverged& e) {
        CHECK(e.body_id() == 4);
    }
}

TEST_CASE("heading step in free space") {
    PhysicsConfig cfg;
    WorldState w;
    w.bodies.push_back(robot_at(0, 0, 1.0));
    const StepInfo info = apply_heading_step(w, 0.0, 0.15, cfg);
    CHECK(w.robot().pose.x == doctest::Approx(0.15));
    CHECK(w.robot().pose.y == doctest::Approx(0.0));
    CHECK(w.robot().pose.theta == 0.0);
    CHECK_FALSE(info.immobilized);
}

TEST_CASE("heading step stops at a wall") {
    PhysicsConfig cfg;
    WorldState w;
    w.bodies.push_back(robot_at(0, 0, 0));
    // wall face 0.05 m ahead of the bumper
    w.bodies.push_back(make_body(9, BodyKind::fixed, std::vector<Vec2>{{0.4, -2}, {1.4, -2}, {1.4, 2}, {0.4, 2}}));
    const StepInfo info = apply_heading_step(w, 0.0, 0.5, cfg);
    CHECK(info.robot_static_contact);
    CHECK(info.immobilized);
    CHECK(w.robot().pose.x == doctest::Approx(0.05).epsilon(0.2));
    CHECK(w.robot().pose.x <= 0.05 + 0.005);
}

TEST_CASE("heading step pushes a box and never overshoots") {
    PhysicsConfig cfg;
    WorldState w;
    w.bodies.push_back(robot_at(0, 0, 0));
    w.bodies.push_back(box_at(1, 0.7, 0.0, 0.4, 1.6));
    const StepInfo info = apply_heading_step(w, 0.0, 0.5, cfg);
    CHECK(info.robot_movable_contact);
    CHECK(w.bodies[1].traveled > 0.0);
    CHECK(w.robot().traveled <= 0.5 + cfg.robot_speed * cfg.dt + 1e-12);

    std::mt19937 gen(5);
    std::uniform_real_distribution<double> h(-3.0, 3.0);
    WorldState s = scattered_world(9, 8);
    s.bodies.push_back(robot_at(3.0, 3.0, 0.0));
    for (int i = 0; i < 40; ++i) {
        const double before = s.robot().traveled;
        apply_heading_step(s, h(gen), 0.25, cfg);
        CHECK(s.robot().traveled - before <= 0.25 + cfg.robot_speed * cfg.dt + 1e-12);
    }
}

TEST_CASE("world snapshot round-trips bit for bit") {
    PhysicsConfig cfg;
    WorldState w = scattered_world(2, 6);
    w.bodies.push_back(robot_at(1.0, 1.0, 0.3));
    w.bodies.push_back(box_at(77, 4.0, 4.0, 1.0, 1.0, BodyKind::fixed));
    for (int i = 0; i < 30; ++i) step_world(w, UnicycleDrive{0.2}, cfg);
    const WorldState back = world_from_json(nlohmann::json::parse(world_to_json(w).dump()));
    CHECK(same_world(w, back));
    for (std::size_t i = 0; i < w.bodies.size(); ++i) {
        CHECK(w.bodies[i].shape.vertices() == back.bodies[i].shape.vertices());
    }
    WorldState a = w, b = back;
    for (int i = 0; i < 30; ++i) {
        step_world(a, UnicycleDrive{-0.4}, cfg);
        step_world(b, UnicycleDrive{-0.4}, cfg);
    }
    CHECK(same_world(a, b));
}
