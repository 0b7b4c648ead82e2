#include "npin/world_json.hpp"

namespace npin {

using nlohmann::json;

json world_to_json(const WorldState& world) {
    json bodies = json::array();
    for (const Body& b : world.bodies) {
        json verts = json::array();
        for (const Vec2& v : b.shape.vertices()) verts.push_back(vec_to_json(v));
        bodies.push_back({
            {"id", b.id},
            {"kind", to_string(b.kind)},
            {"vertices", std::move(verts)},
            {"pose", {{"x", b.pose.x}, {"y", b.pose.y}, {"theta", b.pose.theta}}},
            {"mass", b.is_fixed() ? json(nullptr) : json(b.mass)},
            {"linear_velocity", vec_to_json(b.linear_velocity)},
            {"angular_velocity", b.angular_velocity},
            {"traveled", b.traveled},
        });
    }
    return {{"v", kWorldSchemaVersion}, {"time", world.time}, {"substeps", world.substeps}, {"bodies", std::move(bodies)}};
}

WorldState world_from_json(const json& j) {
    if (j.value("v", 0) != kWorldSchemaVersion) {
        throw std::invalid_argument("unsupported world snapshot version");
    }
    WorldState world;
    world.time = j.at("time").get<double>();
    world.substeps = j.at("substeps").get<std::uint64_t>();
    for (const json& jb : j.at("bodies")) {
        std::vector<Vec2> verts;
        for (const json& v : jb.at("vertices")) verts.push_back(vec_from_json(v));
        const BodyKind kind = body_kind_from_string(jb.at("kind").get<std::string>());
        const json& pose = jb.at("pose");
        const double mass = jb.at("mass").is_null() ? 0.0 : jb.at("mass").get<double>();
        Body b = make_body(jb.at("id").get<int>(), kind, ConvexPolygon(std::move(verts)),
                           Pose{pose.at("x").get<double>(), pose.at("y").get<double>(), pose.at("theta").get<double>()},
                           mass);
        b.linear_velocity = vec_from_json(jb.at("linear_velocity"));
        b.angular_velocity = jb.at("angular_velocity").get<double>();
        b.traveled = jb.at("traveled").get<double>();
        world.bodies.push_back(std::move(b));
    }
    return world;
}

json step_info_to_json(const StepInfo& info) {
    json collisions = json::array();
    for (const CollisionEvent& c : info.collisions) {
        collisions.push_back({{"a", c.body_a}, {"b", c.body_b}, {"impulse", c.impulse}, {"point", vec_to_json(c.point)}});
    }
    json displacements = json::object();
    for (const BodyDisplacement& d : info.displacements) {
        if (d.distance > 0.0) displacements[std::to_string(d.id)] = d.distance;
    }
    return {{"collisions", std::move(collisions)},
            {"displacements", std::move(displacements)},
            {"robot_static_contact", info.robot_static_contact},
            {"robot_movable_contact", info.robot_movable_contact},
            {"immobilized", info.immobilized},
            {"substeps", info.substeps}};
}

}  // namespace npin
