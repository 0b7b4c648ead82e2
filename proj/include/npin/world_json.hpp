#pragma once

#include <json.hpp>

#include "npin/physics.hpp"

namespace npin {

/// World snapshot schema (version 1):
///
///   { "v": 1, "time": s, "substeps": n,
///     "bodies": [ { "id": int, "kind": "robot" | "movable" | "static",
///                   "vertices": [[x, y], ...],        // body frame, CCW, centroid at origin
///                   "pose": { "x": m, "y": m, "theta": rad },
///                   "mass": kg | null,                // null for static bodies
///                   "linear_velocity": [vx, vy], "angular_velocity": rad/s,
///                   "traveled": m } ] }
///
/// Doubles are written with round-trip precision, so load(dump(w)) == w bit for bit.
inline constexpr int kWorldSchemaVersion = 1;

nlohmann::json world_to_json(const WorldState& world);
WorldState world_from_json(const nlohmann::json& j);

nlohmann::json step_info_to_json(const StepInfo& info);

inline nlohmann::json vec_to_json(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }
inline Vec2 vec_from_json(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace npin
