#pragma once

#include <json.hpp>

#include "npin/metrics.hpp"

namespace npin {

/// {env, seed, E, I, S?, l0, l0_star?, L_star?, per_object, diagnostics}
nlohmann::json metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& j);

/// Record without its static map and goal (both are regenerated from the config).
nlohmann::json episode_record_to_json(const EpisodeRecord& record);
/// Inverse of episode_record_to_json; the caller supplies the map and goal.
EpisodeRecord episode_record_from_json(const nlohmann::json& j, OccupancyGrid static_map, GoalRegion goal);

}  // namespace npin
