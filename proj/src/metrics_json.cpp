#include "npin/metrics_json.hpp"

#include "npin/world_json.hpp"

namespace npin {

namespace {

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_double(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

nlohmann::json metric_report_to_json(const MetricReport& r) {
    nlohmann::json objects = nlohmann::json::array();
    for (const ObjectReport& o : r.per_object) {
        objects.push_back({{"id", o.id},
                           {"mass", o.mass},
                           {"traveled", o.traveled},
                           {"shortest", optional_json(o.shortest)},
                           {"success", o.success}});
    }
    nlohmann::json j = {{"env", r.env},
                        {"seed", r.seed},
                        {"navigation", r.navigation},
                        {"E", r.efficiency},
                        {"I", r.effort},
                        {"l0", r.l0},
                        {"nav_success", r.nav_success},
                        {"l0_star", optional_json(r.l0_star)},
                        {"L_star", optional_json(r.spanning_length)},
                        {"per_object", std::move(objects)},
                        {"diagnostics", r.diagnostics}};
    if (r.success) {
        j["S"] = r.success->value();
        j["S_fraction"] = {r.success->numerator, r.success->denominator};
    } else {
        j["S"] = nullptr;
    }
    return j;
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
    MetricReport r;
    r.env = j.at("env").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.navigation = j.at("navigation").get<bool>();
    r.efficiency = j.at("E").get<double>();
    r.effort = j.at("I").get<double>();
    r.l0 = j.at("l0").get<double>();
    r.nav_success = j.value("nav_success", false);
    r.l0_star = optional_double(j, "l0_star");
    r.spanning_length = optional_double(j, "L_star");
    if (j.contains("S_fraction")) {
        r.success = Fraction{j["S_fraction"].at(0).get<std::int64_t>(), j["S_fraction"].at(1).get<std::int64_t>()};
    }
    for (const auto& o : j.at("per_object")) {
        r.per_object.push_back({o.at("id").get<int>(), o.at("mass").get<double>(), o.at("traveled").get<double>(),
                                optional_double(o, "shortest"), o.at("success").get<bool>()});
    }
    r.diagnostics = j.value("diagnostics", std::vector<std::string>{});
    return r;
}

nlohmann::json episode_record_to_json(const EpisodeRecord& rec) {
    nlohmann::json objects = nlohmann::json::array();
    for (const ObjectRecord& o : rec.objects) {
        objects.push_back({{"id", o.id},
                           {"mass", o.mass},
                           {"traveled", o.traveled},
                           {"initial_centroid", vec_to_json(o.initial_centroid)},
                           {"success", o.success},
                           {"inradius", o.inradius}});
    }
    return {{"env", rec.env},
            {"seed", rec.seed},
            {"navigation", rec.navigation},
            {"robot_mass", rec.robot_mass},
            {"robot_path_length", rec.robot_path_length},
            {"robot_start", vec_to_json(rec.robot_start)},
            {"robot_radius", rec.robot_radius},
            {"nav_success", rec.nav_success},
            {"objects", std::move(objects)}};
}

EpisodeRecord episode_record_from_json(const nlohmann::json& j, OccupancyGrid static_map, GoalRegion goal) {
    EpisodeRecord rec;
    rec.env = j.at("env").get<std::string>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.navigation = j.at("navigation").get<bool>();
    rec.robot_mass = j.at("robot_mass").get<double>();
    rec.robot_path_length = j.at("robot_path_length").get<double>();
    rec.robot_start = vec_from_json(j.at("robot_start"));
    rec.robot_radius = j.at("robot_radius").get<double>();
    rec.nav_success = j.at("nav_success").get<bool>();
    for (const auto& o : j.at("objects")) {
        ObjectRecord obj;
        obj.id = o.at("id").get<int>();
        obj.mass = o.at("mass").get<double>();
        obj.traveled = o.at("traveled").get<double>();
        obj.initial_centroid = vec_from_json(o.at("initial_centroid"));
        obj.success = o.at("success").get<bool>();
        obj.inradius = o.at("inradius").get<double>();
        rec.objects.push_back(obj);
    }
    rec.static_map = std::move(static_map);
    rec.goal = std::move(goal);
    return rec;
}

}  // namespace npin
