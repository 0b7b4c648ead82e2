#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "npin/goal_region.hpp"
#include "npin/grid.hpp"
#include "npin/path_planner.hpp"

namespace npin {

class InvalidRecordError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ObjectRecord {
    int id = 0;
    double mass = 1.0;
    double traveled = 0.0;      // centroid arc length over the episode
    Vec2 initial_centroid;
    bool success = false;       // delivered / cleared
    double inradius = 0.0;      // clearance used when planning this object's path to the goal
};

/// Everything the scores need from one episode.
struct EpisodeRecord {
    std::string env;
    std::uint64_t seed = 0;
    bool navigation = true;     // navigation-centric vs manipulation-centric scoring
    double robot_mass = 1.0;
    double robot_path_length = 0.0;
    Vec2 robot_start;
    double robot_radius = 0.25;
    bool nav_success = false;
    std::vector<ObjectRecord> objects;
    OccupancyGrid static_map;
    GoalRegion goal;

    std::size_t object_count() const { return objects.size(); }
    std::size_t success_count() const;
    void validate() const;
};

/// K'/K kept as integers so S_manip is exact before conversion.
struct Fraction {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    bool operator==(const Fraction&) const = default;
};

/// E_nav = 1_success * l0* / l0, clamped to [0, 1]. Clamping is recorded in `notes`.
double nav_efficiency(const EpisodeRecord& record, std::optional<double> l0_star,
                      std::vector<std::string>* notes = nullptr);

/// I_nav = m0 l0 / sum_{i=0..K} m_i l_i.
double nav_interaction_effort(const EpisodeRecord& record);

/// S_manip = K'/K. Throws InvalidRecordError when K = 0.
Fraction manip_success(const EpisodeRecord& record);

/// E_manip = L*(K') / l0, never clamped; 0 when K' = 0.
double manip_efficiency(const EpisodeRecord& record, double spanning_length);

/// I_manip = (m0 l0 + sum_i 1_i m_i l_i*) / sum_{i=0..K} m_i l_i.
/// `shortest` holds l_i* per object (only entries of successful objects are read).
double manip_interaction_effort(const EpisodeRecord& record, const std::vector<double>& shortest);

enum class EdgeClass { robot_object, object_object, object_goal };
std::string to_string(EdgeClass c);

struct GraphEdge {
    int u = 0;
    int v = 0;
    double weight = 0.0;
    EdgeClass kind = EdgeClass::robot_object;
};

/// Vertex 0 is the robot start, 1..K' the successful objects' starts and
/// K'+1..2K' the matching nearest goal points.
struct SpanningGraph {
    std::vector<Vec2> vertices;
    std::vector<int> object_ids;  // object id per object vertex
    std::vector<GraphEdge> edges;
    std::size_t vertex_count() const { return vertices.size(); }
};

class DisconnectedGraphError : public std::runtime_error {
public:
    DisconnectedGraphError(const std::string& what, std::vector<std::vector<int>> components)
        : std::runtime_error(what), components_(std::move(components)) {}
    const std::vector<std::vector<int>>& components() const { return components_; }

private:
    std::vector<std::vector<int>> components_;
};

struct SpanningTree {
    double total_weight = 0.0;
    std::vector<GraphEdge> edges;
};

/// Kruskal with ties broken by (weight, min vertex, max vertex).
SpanningTree minimum_spanning_tree(int vertex_count, const std::vector<GraphEdge>& edges);
inline SpanningTree minimum_spanning_tree(const SpanningGraph& g) {
    return minimum_spanning_tree(static_cast<int>(g.vertex_count()), g.edges);
}

/// Shortest static-map distance from an object start to its nearest goal point,
/// planned on the map inflated by the object's inradius.
double object_goal_shortest_distance(Vec2 object_start, const GoalRegion& goal, const OccupancyGrid& static_map,
                                     double inradius);

/// Builds the spanning graph over successful objects. Throws UnreachableError
/// naming the vertex when a required path does not exist.
SpanningGraph build_spanning_graph(const EpisodeRecord& record);

struct ObjectReport {
    int id = 0;
    double mass = 0.0;
    double traveled = 0.0;
    std::optional<double> shortest;
    bool success = false;
};

struct MetricReport {
    std::string env;
    std::uint64_t seed = 0;
    bool navigation = true;
    double efficiency = 0.0;
    double effort = 1.0;
    std::optional<Fraction> success;
    bool nav_success = false;
    double l0 = 0.0;
    std::optional<double> l0_star;
    std::optional<double> spanning_length;
    std::vector<ObjectReport> per_object;
    std::vector<std::string> diagnostics;
};

/// Full score computation for one record (shortest paths included).
MetricReport evaluate_episode(const EpisodeRecord& record);

}  // namespace npin
