#include "npin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace npin {

std::size_t EpisodeRecord::success_count() const {
    return static_cast<std::size_t>(
        std::count_if(objects.begin(), objects.end(), [](const ObjectRecord& o) { return o.success; }));
}

void EpisodeRecord::validate() const {
    if (!(robot_mass > 0.0)) throw InvalidRecordError("robot mass must be positive");
    if (!(robot_path_length >= 0.0)) throw InvalidRecordError("robot path length must be >= 0");
    for (const ObjectRecord& o : objects) {
        if (!(o.mass > 0.0)) throw InvalidRecordError("object " + std::to_string(o.id) + ": mass must be positive");
        if (!(o.traveled >= 0.0)) {
            throw InvalidRecordError("object " + std::to_string(o.id) + ": motion distance must be >= 0");
        }
    }
}

double nav_efficiency(const EpisodeRecord& record, std::optional<double> l0_star, std::vector<std::string>* notes) {
    if (!record.nav_success) {
        return 0.0;
    }
    if (record.robot_path_length <= 0.0) {
        throw InvalidRecordError("degenerate episode: goal reached with zero robot path length");
    }
    if (!l0_star) {
        if (notes) notes->push_back("l0* undefined (goal unreachable on static map); E_nav reported as 0");
        return 0.0;
    }
    const double raw = *l0_star / record.robot_path_length;
    if (raw > 1.0) {
        if (notes) notes->push_back("E_nav clamped from " + std::to_string(raw) + " to 1 (grid discretization)");
        return 1.0;
    }
    return std::max(raw, 0.0);
}

namespace {

double actual_work(const EpisodeRecord& record) {
    double total = record.robot_mass * record.robot_path_length;
    for (const ObjectRecord& o : record.objects) {
        total += o.mass * o.traveled;
    }
    return total;
}

}  // namespace

double nav_interaction_effort(const EpisodeRecord& record) {
    const double denom = actual_work(record);
    if (denom <= 0.0) {
        throw InvalidRecordError("interaction effort needs a positive robot path length");
    }
    return record.robot_mass * record.robot_path_length / denom;
}

Fraction manip_success(const EpisodeRecord& record) {
    if (record.objects.empty()) {
        throw InvalidRecordError("task success needs at least one object (K = 0)");
    }
    return {static_cast<std::int64_t>(record.success_count()), static_cast<std::int64_t>(record.object_count())};
}

double manip_efficiency(const EpisodeRecord& record, double spanning_length) {
    if (record.success_count() == 0) {
        return 0.0;
    }
    if (record.robot_path_length <= 0.0) {
        throw InvalidRecordError("efficiency needs a positive robot path length");
    }
    return spanning_length / record.robot_path_length;
}

double manip_interaction_effort(const EpisodeRecord& record, const std::vector<double>& shortest) {
    const double denom = actual_work(record);
    if (denom <= 0.0) {
        throw InvalidRecordError("interaction effort needs a positive robot path length");
    }
    double numer = record.robot_mass * record.robot_path_length;
    for (std::size_t i = 0; i < record.objects.size(); ++i) {
        const ObjectRecord& o = record.objects[i];
        if (!o.success) continue;
        if (i >= shortest.size()) {
            throw InvalidRecordError("missing shortest goal distance for object " + std::to_string(o.id));
        }
        numer += o.mass * shortest[i];
    }
    return numer / denom;
}

std::string to_string(EdgeClass c) {
    switch (c) {
        case EdgeClass::robot_object: return "robot_object";
        case EdgeClass::object_object: return "object_object";
        case EdgeClass::object_goal: return "object_goal";
    }
    return "unknown";
}

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

}  // namespace

SpanningTree minimum_spanning_tree(int vertex_count, const std::vector<GraphEdge>& edges) {
    if (vertex_count <= 0) {
        throw std::invalid_argument("minimum_spanning_tree: graph has no vertices");
    }
    std::vector<GraphEdge> sorted = edges;
    for (const GraphEdge& e : sorted) {
        if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count) {
            throw std::invalid_argument("minimum_spanning_tree: edge endpoint out of range");
        }
    }
    std::sort(sorted.begin(), sorted.end(), [](const GraphEdge& a, const GraphEdge& b) {
        const auto key = [](const GraphEdge& e) {
            return std::tuple(e.weight, std::min(e.u, e.v), std::max(e.u, e.v));
        };
        return key(a) < key(b);
    });
    DisjointSet sets(vertex_count);
    SpanningTree tree;
    for (const GraphEdge& e : sorted) {
        if (sets.unite(e.u, e.v)) {
            tree.edges.push_back(e);
            tree.total_weight += e.weight;
        }
    }
    if (static_cast<int>(tree.edges.size()) != vertex_count - 1) {
        std::map<int, std::vector<int>> groups;
        for (int v = 0; v < vertex_count; ++v) {
            groups[sets.find(v)].push_back(v);
        }
        std::vector<std::vector<int>> components;
        std::string listing;
        for (auto& [root, members] : groups) {
            listing += listing.empty() ? "{" : " {";
            for (std::size_t i = 0; i < members.size(); ++i) {
                listing += (i ? "," : "") + std::to_string(members[i]);
            }
            listing += "}";
            components.push_back(std::move(members));
        }
        throw DisconnectedGraphError("graph is disconnected; components: " + listing, std::move(components));
    }
    return tree;
}

double object_goal_shortest_distance(Vec2 object_start, const GoalRegion& goal, const OccupancyGrid& static_map,
                                     double inradius) {
    return StaticPathPlanner(static_map, inradius).shortest_distance(object_start, goal);
}

namespace {

// One planner per distinct inflation radius.
class PlannerCache {
public:
    explicit PlannerCache(const OccupancyGrid& map) : map_(map) {}
    const StaticPathPlanner& get(double radius) {
        auto it = planners_.find(radius);
        if (it == planners_.end()) {
            it = planners_.emplace(radius, StaticPathPlanner(map_, radius)).first;
        }
        return it->second;
    }

private:
    const OccupancyGrid& map_;
    std::map<double, StaticPathPlanner> planners_;
};

SpanningGraph build_graph(const EpisodeRecord& record, PlannerCache& cache, std::vector<double>& shortest) {
    SpanningGraph g;
    std::vector<const ObjectRecord*> done;
    std::vector<std::size_t> done_index;
    for (std::size_t i = 0; i < record.objects.size(); ++i) {
        if (record.objects[i].success) {
            done.push_back(&record.objects[i]);
            done_index.push_back(i);
        }
    }
    if (done.empty()) {
        throw InvalidRecordError("spanning graph needs at least one completed sub-task");
    }
    const int k = static_cast<int>(done.size());
    g.vertices.push_back(record.robot_start);
    for (const ObjectRecord* o : done) {
        g.vertices.push_back(o->initial_centroid);
        g.object_ids.push_back(o->id);
    }
    for (const ObjectRecord* o : done) {
        g.vertices.push_back(record.goal.nearest_point(o->initial_centroid));
    }
    const StaticPathPlanner& robot_planner = cache.get(record.robot_radius);
    const auto guarded = [](int vertex, auto&& fn) {
        try {
            return fn();
        } catch (const UnreachableError& e) {
            throw UnreachableError("spanning graph vertex " + std::to_string(vertex) + ": " + e.what());
        }
    };
    for (int i = 1; i <= k; ++i) {
        const double w = guarded(i, [&] { return robot_planner.point_distance(g.vertices[0], g.vertices[static_cast<std::size_t>(i)]); });
        g.edges.push_back({0, i, w, EdgeClass::robot_object});
    }
    for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
            const double w = guarded(j, [&] {
                return robot_planner.point_distance(g.vertices[static_cast<std::size_t>(i)], g.vertices[static_cast<std::size_t>(j)]);
            });
            g.edges.push_back({i, j, w, EdgeClass::object_object});
        }
    }
    for (int i = 1; i <= k; ++i) {
        const ObjectRecord& o = *done[static_cast<std::size_t>(i - 1)];
        const double w = guarded(i, [&] {
            return cache.get(o.inradius).shortest_distance(o.initial_centroid, record.goal);
        });
        shortest[done_index[static_cast<std::size_t>(i - 1)]] = w;
        g.edges.push_back({i, k + i, w, EdgeClass::object_goal});
    }
    return g;
}

}  // namespace

SpanningGraph build_spanning_graph(const EpisodeRecord& record) {
    PlannerCache cache(record.static_map);
    std::vector<double> shortest(record.objects.size(), 0.0);
    return build_graph(record, cache, shortest);
}

MetricReport evaluate_episode(const EpisodeRecord& record) {
    record.validate();
    MetricReport report;
    report.env = record.env;
    report.seed = record.seed;
    report.navigation = record.navigation;
    report.nav_success = record.nav_success;
    report.l0 = record.robot_path_length;
    for (const ObjectRecord& o : record.objects) {
        report.per_object.push_back({o.id, o.mass, o.traveled, std::nullopt, o.success});
    }
    if (record.robot_path_length <= 0.0) {
        // Robot never moved: nothing was pushed either, so effort is trivially 1.
        report.efficiency = 0.0;
        report.effort = 1.0;
        report.diagnostics.push_back("robot path length is 0; E = 0, I = 1");
        if (!record.navigation && !record.objects.empty()) report.success = manip_success(record);
        return report;
    }

    if (record.navigation) {
        if (record.nav_success) {
            try {
                report.l0_star = StaticPathPlanner(record.static_map, record.robot_radius)
                                     .shortest_distance(record.robot_start, record.goal);
            } catch (const UnreachableError& e) {
                report.diagnostics.push_back(std::string("l0*: ") + e.what());
            }
        }
        report.efficiency = nav_efficiency(record, report.l0_star, &report.diagnostics);
        report.effort = nav_interaction_effort(record);
        return report;
    }

    report.success = manip_success(record);
    std::vector<double> shortest(record.objects.size(), 0.0);
    if (record.success_count() > 0) {
        PlannerCache cache(record.static_map);
        const SpanningGraph graph = build_graph(record, cache, shortest);
        report.spanning_length = minimum_spanning_tree(graph).total_weight;
        for (std::size_t i = 0; i < record.objects.size(); ++i) {
            if (record.objects[i].success) report.per_object[i].shortest = shortest[i];
        }
    } else {
        report.spanning_length = 0.0;
        report.diagnostics.push_back("K' = 0: E_manip reported as 0");
    }
    report.efficiency = manip_efficiency(record, *report.spanning_length);
    report.effort = manip_interaction_effort(record, shortest);
    return report;
}

}  // namespace npin
