#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "npin/environment.hpp"
#include "npin/gtsp.hpp"
#include "npin/rng.hpp"

namespace npin {

/// Uniform policy template. act() returns nullopt when the policy has nothing
/// left to do (the episode then ends without a task outcome).
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual void reset(std::uint64_t seed) = 0;
    virtual std::optional<Action> act(const Observation& obs, const Environment& env) = 0;
    /// Optional debugging payload (the GTSP plan, for instance).
    virtual nlohmann::json plan_dump() const { return nullptr; }
    /// Free-form notes collected during the episode (skipped legs, flat DT windows).
    const std::vector<std::string>& notes() const { return notes_; }

protected:
    std::vector<std::string> notes_;
};

/// Steers toward the lowest goal-DT value on a ring around the robot (angular-velocity mode).
class DtDescentPolicy : public Policy {
public:
    explicit DtDescentPolicy(double lookahead = 0.6, double gain = 2.0);
    std::string name() const override { return "dt_descent"; }
    void reset(std::uint64_t) override { notes_.clear(); }
    std::optional<Action> act(const Observation& obs, const Environment& env) override;

private:
    double lookahead_;
    double gain_;
};

/// Uniform random actions in whatever mode the environment expects.
class RandomPolicy : public Policy {
public:
    std::string name() const override { return "random"; }
    void reset(std::uint64_t seed) override;
    std::optional<Action> act(const Observation& obs, const Environment& env) override;

private:
    Rng rng_{0};
};

/// Replays a fixed action list, then reports done.
class ScriptedPolicy : public Policy {
public:
    explicit ScriptedPolicy(std::vector<Action> actions) : actions_(std::move(actions)) {}
    std::string name() const override { return "scripted"; }
    void reset(std::uint64_t) override { next_ = 0; }
    std::optional<Action> act(const Observation& obs, const Environment& env) override;

private:
    std::vector<Action> actions_;
    std::size_t next_ = 0;
};

/// Area-clearing planner: one clearance path per box chosen by a GTSP over
/// all (box, edge) candidates, planned once at the first action and executed
/// as waypoint legs. Stops once the plan is exhausted.
class GtspPolicy : public Policy {
public:
    explicit GtspPolicy(std::size_t exact_limit = 10, double approach_margin = 0.1);
    std::string name() const override { return "gtsp"; }
    void reset(std::uint64_t seed) override;
    std::optional<Action> act(const Observation& obs, const Environment& env) override;
    nlohmann::json plan_dump() const override;

    const GtspGraph& graph() const { return graph_; }
    const GtspTour& tour() const { return tour_; }
    /// Indices into tour().vertices of the clearance paths actually started.
    const std::vector<std::size_t>& executed() const { return executed_; }

private:
    void plan(const Environment& env);
    bool start_next_path(const Environment& env);

    std::size_t exact_limit_;
    double margin_;
    bool planned_ = false;
    GtspGraph graph_;
    GtspTour tour_;
    std::size_t cursor_ = 0;  // next tour entry to start
    std::vector<Vec2> queue_;  // remaining waypoints of the current clearance path
    std::size_t transit_left_ = 0;  // how many queued waypoints are transit (the rest is the push)
    bool last_was_transit_ = false;
    std::vector<std::size_t> executed_;
};

/// Factory by name: dt_descent, random, gtsp. Unknown names throw ConfigError.
std::unique_ptr<Policy> make_policy(const std::string& name, const nlohmann::json& params = nlohmann::json::object());
std::vector<std::string> policy_names();

}  // namespace npin
