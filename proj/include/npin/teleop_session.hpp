#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "npin/environment.hpp"
#include "npin/harness.hpp"

namespace npin {

inline constexpr int kProtocolVersion = 1;

/// Live scores for the trajectory so far. Navigation efficiency is l0*/l0
/// without the success indicator until the episode ends.
struct ProvisionalMetrics {
    double efficiency = 0.0;
    double effort = 1.0;
    std::optional<double> success;
    double l0 = 0.0;
    std::optional<double> l0_star;
};

nlohmann::json provisional_to_json(const ProvisionalMetrics& m);

/// One operator's environment, independent of the transport. Messages in and
/// out are JSON objects carrying v, seq and session.
///
/// Navigation controls (omega) latch and apply on every tick. Manipulation
/// controls (heading, waypoint) are one-shot: each runs a single step on the
/// next tick, since one heading step already spans many physics substeps.
class TeleopSession {
public:
    TeleopSession(EnvConfig config, std::string session_id, double tick_hz = 30.0);

    /// Parses and applies one client frame. Malformed input yields an `error` reply.
    std::vector<nlohmann::json> handle_text(const std::string& text);
    std::vector<nlohmann::json> handle(const nlohmann::json& msg);
    /// One simulation tick; returns `state` (unless suppressed while catching
    /// up; the final state of an episode is always sent) and, once, `episode_end`.
    std::vector<nlohmann::json> tick(bool emit_state = true);

    nlohmann::json hello();
    nlohmann::json state_message();

    ProvisionalMetrics provisional() const;
    const Environment& environment() const { return env_; }
    /// Every action actually applied this episode, in order (replayable).
    const EpisodeLog& log() const { return log_; }
    int substeps_per_tick() const { return substeps_; }
    bool paused() const { return paused_; }
    bool ended() const { return ended_; }
    std::uint64_t ticks() const { return ticks_; }
    const std::string& id() const { return id_; }

private:
    nlohmann::json envelope(const std::string& type);
    nlohmann::json error(const std::string& message);
    void reset(const EnvConfig& config);
    void apply(const Action& action);
    ProvisionalMetrics compute_provisional() const;

    EnvConfig config_;
    std::string id_;
    double tick_hz_;
    int substeps_ = 1;
    Environment env_;
    EpisodeLog log_;
    std::optional<double> l0_star_;
    std::optional<Action> latched_;
    bool one_shot_ = false;
    bool paused_ = true;  // stays paused until the first control arrives
    bool ended_ = false;
    bool end_sent_ = false;
    RewardBreakdown last_reward_;
    // provisional scores only change when a step lands
    mutable std::optional<std::pair<std::size_t, ProvisionalMetrics>> cached_;
    std::uint64_t seq_ = 0;
    std::uint64_t ticks_ = 0;
};

}  // namespace npin
