#include "npin/teleop_session.hpp"

#include <algorithm>
#include <cmath>

#include "npin/metrics_json.hpp"
#include "npin/path_planner.hpp"
#include "npin/world_json.hpp"

namespace npin {

nlohmann::json provisional_to_json(const ProvisionalMetrics& m) {
    nlohmann::json j{{"E", m.efficiency}, {"I", m.effort}, {"l0", m.l0}};
    j["S"] = m.success ? nlohmann::json(*m.success) : nlohmann::json(nullptr);
    j["l0_star"] = m.l0_star ? nlohmann::json(*m.l0_star) : nlohmann::json(nullptr);
    return j;
}

TeleopSession::TeleopSession(EnvConfig config, std::string session_id, double tick_hz)
    : config_(std::move(config)), id_(std::move(session_id)), tick_hz_(tick_hz), env_(config_) {
    if (!(tick_hz_ > 0.0)) throw ConfigError("tick rate must be positive");
    reset(config_);
}

void TeleopSession::reset(const EnvConfig& config) {
    config_ = config;
    env_ = Environment(config_);
    substeps_ = std::max(1, static_cast<int>(std::lround(1.0 / (tick_hz_ * config_.physics.dt))));
    log_ = EpisodeLog{};
    log_.policy = "teleop";
    log_.config = config_;
    l0_star_.reset();
    if (is_navigation(config_.kind)) {
        try {
            l0_star_ = StaticPathPlanner(env_.static_map(), 0.5 * config_.robot_width)
                           .shortest_distance(env_.robot_start().position(), env_.goal());
        } catch (const UnreachableError&) {
        }
    }
    latched_.reset();
    one_shot_ = false;
    paused_ = true;
    ended_ = false;
    end_sent_ = false;
    last_reward_ = RewardBreakdown{};
    ticks_ = 0;
    cached_.reset();
}

nlohmann::json TeleopSession::envelope(const std::string& type) {
    return {{"v", kProtocolVersion}, {"seq", seq_++}, {"session", id_}, {"type", type}};
}

nlohmann::json TeleopSession::error(const std::string& message) {
    nlohmann::json j = envelope("error");
    j["message"] = message;
    return j;
}

nlohmann::json TeleopSession::hello() {
    nlohmann::json j = envelope("hello");
    j["config"] = config_to_json(config_);
    j["tick_hz"] = tick_hz_;
    j["substeps_per_tick"] = substeps_;
    j["action_mode"] = to_string(config_.action_mode);
    return j;
}

std::vector<nlohmann::json> TeleopSession::handle_text(const std::string& text) {
    nlohmann::json msg;
    try {
        msg = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        return {error(std::string("malformed JSON: ") + e.what())};
    }
    return handle(msg);
}

std::vector<nlohmann::json> TeleopSession::handle(const nlohmann::json& msg) {
    if (!msg.is_object()) return {error("message must be a JSON object")};
    if (!msg.contains("v") || msg["v"] != kProtocolVersion) {
        return {error("unsupported protocol version; expected v=" + std::to_string(kProtocolVersion))};
    }
    const std::string type = msg.value("type", std::string{});
    try {
        if (type == "control") {
            if (ended_) return {error("episode has ended; send a session reset")};
            Action action = action_from_json(msg);
            // Reject a mismatched mode now rather than at the next tick.
            const bool ok = std::visit(
                [&](const auto& a) {
                    using T = std::decay_t<decltype(a)>;
                    if constexpr (std::is_same_v<T, AngularAction>)
                        return config_.action_mode == ActionMode::angular_velocity;
                    else if constexpr (std::is_same_v<T, HeadingAction>)
                        return config_.action_mode == ActionMode::heading_step;
                    else
                        return config_.action_mode == ActionMode::waypoint;
                },
                action);
            if (!ok) return {error("control does not match action mode " + to_string(config_.action_mode))};
            latched_ = action;
            one_shot_ = config_.action_mode != ActionMode::angular_velocity;
            paused_ = false;
            return {};
        }
        if (type == "session") {
            const std::string op = msg.value("op", std::string{});
            if (op == "pause") {
                paused_ = true;
                return {state_message()};
            }
            if (op == "resume") {
                paused_ = false;
                return {state_message()};
            }
            if (op == "reset") {
                EnvConfig next = config_;
                if (msg.contains("env")) {
                    next = EnvConfig::defaults_for(env_kind_from_string(msg["env"].get<std::string>()));
                }
                if (msg.contains("config")) next = apply_overrides(next, msg["config"]);
                if (msg.contains("seed")) next.seed = msg["seed"].get<std::uint64_t>();
                reset(next);
                return {hello(), state_message()};
            }
            return {error("unknown session op '" + op + "'; expected reset, pause or resume")};
        }
        return {error("unknown message type '" + type + "'")};
    } catch (const std::exception& e) {
        return {error(e.what())};
    }
}

void TeleopSession::apply(const Action& action) {
    StepResult r = env_.step(action);
    last_reward_ = r.reward;
    log_.steps.push_back({action, r.reward, env_.world().robot().pose});
}

std::vector<nlohmann::json> TeleopSession::tick(bool emit_state) {
    std::vector<nlohmann::json> out;
    if (ended_) return out;
    if (!paused_ && latched_) {
        ++ticks_;
        if (one_shot_) {
            apply(*latched_);
            latched_.reset();
        } else {
            for (int i = 0; i < substeps_ && !env_.status().finished(); ++i) apply(*latched_);
        }
        ended_ = env_.status().finished();
    }
    if (emit_state || ended_) out.push_back(state_message());
    if (ended_ && !end_sent_) {
        end_sent_ = true;
        log_.status = env_.status();
        log_.record = env_.record();
        log_.metrics = score_episode(log_);
        nlohmann::json j = envelope("episode_end");
        j["status"] = status_to_json(env_.status());
        j["metrics"] = metric_report_to_json(log_.metrics);
        j["log"] = episode_log_to_json(log_);
        out.push_back(std::move(j));
    }
    return out;
}

ProvisionalMetrics TeleopSession::provisional() const {
    const std::size_t key = 2 * log_.steps.size() + (ended_ ? 1 : 0);
    if (cached_ && cached_->first == key) return cached_->second;
    ProvisionalMetrics m = compute_provisional();
    cached_.emplace(key, m);
    return m;
}

ProvisionalMetrics TeleopSession::compute_provisional() const {
    ProvisionalMetrics m;
    const EpisodeRecord rec = env_.record();
    m.l0 = rec.robot_path_length;
    if (ended_) {
        // Final tick: report exactly what the metrics module scores.
        EpisodeLog final_log;
        final_log.record = rec;
        const MetricReport r = score_episode(final_log);
        m.efficiency = r.efficiency;
        m.effort = r.effort;
        if (r.success) m.success = r.success->value();
        m.l0_star = r.l0_star;
        return m;
    }
    if (rec.navigation) {
        m.l0_star = l0_star_;
        m.efficiency = (l0_star_ && m.l0 > 0.0) ? *l0_star_ / m.l0 : 0.0;
        m.effort = m.l0 > 0.0 ? nav_interaction_effort(rec) : 1.0;
        return m;
    }
    try {
        const MetricReport r = evaluate_episode(rec);
        m.efficiency = r.efficiency;
        m.effort = r.effort;
        if (r.success) m.success = r.success->value();
    } catch (const std::exception&) {
        m.success = manip_success(rec).value();
    }
    return m;
}

nlohmann::json TeleopSession::state_message() {
    nlohmann::json j = envelope("state");
    j["tick"] = ticks_;
    j["paused"] = paused_;
    j["world"] = world_to_json(env_.world());
    j["reward"] = reward_to_json(last_reward_);
    j["status"] = status_to_json(env_.status());
    j["metrics"] = provisional_to_json(provisional());
    return j;
}

}  // namespace npin
