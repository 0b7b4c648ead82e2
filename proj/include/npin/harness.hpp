#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "npin/environment.hpp"
#include "npin/metrics.hpp"
#include "npin/policies.hpp"
#include "npin/statistics.hpp"

namespace npin {

struct RunSpec {
    EnvConfig env;
    std::string policy = "dt_descent";
    nlohmann::json policy_params = nlohmann::json::object();
    int episodes = 200;
    std::uint64_t base_seed = 0;
    std::filesystem::path output_dir;  // empty: keep everything in memory
    int workers = 1;
    bool snapshots = false;  // initial/final world JSON per episode
    int verbosity = 1;
};

struct StepLog {
    Action action;
    RewardBreakdown reward;
    Pose robot;
};

struct EpisodeLog {
    std::size_t index = 0;
    std::string policy;
    EnvConfig config;  // seed already derived for this episode
    std::vector<StepLog> steps;
    EpisodeStatus status;
    EpisodeRecord record;
    MetricReport metrics;
    bool policy_done = false;  // policy stopped before a task outcome
    bool failed = false;
    std::string error;
    std::vector<std::string> notes;
    nlohmann::json plan;
    nlohmann::json final_world;  // not serialized into episodes.jsonl
    double wall_seconds = 0.0;  // not serialized: logs must be reproducible byte for byte
};

class HarnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Replay disagreed with a log; `step` is the first differing action (1-based),
/// or steps + 1 when only the final record differs.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t step, const std::string& what) : std::runtime_error(what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Rolls one episode to termination, truncation or policy exhaustion.
/// A throwing policy marks the episode failed instead of propagating.
EpisodeLog run_episode(const EnvConfig& config, Policy& policy, std::size_t index = 0);

/// Metrics with the failure convention applied (failed episodes score E = 0).
MetricReport score_episode(const EpisodeLog& log);

struct Aggregate {
    std::string policy;
    std::string env;
    std::size_t episodes = 0;
    std::size_t failed = 0;
    Summary efficiency;
    Summary effort;
    std::optional<Summary> success;  // manipulation tasks only
    double nav_success_rate = 0.0;
};

Aggregate aggregate(const std::string& policy, const std::string& env, const std::vector<MetricReport>& reports,
                    std::size_t failed = 0);

struct EvaluationResult {
    std::vector<EpisodeLog> logs;
    Aggregate summary;
};

/// Episodes 0..N-1 across a worker pool; files (if an output dir is set) are
/// written in index order: episodes.jsonl, summary.csv, snapshots/.
EvaluationResult run_evaluation(const RunSpec& spec);

nlohmann::json episode_log_to_json(const EpisodeLog& log);
EpisodeLog episode_log_from_json(const nlohmann::json& j);

/// Re-simulates the logged actions; throws DivergenceError on the first mismatch.
EpisodeRecord replay(const EpisodeLog& log);

/// Recomputes every row's metrics from the logged records (maps regenerated from configs).
std::vector<MetricReport> recompute_metrics(const std::vector<EpisodeLog>& logs);

std::vector<EpisodeLog> read_jsonl(const std::filesystem::path& path);
std::string summary_csv_header();
std::string summary_csv_row(const Aggregate& a);

}  // namespace npin
