#include "npin/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "npin/metrics_json.hpp"
#include "npin/rng.hpp"
#include "npin/world_json.hpp"

namespace npin {

namespace {

nlohmann::json pose_json(const Pose& p) { return nlohmann::json::array({p.x, p.y, p.theta}); }

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

std::string summary_cells(const Summary& s) {
    return fmt(s.mean) + "," + fmt(s.median) + "," + fmt(s.q1) + "," + fmt(s.q3);
}

}  // namespace

EpisodeLog run_episode(const EnvConfig& config, Policy& policy, std::size_t index) {
    const auto t0 = std::chrono::steady_clock::now();
    EpisodeLog log;
    log.index = index;
    log.policy = policy.name();
    log.config = config;
    Environment env(config);
    try {
        policy.reset(config.seed);
        Observation obs = env.observe();
        while (!env.status().finished()) {
            const std::optional<Action> action = policy.act(obs, env);
            if (!action) {
                log.policy_done = true;
                break;
            }
            StepResult r = env.step(*action);
            log.steps.push_back({*action, r.reward, env.world().robot().pose});
            obs = std::move(r.observation);
        }
    } catch (const std::exception& e) {
        log.failed = true;
        log.error = e.what();
    }
    log.status = env.status();
    log.record = env.record();
    log.notes = policy.notes();
    log.plan = policy.plan_dump();
    log.final_world = world_to_json(env.world());
    log.metrics = score_episode(log);
    log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return log;
}

MetricReport score_episode(const EpisodeLog& log) {
    MetricReport report;
    try {
        report = evaluate_episode(log.record);
    } catch (const std::exception& e) {
        report.env = log.record.env;
        report.seed = log.record.seed;
        report.navigation = log.record.navigation;
        report.nav_success = log.record.nav_success;
        report.l0 = log.record.robot_path_length;
        report.efficiency = 0.0;
        report.effort = 0.0;
        if (!log.record.navigation && !log.record.objects.empty()) report.success = manip_success(log.record);
        report.diagnostics.push_back(std::string("scoring failed: ") + e.what());
    }
    if (log.failed) {
        report.efficiency = 0.0;
        report.diagnostics.push_back("episode failed: " + log.error);
    }
    return report;
}

Aggregate aggregate(const std::string& policy, const std::string& env, const std::vector<MetricReport>& reports,
                    std::size_t failed) {
    Aggregate a;
    a.policy = policy;
    a.env = env;
    a.episodes = reports.size();
    a.failed = failed;
    std::vector<double> e, i, s;
    std::size_t successes = 0;
    for (const MetricReport& r : reports) {
        e.push_back(r.efficiency);
        i.push_back(r.effort);
        if (r.success) s.push_back(r.success->value());
        successes += r.nav_success ? 1 : 0;
    }
    a.efficiency = summarize(e);
    a.effort = summarize(i);
    if (!s.empty()) a.success = summarize(s);
    a.nav_success_rate = reports.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(reports.size());
    return a;
}

std::string summary_csv_header() {
    return "policy,env,episodes,failed,E_mean,E_median,E_q1,E_q3,I_mean,I_median,I_q1,I_q3,"
           "S_mean,S_median,S_q1,S_q3,nav_success_rate";
}

std::string summary_csv_row(const Aggregate& a) {
    std::string row = a.policy + "," + a.env + "," + std::to_string(a.episodes) + "," + std::to_string(a.failed) +
                      "," + summary_cells(a.efficiency) + "," + summary_cells(a.effort) + ",";
    row += a.success ? summary_cells(*a.success) : ",,,";
    row += "," + fmt(a.nav_success_rate);
    return row;
}

nlohmann::json episode_log_to_json(const EpisodeLog& log) {
    nlohmann::json steps = nlohmann::json::array();
    for (const StepLog& s : log.steps) {
        steps.push_back(nlohmann::json::array(
            {action_to_json(s.action),
             nlohmann::json::array({s.reward.collision, s.reward.progress, s.reward.completion}), pose_json(s.robot)}));
    }
    return {{"index", log.index},
            {"policy", log.policy},
            {"env", to_string(log.config.kind)},
            {"seed", log.config.seed},
            {"config", config_to_json(log.config)},
            {"status", status_to_json(log.status)},
            {"record", episode_record_to_json(log.record)},
            {"metrics", metric_report_to_json(log.metrics)},
            {"policy_done", log.policy_done},
            {"failed", log.failed},
            {"error", log.error},
            {"notes", log.notes},
            {"plan", log.plan},
            {"steps", std::move(steps)}};
}

EpisodeLog episode_log_from_json(const nlohmann::json& j) {
    EpisodeLog log;
    log.index = j.at("index").get<std::size_t>();
    log.policy = j.at("policy").get<std::string>();
    log.config = config_from_json(j.at("config"));
    const auto& st = j.at("status");
    log.status.terminated = st.at("terminated").get<bool>();
    log.status.truncated = st.at("truncated").get<bool>();
    log.status.nav_success = st.at("nav_success").get<bool>();
    log.status.completed = st.at("completed").get<std::vector<bool>>();
    log.status.steps = st.at("steps").get<int>();
    log.status.steps_since_completion = st.at("steps_since_completion").get<int>();
    GeneratedWorld g = generate_world(log.config);
    log.record = episode_record_from_json(j.at("record"), std::move(g.static_map), std::move(g.goal));
    log.metrics = metric_report_from_json(j.at("metrics"));
    log.policy_done = j.value("policy_done", false);
    log.failed = j.value("failed", false);
    log.error = j.value("error", std::string{});
    log.notes = j.value("notes", std::vector<std::string>{});
    log.plan = j.value("plan", nlohmann::json(nullptr));
    for (const auto& s : j.at("steps")) {
        const auto& r = s.at(1);
        const auto& p = s.at(2);
        log.steps.push_back({action_from_json(s.at(0)),
                             {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()},
                             {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()}});
    }
    return log;
}

EpisodeRecord replay(const EpisodeLog& log) {
    Environment env(log.config);
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
        const StepLog& expected = log.steps[i];
        if (env.status().finished()) {
            throw DivergenceError(i + 1, "replay finished the episode before step " + std::to_string(i + 1));
        }
        const StepResult r = env.step(expected.action);
        const Pose& pose = env.world().robot().pose;
        const bool same = r.reward.collision == expected.reward.collision &&
                          r.reward.progress == expected.reward.progress &&
                          r.reward.completion == expected.reward.completion && pose == expected.robot;
        if (!same) {
            std::ostringstream msg;
            msg << std::setprecision(17) << "replay diverged at step " << i + 1 << ": robot (" << pose.x << ", "
                << pose.y << ", " << pose.theta << ") vs logged (" << expected.robot.x << ", " << expected.robot.y
                << ", " << expected.robot.theta << ")";
            throw DivergenceError(i + 1, msg.str());
        }
    }
    EpisodeRecord rec = env.record();
    if (episode_record_to_json(rec) != episode_record_to_json(log.record)) {
        throw DivergenceError(log.steps.size() + 1, "replayed episode record differs from the logged one");
    }
    return rec;
}

std::vector<MetricReport> recompute_metrics(const std::vector<EpisodeLog>& logs) {
    std::vector<MetricReport> out;
    out.reserve(logs.size());
    for (const EpisodeLog& log : logs) out.push_back(score_episode(log));
    return out;
}

std::vector<EpisodeLog> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw HarnessError("cannot read " + path.string());
    std::vector<EpisodeLog> logs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            logs.push_back(episode_log_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw HarnessError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return logs;
}

EvaluationResult run_evaluation(const RunSpec& spec) {
    if (spec.episodes < 1) throw ConfigError("episodes must be >= 1");
    spec.env.validate();
    make_policy(spec.policy, spec.policy_params);  // fail fast on a bad name

    std::ofstream jsonl;
    if (!spec.output_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(spec.output_dir, ec);
        jsonl.open(spec.output_dir / "episodes.jsonl", std::ios::trunc);
        if (ec || !jsonl) throw HarnessError("output directory is not writable: " + spec.output_dir.string());
        if (spec.snapshots) std::filesystem::create_directories(spec.output_dir / "snapshots");
    }

    const auto n = static_cast<std::size_t>(spec.episodes);
    EvaluationResult result;
    result.logs.resize(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        const auto policy = make_policy(spec.policy, spec.policy_params);
        for (std::size_t i = next++; i < n; i = next++) {
            EnvConfig config = spec.env;
            config.seed = episode_seed(spec.base_seed, i);
            try {
                result.logs[i] = run_episode(config, *policy, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
            if (spec.verbosity >= 2 && !errors[i]) {
                const MetricReport& m = result.logs[i].metrics;
                std::fprintf(stderr, "episode %zu seed %llu: E=%.4f I=%.4f%s\n", i,
                             static_cast<unsigned long long>(config.seed), m.efficiency, m.effort,
                             m.success ? (" S=" + std::to_string(m.success->value()).substr(0, 6)).c_str() : "");
            }
        }
    };
    const int workers = std::max(1, std::min(spec.workers, spec.episodes));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<MetricReport> reports;
    std::size_t failed = 0;
    for (const EpisodeLog& log : result.logs) {
        reports.push_back(log.metrics);
        failed += log.failed ? 1 : 0;
    }
    result.summary = aggregate(spec.policy, to_string(spec.env.kind), reports, failed);

    if (!spec.output_dir.empty()) {
        for (const EpisodeLog& log : result.logs) jsonl << episode_log_to_json(log).dump() << '\n';
        std::ofstream csv(spec.output_dir / "summary.csv", std::ios::trunc);
        csv << summary_csv_header() << '\n' << summary_csv_row(result.summary) << '\n';
        if (spec.snapshots) {
            for (const EpisodeLog& log : result.logs) {
                char stem[32];
                std::snprintf(stem, sizeof stem, "episode_%04zu", log.index);
                std::ofstream(spec.output_dir / "snapshots" / (std::string(stem) + "_initial.json"))
                    << world_to_json(generate_world(log.config).world).dump(2) << '\n';
                std::ofstream(spec.output_dir / "snapshots" / (std::string(stem) + "_final.json"))
                    << log.final_world.dump(2) << '\n';
                if (!log.plan.is_null()) {
                    std::ofstream(spec.output_dir / "snapshots" / (std::string(stem) + "_plan.json"))
                        << log.plan.dump(2) << '\n';
                }
            }
        }
        if (!jsonl || !std::ofstream(spec.output_dir / "summary.csv", std::ios::app)) {
            throw HarnessError("failed while writing results to " + spec.output_dir.string());
        }
    }
    return result;
}

}  // namespace npin
