// Command-line front end: run, metrics, replay, observe, teleop.
// Exit codes: 0 ok, 2 bad configuration, 3 replay/metric divergence, 1 anything else.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "npin/env_config.hpp"
#include "npin/generation.hpp"
#include "npin/harness.hpp"
#include "npin/metrics_json.hpp"
#include "npin/observation.hpp"
#include "npin/teleop_server.hpp"
#include "npin/world_json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace npin;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

// Every config key doubles as a --flag. Values are read as JSON when they
// parse (numbers, bools, arrays) and as plain strings otherwise.
struct ConfigFlags {
    std::string env;
    std::string file;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--env,--kind", env, "environment: maze, ship_ice, box_delivery, area_clearing");
        app->add_option("--config", file, "flat JSON config file (flags override it)");
        const json defaults = config_to_json(EnvConfig{});
        for (const auto& [key, value] : defaults.items()) {
            if (key == "kind") continue;
            app->add_option("--" + key, values[key], "config key " + key + " (default for maze: " + value.dump() + ")");
        }
    }

    EnvConfig resolve() const {
        json file_json = json::object();
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw ConfigError("cannot open config file " + file);
            try {
                in >> file_json;
            } catch (const json::exception& e) {
                throw ConfigError("config file " + file + ": " + e.what());
            }
            if (!file_json.is_object()) throw ConfigError("config file must hold a JSON object");
        }
        std::string kind = file_json.value("kind", std::string("maze"));
        if (!env.empty()) kind = env;
        EnvConfig c = apply_overrides(EnvConfig::defaults_for(env_kind_from_string(kind)), file_json);
        json flags = json::object();
        for (const auto& [key, raw] : values) {
            if (raw.empty()) continue;
            json v = json::parse(raw, nullptr, false);
            flags[key] = v.is_discarded() ? json(raw) : v;
        }
        c = apply_overrides(c, flags);
        c.validate();
        return c;
    }
};

void write_json(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

int cmd_run(const ConfigFlags& flags, RunSpec spec, const std::string& params) {
    spec.env = flags.resolve();
    spec.base_seed = spec.env.seed;
    try {
        spec.policy_params = json::parse(params);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("--policy-params: ") + e.what());
    }
    make_policy(spec.policy, spec.policy_params);  // fail fast on a bad name or params
    const auto t0 = std::chrono::steady_clock::now();
    const EvaluationResult result = run_evaluation(spec);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << summary_csv_header() << '\n' << summary_csv_row(result.summary) << '\n';
    if (spec.verbosity >= 1) {
        std::fprintf(stderr, "%d episodes in %.1f s%s\n", spec.episodes, secs,
                     spec.output_dir.empty() ? "" : (", wrote " + spec.output_dir.string()).c_str());
    }
    return 0;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

int cmd_metrics(const fs::path& in, const fs::path& out) {
    const std::vector<EpisodeLog> logs = read_jsonl(in);
    if (logs.empty()) throw HarnessError(in.string() + " holds no episodes");
    const std::vector<MetricReport> fresh = recompute_metrics(logs);
    std::size_t mismatched = 0;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const MetricReport& a = fresh[i];
        const MetricReport& b = logs[i].metrics;
        failed += logs[i].failed ? 1 : 0;
        const bool same = close(a.efficiency, b.efficiency) && close(a.effort, b.effort) &&
                          a.success.has_value() == b.success.has_value() && (!a.success || *a.success == *b.success);
        if (!same) {
            ++mismatched;
            std::fprintf(stderr, "episode %zu: logged E=%.12g I=%.12g, recomputed E=%.12g I=%.12g\n", logs[i].index,
                         b.efficiency, b.effort, a.efficiency, a.effort);
        }
    }
    const Aggregate agg = aggregate(logs.front().policy, logs.front().record.env, fresh, failed);
    const std::string csv = summary_csv_header() + "\n" + summary_csv_row(agg) + "\n";
    std::cout << csv;
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw HarnessError("cannot write " + out.string());
        f << csv;
    }
    if (mismatched > 0) {
        std::fprintf(stderr, "%zu of %zu episodes disagree with their logged metrics\n", mismatched, logs.size());
        return kExitDivergence;
    }
    return 0;
}

int cmd_replay(const fs::path& in, long episode) {
    const std::vector<EpisodeLog> logs = read_jsonl(in);
    std::size_t checked = 0;
    for (const EpisodeLog& log : logs) {
        if (episode >= 0 && static_cast<long>(log.index) != episode) continue;
        try {
            replay(log);
        } catch (const DivergenceError& e) {
            std::fprintf(stderr, "episode %zu diverged at step %zu: %s\n", log.index, e.step(), e.what());
            return kExitDivergence;
        }
        ++checked;
    }
    if (checked == 0) throw HarnessError("no matching episode in " + in.string());
    std::printf("replayed %zu episode(s), all identical\n", checked);
    return 0;
}

int cmd_observe(const ConfigFlags& flags, const fs::path& out, const std::string& policy_name, int steps) {
    const EnvConfig config = flags.resolve();
    Environment env(config);
    fs::create_directories(out);
    write_json(out / "world_initial.json", world_to_json(env.world()));
    Observation obs = env.observe();
    std::unique_ptr<Policy> policy;
    if (!policy_name.empty()) {
        policy = make_policy(policy_name);
        policy->reset(config.seed);
    }
    for (int i = 0; policy && i < steps && !env.status().finished(); ++i) {
        const auto action = policy->act(obs, env);
        if (!action) break;
        obs = env.step(*action).observation;
    }
    write_json(out / "world.json", world_to_json(env.world()));
    write_json(out / "observation.json", observation_to_json(obs));
    for (const fs::path& p : write_pgm(obs, out / "observation")) std::printf("%s\n", p.c_str());
    if (policy && !policy->plan_dump().is_null()) write_json(out / "plan.json", policy->plan_dump());
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

std::atomic<bool> g_interrupted{false};

int cmd_teleop(const ConfigFlags& flags, TeleopServerOptions options) {
    options.config = flags.resolve();
    TeleopServer server(options);
    server.start();
    std::fprintf(stderr, "teleop listening on port %u (%s, %.0f Hz)\n", server.port(),
                 to_string(options.config.kind).c_str(), options.tick_hz);
    std::signal(SIGINT, [](int) { g_interrupted = true; });
    std::signal(SIGTERM, [](int) { g_interrupted = true; });
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    server.wait();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-prehensile interactive navigation benchmark"};
    app.require_subcommand(1);

    ConfigFlags run_flags, observe_flags, teleop_flags;
    RunSpec spec;
    std::string policy_params = "{}";
    int verbose = 0;
    bool quiet = false;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "evaluate a policy over N seeded episodes");
    run_flags.attach(run);
    run->add_option("--policy", spec.policy, "dt_descent, random or gtsp");
    run->add_option("--policy-params", policy_params, "policy parameters as a JSON object");
    run->add_option("--episodes", spec.episodes)->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "output directory for episodes.jsonl and summary.csv");
    run->add_option("--workers", spec.workers)->check(CLI::PositiveNumber);
    run->add_flag("--snapshots", spec.snapshots, "write initial/final world and plan per episode");
    run->add_flag("-v,--verbose", verbose, "per-episode progress on stderr");
    run->add_flag("-q,--quiet", quiet);

    std::string in_path, metrics_out;
    auto* metrics = app.add_subcommand("metrics", "recompute metrics from an episodes.jsonl");
    metrics->add_option("--in", in_path)->required();
    metrics->add_option("--out", metrics_out, "write the recomputed summary.csv here");

    std::string replay_in;
    long episode = -1;
    auto* rep = app.add_subcommand("replay", "re-simulate logged actions and check they match");
    rep->add_option("--in", replay_in)->required();
    rep->add_option("--episode", episode, "episode index (default: all)");

    std::string observe_out = "observe_out", observe_policy;
    int observe_steps = 0;
    auto* observe = app.add_subcommand("observe", "dump the world, observation and (optionally) a plan");
    observe_flags.attach(observe);
    observe->add_option("--out", observe_out);
    observe->add_option("--policy", observe_policy, "policy to step before dumping (gtsp writes plan.json)");
    observe->add_option("--steps", observe_steps, "actions to take before dumping")->check(CLI::NonNegativeNumber);

    TeleopServerOptions teleop_opts;
    auto* teleop = app.add_subcommand("teleop", "serve the environment over WebSocket for a human operator");
    teleop_flags.attach(teleop);
    teleop->add_option("--bind", teleop_opts.bind, "host:port");
    teleop->add_option("--tick-hz", teleop_opts.tick_hz);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            spec.output_dir = out_dir;
            spec.verbosity = quiet ? 0 : 1 + verbose;
            return cmd_run(run_flags, spec, policy_params);
        }
        if (*metrics) return cmd_metrics(in_path, metrics_out);
        if (*rep) return cmd_replay(replay_in, episode);
        if (*observe) {
            if (observe_steps > 0 && observe_policy.empty()) observe_policy = "dt_descent";
            return cmd_observe(observe_flags, observe_out, observe_policy, observe_steps);
        }
        if (*teleop) return cmd_teleop(teleop_flags, teleop_opts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const GenerationError& e) {
        std::fprintf(stderr, "generation error: %s\n", e.what());
        return kExitConfig;
    } catch (const DivergenceError& e) {
        std::fprintf(stderr, "divergence at step %zu: %s\n", e.step(), e.what());
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
