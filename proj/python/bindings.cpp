#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "npin/environment.hpp"
#include "npin/harness.hpp"
#include "npin/metrics_json.hpp"
#include "npin/world_json.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace npin;

// Structured values cross the boundary as JSON text; the Python wrapper turns
// them into dicts. Only observation channels go over as arrays.

namespace {

py::dict observation_arrays(const Observation& obs) {
    py::dict out;
    for (std::size_t i = 0; i < obs.names.size(); ++i) {
        const ChannelGrid& g = obs.channels[i];
        py::array_t<float> a({g.height(), g.width()});
        auto view = a.mutable_unchecked<2>();
        // row 0 is the far edge of the window, matching the PGM dumps
        for (int r = 0; r < g.height(); ++r) {
            for (int c = 0; c < g.width(); ++c) view(r, c) = g[Cell{c, r}];
        }
        out[py::str(obs.names[i])] = std::move(a);
    }
    return out;
}

EnvConfig parse_config(const std::string& text) { return config_from_json(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compiled core of the npin benchmark";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    m.def("default_config", [](const std::string& kind) {
        return config_to_json(EnvConfig::defaults_for(env_kind_from_string(kind))).dump();
    });
    m.def("policy_names", &policy_names);
    m.def("episode_seed", &episode_seed, py::arg("base_seed"), py::arg("index"));

    m.def(
        "run",
        [](const std::string& config, const std::string& policy, int episodes, std::uint64_t base_seed,
           const std::string& output_dir, int workers, const std::string& policy_params) {
            RunSpec spec;
            spec.env = parse_config(config);
            spec.policy = policy;
            spec.policy_params = json::parse(policy_params);
            spec.episodes = episodes;
            spec.base_seed = base_seed;
            spec.output_dir = output_dir;
            spec.workers = workers;
            spec.verbosity = 0;
            EvaluationResult r;
            {
                py::gil_scoped_release release;
                r = run_evaluation(spec);
            }
            json reports = json::array();
            for (const EpisodeLog& l : r.logs) reports.push_back(metric_report_to_json(l.metrics));
            json summary{{"summary_csv", summary_csv_row(r.summary)},
                         {"header", summary_csv_header()},
                         {"episodes", reports}};
            return summary.dump();
        },
        py::arg("config"), py::arg("policy") = "dt_descent", py::arg("episodes") = 10, py::arg("base_seed") = 0,
        py::arg("output_dir") = "", py::arg("workers") = 1, py::arg("policy_params") = "{}");

    m.def("replay_jsonl", [](const std::string& path) {
        std::size_t n = 0;
        for (const EpisodeLog& l : read_jsonl(path)) {
            replay(l);
            ++n;
        }
        return n;
    });

    py::class_<Environment>(m, "Env")
        .def(py::init([](const std::string& config) { return Environment(parse_config(config)); }))
        .def("reset", [](Environment& e) { return observation_arrays(e.reset()); })
        .def("reset_seed", [](Environment& e, std::uint64_t seed) { return observation_arrays(e.reset(seed)); })
        .def("observe", [](const Environment& e) { return observation_arrays(e.observe()); })
        .def("step",
             [](Environment& e, const std::string& action) {
                 StepResult r = e.step(action_from_json(json::parse(action)));
                 json meta{{"reward", reward_to_json(r.reward)}, {"status", status_to_json(r.status)}};
                 return py::make_tuple(observation_arrays(r.observation), meta.dump());
             })
        .def("config", [](const Environment& e) { return config_to_json(e.config()).dump(); })
        .def("world", [](const Environment& e) { return world_to_json(e.world()).dump(); })
        .def("status", [](const Environment& e) { return status_to_json(e.status()).dump(); })
        .def("metrics", [](const Environment& e) { return metric_report_to_json(evaluate_episode(e.record())).dump(); });
}
