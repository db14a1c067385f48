#include "retailsim/agents.hpp"
#include "retailsim/config.hpp"
#include "retailsim/engine.hpp"
#include "retailsim/errors.hpp"
#include "retailsim/experiment.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/stats.hpp"
#include "retailsim/stochastic.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

namespace py = pybind11;
using namespace retailsim;

namespace {

LikelihoodLevel parse_level(const py::object& level) {
    if (py::isinstance<py::str>(level))
        return likelihood_from_string(level.cast<std::string>());
    const int v = level.cast<int>();
    if (v < 0 || v > 2)
        throw std::invalid_argument("likelihood must be 0..2 or low/moderate/high");
    return static_cast<LikelihoodLevel>(v);
}

TriangularParams parse_tri(const std::tuple<double, double, double>& t) {
    return TriangularParams{std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

py::dict run_counters(const RunOutput& out) {
    py::dict d;
    d["total_visits"] = out.total_visits;
    d["transactions"] = out.transactions;
    d["refunds_granted"] = out.refunds_granted;
    for (int i = 0; i < kExitReasonCount; ++i)
        d[("exits_" + to_string(static_cast<ExitReason>(i))).c_str()] = out.exits_by_reason[i];
    for (int i = 0; i < 3; ++i) {
        const std::string cls = to_string(static_cast<SatisfactionClass>(i));
        d[("csm_ahd_" + cls).c_str()] = out.csm_ahd[i];
        d[("csm_epv_" + cls).c_str()] = out.csm_epv[i];
    }
    for (int i = 0; i < kQueueKindCount; ++i) {
        const std::string q = to_string(static_cast<QueueKind>(i));
        d[("queued_" + q).c_str()] = out.queue_entered[i];
        d[("reneged_" + q).c_str()] = out.queue_reneged[i];
    }
    return d;
}

py::list run_daily(const RunOutput& out) {
    py::list rows;
    for (const DailyTally& t : out.daily) {
        py::dict d;
        d["day"] = t.day;
        d["weekday"] = to_string(t.weekday);
        d["open"] = t.open;
        d["wom_extra"] = t.wom_extra;
        d["arrivals"] = t.arrivals;
        d["exits"] = t.exits;
        d["transactions"] = t.transactions;
        d["reneges"] = t.reneges;
        d["epv_satisfied"] = t.epv_class[0];
        d["epv_neutral"] = t.epv_class[1];
        d["epv_dissatisfied"] = t.epv_class[2];
        rows.append(d);
    }
    return rows;
}

py::dict run_measures(const RunOutput& out) {
    py::dict d;
    const auto& names = measure_names();
    const auto values = measure_values(out);
    for (std::size_t i = 0; i < names.size(); ++i)
        d[names[i].c_str()] = values[i];
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Agent-based retail department simulator";
    m.attr("__version__") = "1.0.0";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NoStaffConfiguredError>(m, "NoStaffConfiguredError");
    py::register_exception<InvariantViolation>(m, "InvariantViolation");
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError");
    py::register_exception<IoError>(m, "IoError");

    py::class_<ScenarioConfig>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("department_name", &ScenarioConfig::department_name)
        .def_readwrite("pool_size", &ScenarioConfig::pool_size)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("neutral_band", &ScenarioConfig::neutral_band)
        .def_readwrite("refund_goal_probability", &ScenarioConfig::refund_goal_probability)
        .def_property_readonly("mode",
                               [](const ScenarioConfig& c) { return to_string(c.mode); })
        .def_property(
            "adoption_fraction",
            [](const ScenarioConfig& c) { return c.wom.adoption_fraction; },
            [](ScenarioConfig& c, double v) { c.wom.adoption_fraction = v; })
        .def_property(
            "contact_rate", [](const ScenarioConfig& c) { return c.wom.contact_rate; },
            [](ScenarioConfig& c, double v) { c.wom.contact_rate = v; })
        .def("to_json", [](const ScenarioConfig& c) { return scenario_to_json_text(c); })
        .def_static("from_json", &scenario_from_json_text, py::arg("text"))
        .def("validate", [](const ScenarioConfig& c) { validate(c); })
        .def(
            "save", [](const ScenarioConfig& c, const std::string& path) { save_scenario(c, path); },
            py::arg("path"))
        .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) { return a == b; });

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
    m.def("to_noise_reduction", &to_noise_reduction, py::arg("scenario"));

    py::class_<RandomStream>(m, "RandomStream")
        .def(py::init<std::uint64_t, std::string, std::uint64_t>(), py::arg("master_seed"),
             py::arg("purpose"), py::arg("replication") = 0)
        .def("uniform", &RandomStream::uniform)
        .def("below", &RandomStream::below, py::arg("p"))
        .def("uniform_int", &RandomStream::uniform_int, py::arg("n"))
        .def_property_readonly("master_seed", &RandomStream::master_seed)
        .def_property_readonly("purpose", &RandomStream::purpose)
        .def_property_readonly("replication", &RandomStream::replication);

    m.def(
        "correct_threshold",
        [](double base, const py::object& level) {
            return correct_threshold(base, parse_level(level));
        },
        py::arg("base"), py::arg("likelihood"));
    m.def(
        "corrected_bernoulli",
        [](double base, const py::object& level, RandomStream& s) {
            return corrected_bernoulli(base, parse_level(level), s);
        },
        py::arg("base"), py::arg("likelihood"), py::arg("stream"));
    m.def(
        "correct_delay",
        [](const std::tuple<double, double, double>& tri, const py::object& level) {
            const TriangularParams out = correct_delay(parse_tri(tri), parse_level(level));
            return std::make_tuple(out.min, out.mode, out.max);
        },
        py::arg("params"), py::arg("likelihood"));
    m.def(
        "sample_triangular",
        [](const std::tuple<double, double, double>& tri, RandomStream& s) {
            return sample_triangular(parse_tri(tri), s);
        },
        py::arg("params"), py::arg("stream"));
    m.def("sample_poisson", &sample_poisson, py::arg("mean"), py::arg("stream"));

    m.def(
        "classify",
        [](long long score, int band) { return to_string(classify(score, band)); },
        py::arg("score"), py::arg("neutral_band") = 0);
    m.def(
        "wom_additional",
        [](long sat, long dis, double adoption_fraction, double contact_rate) {
            return wom_additional(sat, dis, WomConfig{adoption_fraction, contact_rate});
        },
        py::arg("satisfied"), py::arg("dissatisfied"), py::arg("adoption_fraction"),
        py::arg("contact_rate") = 1.0);

    py::class_<RunOutput>(m, "RunResult")
        .def_property_readonly("total_visits", [](const RunOutput& o) { return o.total_visits; })
        .def_property_readonly("transactions", [](const RunOutput& o) { return o.transactions; })
        .def_property_readonly("refunds_granted",
                               [](const RunOutput& o) { return o.refunds_granted; })
        .def("counters", &run_counters)
        .def("daily", &run_daily)
        .def("histogram",
             [](const RunOutput& o) {
                 py::dict d;
                 for (const auto& [score, n] : o.visit_score_histogram)
                     d[py::int_(score)] = n;
                 return d;
             })
        .def("measures", &run_measures)
        .def(
            "write", [](const RunOutput& o, const std::string& dir) { write_outputs(o, dir); },
            py::arg("directory"));

    m.def(
        "run_replication",
        [](const ScenarioConfig& cfg, int replication, int days, bool check_invariants) {
            RunOptions opt;
            opt.days = days;
            opt.check_invariants = check_invariants;
            return run_replication(cfg, replication, opt);
        },
        py::arg("scenario"), py::arg("replication") = 0, py::arg("days") = 7,
        py::arg("check_invariants") = false);

    m.def("describe", [](const std::vector<double>& xs) {
        const Descriptives d = describe(xs);
        return std::make_tuple(d.n, d.mean, d.sd);
    });
    m.def("welch_t", [](const std::vector<double>& a, const std::vector<double>& b) {
        const TTestResult r = welch_t(a, b);
        py::dict d;
        d["t"] = r.t;
        d["df"] = r.df;
        d["p"] = r.p;
        d["degenerate"] = r.degenerate;
        return d;
    });
    m.def("student_t", [](const std::vector<double>& a, const std::vector<double>& b) {
        const TTestResult r = student_t(a, b);
        py::dict d;
        d["t"] = r.t;
        d["df"] = r.df;
        d["p"] = r.p;
        d["degenerate"] = r.degenerate;
        return d;
    });
    m.def("levene_test", [](const std::vector<double>& a, const std::vector<double>& b) {
        const LeveneResult r = levene_test(a, b);
        return std::make_tuple(r.W, r.p);
    });
    m.def("eta_squared", &eta_squared, py::arg("t"), py::arg("df"));
    m.def("t_cdf", &t_cdf, py::arg("t"), py::arg("df"));
    m.def("f_cdf", &f_cdf, py::arg("x"), py::arg("d1"), py::arg("d2"));

    m.def("measure_names", [] { return measure_names(); });
    m.def(
        "run_experiment",
        [](const std::string& spec_path, const std::string& out_dir, int jobs) {
            const ExperimentSpec spec = load_experiment_spec(spec_path);
            const ExperimentResult result = run_experiment(spec, jobs);
            emit_report(result, out_dir);
            py::dict d;
            d["name"] = spec.name;
            d["levels"] = static_cast<int>(spec.levels.size());
            d["replications"] = spec.replications;
            d["days"] = spec.days;
            return d;
        },
        py::arg("spec_path"), py::arg("out_dir"), py::arg("jobs") = 1);
    m.def("render_report", &render_report, py::arg("directory"));
}
