#include "retailsim/config.hpp"
#include "retailsim/engine.hpp"
#include "retailsim/errors.hpp"
#include "retailsim/experiment.hpp"
#include "retailsim/metrics.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

int cmd_run(const std::string& scenario_path, const std::string& mode, int days,
            std::uint64_t seed, bool seed_given, int replication, const std::string& out_dir,
            bool check_invariants) {
    retailsim::ScenarioConfig cfg = retailsim::load_scenario(scenario_path);
    if (mode == "noise-reduction") {
        cfg = retailsim::to_noise_reduction(cfg);
    } else if (mode == "normal" && cfg.mode != retailsim::SimMode::Normal) {
        throw retailsim::ConfigError(
            "scenario is in noise_reduction mode; it cannot be run as normal");
    }
    if (seed_given)
        cfg.seed = seed;

    retailsim::RunOptions opt;
    opt.days = days;
    opt.check_invariants = check_invariants;
    const retailsim::RunOutput out = retailsim::run_replication(cfg, replication, opt);
    retailsim::write_outputs(out, out_dir);

    std::printf("%s: %d day(s), %ld visits, %ld transactions, %ld refunds -> %s\n",
                cfg.department_name.c_str(), days, out.total_visits, out.transactions,
                out.refunds_granted, out_dir.c_str());
    return 0;
}

int cmd_experiment(const std::string& spec_path, int jobs, const std::string& out_dir) {
    const retailsim::ExperimentSpec spec = retailsim::load_experiment_spec(spec_path);
    const retailsim::ExperimentResult result = retailsim::run_experiment(spec, jobs);
    retailsim::emit_report(result, out_dir);
    std::printf("%s: %zu level(s) x %d replication(s) x %d day(s) -> %s\n", spec.name.c_str(),
                spec.levels.size(), spec.replications, spec.days, out_dir.c_str());
    return 0;
}

int cmd_report(const std::string& in_dir) {
    std::fputs(retailsim::render_report(in_dir).c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based retail department simulator"};
    app.require_subcommand(1);

    std::string scenario_path, mode, run_out = "run-output";
    int days = 7, replication = 0;
    std::uint64_t seed = 0;
    bool check_invariants = false;

    CLI::App* run = app.add_subcommand("run", "Simulate one scenario and write its outputs");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--mode", mode, "Force a mode: normal or noise-reduction")
        ->check(CLI::IsMember({"normal", "noise-reduction"}));
    run->add_option("--days", days, "Number of calendar days to simulate")
        ->check(CLI::PositiveNumber);
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--replication", replication, "Replication index (default 0)");
    run->add_option("--out", run_out, "Output directory");
    run->add_flag("--check-invariants", check_invariants,
                  "Audit simulation state after every event");

    std::string spec_path, exp_out = "experiment-output";
    int jobs = 1;
    CLI::App* experiment =
        app.add_subcommand("experiment", "Run a parameter sweep with replications");
    experiment->add_option("--spec", spec_path, "Experiment spec file")->required();
    experiment->add_option("--jobs", jobs, "Concurrent replications")->check(CLI::PositiveNumber);
    experiment->add_option("--out", exp_out, "Output directory");

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "Summarize an experiment output directory");
    report->add_option("--in", report_dir, "Directory written by 'experiment'")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scenario_path, mode, days, seed, seed_opt->count() > 0, replication,
                           run_out, check_invariants);
        if (experiment->parsed())
            return cmd_experiment(spec_path, jobs, exp_out);
        if (report->parsed())
            return cmd_report(report_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
