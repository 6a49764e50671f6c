// qosheft: periodic DAG scheduling with quality versions on pre-occupied VMs.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qosheft/commands.hpp"
#include "qosheft/errors.hpp"

using namespace qosheft;

namespace {

// Rational flags are read as text ("0.3", "3/10") and converted after parsing.
struct RationalFlag {
    std::string text;
    Rational * target;
};

void add_rational(CLI::App * app, std::vector<RationalFlag> & flags, std::string const & name, Rational & target,
                  std::string const & help) {
    flags.push_back({to_string(target), &target});
    app->add_option(name, flags.back().text, help)->capture_default_str();
}

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"Periodic DAG scheduling with quality versions on pre-occupied VMs"};
    app.require_subcommand(1);
    std::vector<RationalFlag> rationals;
    rationals.reserve(16);

    cli::ScheduleOptions schedule;
    auto * sc = app.add_subcommand("schedule", "Schedule DAGs over one hyperperiod");
    sc->add_option("dags", schedule.dag_files, "DAG JSON files")->check(CLI::ExistingFile);
    sc->add_option("-p,--platform", schedule.platform_file, "Platform JSON file")->required()->check(CLI::ExistingFile);
    sc->add_option("-o,--output", schedule.output, "Schedule JSON to write")->capture_default_str();
    sc->add_option("--gantt", schedule.gantt, "Gantt CSV to write (default: output with .csv)");
    sc->add_option("-r,--repetition-factor", schedule.repetition_factor, "Hyperperiods per scheduling horizon")
        ->capture_default_str()
        ->check(CLI::Range(1, 1'000'000));
    bool no_enhance = false;
    sc->add_flag("--no-enhance", no_enhance, "Keep every task at its base version");

    cli::VerifyOptions verify;
    auto * vc = app.add_subcommand("verify", "Check a schedule against its DAGs and platform");
    vc->add_option("schedule", verify.schedule_file, "Schedule JSON")->required()->check(CLI::ExistingFile);
    vc->add_option("dags", verify.dag_files, "DAG JSON files")->check(CLI::ExistingFile);
    vc->add_option("-p,--platform", verify.platform_file, "Platform JSON file")->required()->check(CLI::ExistingFile);

    cli::GenerateOptions generate;
    generate.dag.period_quantum = generate.platform.background_period / 2;
    auto * gc = app.add_subcommand("generate", "Generate a random DAG and a pre-occupied platform");
    gc->add_option("-n,--tasks", generate.dag.n_tasks, "Number of tasks")->capture_default_str();
    gc->add_option("--edge-density", generate.dag.edge_density, "Probability of each extra forward edge")
        ->capture_default_str();
    gc->add_option("--levels", generate.dag.n_levels, "Quality versions per task")->capture_default_str();
    add_rational(gc, rationals, "--period-slack", generate.dag.period_slack, "Period over the workload lower bound");
    gc->add_option("--exec-min", generate.dag.exec_min, "Smallest execution time")->capture_default_str();
    gc->add_option("--exec-max", generate.dag.exec_max, "Largest execution time")->capture_default_str();
    gc->add_option("--period-quantum", generate.dag.period_quantum, "Round periods up to a multiple of this")
        ->capture_default_str();
    gc->add_option("--vms", generate.platform.n_vms, "Number of VMs")->capture_default_str();
    add_rational(gc, rationals, "--occupancy", generate.platform.occupancy_fraction, "Background occupancy in [0, 1)");
    gc->add_option("--background-period", generate.platform.background_period, "Period of the background workload")
        ->capture_default_str();
    gc->add_option("--min-slot", generate.platform.min_slot, "Shortest idle slot")->capture_default_str();
    add_rational(gc, rationals, "--ccr", generate.ccr, "Communication to computation ratio");
    std::uint64_t gen_seed = 0;
    gc->add_option("-s,--seed", gen_seed, "Random seed")->capture_default_str();
    gc->add_option("-o,--output", generate.output, "Directory for dag.json and platform.json")->capture_default_str();

    cli::SweepOptions sweep;
    sweep.config = full_sweep_preset();  // the only preset, and the default
    auto * wc = app.add_subcommand("sweep", "Run the occupancy, CCR and processor sweeps");
    std::string preset;
    wc->add_option("--preset", preset, "Named configuration")->check(CLI::IsMember({"paper-sweep"}));
    std::vector<std::size_t> sizes;
    wc->add_option("--sizes", sizes, "DAG sizes (default 10 20 30 40 50)");
    wc->add_option("--dags-per-size", sweep.config.dags_per_size, "DAGs per size")->capture_default_str();
    std::vector<std::string> axes;
    wc->add_option("--axes", axes, "Axes to sweep")->check(CLI::IsMember({"occupancy", "ccr", "processors"}));
    wc->add_option("-s,--seed", sweep.config.base_seed, "Base seed")->capture_default_str();
    wc->add_option("-j,--workers", sweep.config.workers, "Worker threads (0: one per core)")->capture_default_str();
    wc->add_option("-r,--repetition-factor", sweep.config.repetition_factor, "Hyperperiods per horizon")
        ->capture_default_str()
        ->check(CLI::Range(1, 1'000'000));
    wc->add_option("-o,--output", sweep.output, "Directory for results.csv and aggregates.csv")->capture_default_str();
    bool no_timing = false;
    wc->add_flag("--no-timing", no_timing, "Write 0 for wall_ms so reruns are byte-identical");

    try {
        app.parse(argc, argv);
        for (auto const & flag : rationals) *flag.target = parse_rational(flag.text);
    } catch (CLI::ParseError const & e) {
        int const code = app.exit(e);
        return code == 0 ? cli::exit_code::ok : cli::exit_code::usage;
    } catch (ParseError const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code::usage;
    }

    if (sc->parsed()) {
        schedule.enhance = !no_enhance;
        return cli::cmd_schedule(schedule, std::cout, std::cerr);
    }
    if (vc->parsed()) return cli::cmd_verify(verify, std::cout, std::cerr);
    if (gc->parsed()) {
        generate.dag.seed = gen_seed;
        generate.platform.seed = gen_seed;
        return cli::cmd_generate(generate, std::cout, std::cerr);
    }
    if (!sizes.empty()) sweep.config.dag_sizes = sizes;
    if (!axes.empty()) {
        sweep.config.axes.clear();
        for (auto const & a : axes) sweep.config.axes.push_back(parse_axis(a));
    }
    sweep.config.record_timing = !no_timing;
    return cli::cmd_sweep(sweep, std::cout, std::cerr);
}
