#include "qosheft/commands.hpp"

#include <ostream>

#include "qosheft/errors.hpp"
#include "qosheft/io.hpp"
#include "qosheft/metrics.hpp"
#include "qosheft/oracle.hpp"
#include "qosheft/periodic.hpp"

namespace qosheft::cli {

namespace {

// Input problems are usage errors; anything found while scheduling or
// generating is reported as an infeasible outcome.
template <class Body>
int guarded(std::ostream & err, Body && body) {
    try {
        return body();
    } catch (ParseError const & e) {
        err << "error: " << e.what() << "\n";
    } catch (LookupError const & e) {
        err << "error: " << e.what() << "\n";
    } catch (StructuralError const & e) {
        err << "error: " << e.what() << "\n";
    } catch (DomainError const & e) {
        err << "error: " << e.what() << "\n";
    } catch (Error const & e) {
        err << "error: " << e.what() << "\n";
        return exit_code::infeasible;
    } catch (std::filesystem::filesystem_error const & e) {
        err << "error: " << e.what() << "\n";
        return exit_code::infeasible;
    }
    return exit_code::usage;
}

std::vector<DagSpec> load_dags(std::vector<std::filesystem::path> const & files) {
    std::vector<DagSpec> dags;
    for (auto const & f : files) dags.push_back(io::load_dag(f));
    return dags;
}

bool report_invalid(std::vector<DagSpec> const & dags, Platform const & platform, std::ostream & err) {
    bool bad = false;
    for (auto const & problem : check_platform(platform)) {
        err << "invalid platform: " << problem << "\n";
        bad = true;
    }
    if (bad) return true;
    for (auto const & dag : dags) {
        for (auto const & v : validate_dag(dag, platform)) {
            err << "invalid DAG " << dag.dag_id << ": " << v.location << ": " << v.message << "\n";
            bad = true;
        }
    }
    return bad;
}

} // namespace

int cmd_schedule(ScheduleOptions const & options, std::ostream & out, std::ostream & err) {
    return guarded(err, [&] {
        auto const dags = load_dags(options.dag_files);
        auto const platform = io::load_platform(options.platform_file);
        if (report_invalid(dags, platform, err)) return exit_code::usage;

        auto const hs = schedule_periodic(dags, platform, PeriodicOptions{options.repetition_factor, options.enhance});
        auto gantt = options.gantt;
        if (gantt.empty()) gantt = std::filesystem::path(options.output).replace_extension(".csv");
        io::write_file(options.output, io::dump(io::to_json(hs)));
        io::write_file(gantt, io::gantt_csv(hs, platform));

        auto const reward = normalized_reward(hs, dags);
        out << "hyperperiod " << hs.hyperperiod << ", horizon " << hs.horizon() << ", " << hs.instances.size()
            << " instances, " << hs.entries.size() << " entries, " << hs.failures.size() << " failed\n";
        out << "NR " << format_fixed(reward.nr_percent, 2) << "% (reward " << to_string(reward.r_act) << " of "
            << to_string(reward.r_max) << ")\n";
        for (auto const & f : hs.failures) out << "failed: " << f.dag_id << " cycle " << f.cycle << ": " << f.reason << "\n";
        out << "wrote " << options.output.string() << " and " << gantt.string() << "\n";
        return hs.failures.empty() ? exit_code::ok : exit_code::infeasible;
    });
}

int cmd_verify(VerifyOptions const & options, std::ostream & out, std::ostream & err) {
    return guarded(err, [&] {
        auto const hs = io::load_schedule(options.schedule_file);
        auto const dags = load_dags(options.dag_files);
        auto const platform = io::load_platform(options.platform_file);
        if (report_invalid(dags, platform, err)) return exit_code::usage;

        auto const report = verify_schedule(hs, dags, platform);
        for (auto const & v : report) out << to_string(v.kind) << " " << v.location << ": " << v.detail << "\n";
        if (report.empty()) {
            out << "ok: " << hs.entries.size() << " entries, no violations\n";
            return exit_code::ok;
        }
        out << report.size() << " violation" << (report.size() == 1 ? "" : "s") << "\n";
        return exit_code::infeasible;
    });
}

int cmd_generate(GenerateOptions const & options, std::ostream & out, std::ostream & err) {
    return guarded(err, [&]() -> int {
        try {
            GenParams g = options.dag;
            OccupancyParams o = options.platform;
            g.n_vms = o.n_vms;
            auto const platform = generate_preoccupation(o);
            auto const dag = apply_ccr(generate_dag(g), options.ccr, platform);
            auto const dag_file = options.output / "dag.json";
            auto const platform_file = options.output / "platform.json";
            io::write_file(dag_file, io::dump(io::to_json(dag)));
            io::write_file(platform_file, io::dump(io::to_json(platform)));
            out << "wrote " << dag_file.string() << " (" << dag.tasks.size() << " tasks, " << dag.edges.size()
                << " edges, period " << dag.period << ") and " << platform_file.string() << "\n";
            return exit_code::ok;
        } catch (GenerationError const & e) {
            err << "error: " << e.what() << "\n";
            return exit_code::infeasible;
        }
    });
}

int cmd_sweep(SweepOptions const & options, std::ostream & out, std::ostream & err) {
    return guarded(err, [&] {
        validate(options.config);
        auto const rows = run_sweep(options.config);
        auto const aggregates = aggregate_rows(rows);
        auto const results = options.output / "results.csv";
        auto const summary = options.output / "aggregates.csv";
        io::write_file(results, rows_csv(rows));
        io::write_file(summary, aggregates_csv(aggregates));
        out << "wrote " << rows.size() << " rows to " << results.string() << " and " << aggregates.size()
            << " aggregates to " << summary.string() << "\n";
        return exit_code::ok;
    });
}

} // namespace qosheft::cli
