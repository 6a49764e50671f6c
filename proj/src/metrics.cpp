#include "qosheft/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "qosheft/errors.hpp"

namespace qosheft {

RewardReport normalized_reward(HyperSchedule const & hs, std::span<DagSpec const> dags) {
    Tick const horizon = hs.horizon();
    std::map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < dags.size(); ++i) {
        if (!by_id.emplace(dags[i].dag_id, i).second) throw DomainError("duplicate DAG id '" + dags[i].dag_id + "'");
    }
    std::set<std::pair<std::string, std::int64_t>> failed;
    for (auto const & f : hs.failures) failed.emplace(f.dag_id, f.cycle);

    RewardReport report;
    report.per_dag.resize(dags.size());
    for (std::size_t i = 0; i < dags.size(); ++i) {
        auto const & dag = dags[i];
        if (dag.period <= 0 || horizon % dag.period != 0) {
            throw IntegrityError("period of '" + dag.dag_id + "' does not divide the schedule horizon");
        }
        Rational top = 0;
        for (auto const & task : dag.tasks) {
            if (task.max_level() > 0) top += task.reward(task.max_level());
        }
        auto & d = report.per_dag[i];
        d.dag_id = dag.dag_id;
        d.r_max = top * (horizon / dag.period);
    }
    for (auto const & [dag_id, cycle] : failed) {
        auto it = by_id.find(dag_id);
        if (it == by_id.end()) throw IntegrityError("failure of unknown DAG '" + dag_id + "'");
        ++report.per_dag[it->second].nullified_instances;
    }
    for (auto const & e : hs.entries) {
        auto it = by_id.find(e.instance.dag_id);
        if (it == by_id.end()) throw IntegrityError("entry of unknown DAG '" + e.instance.dag_id + "'");
        if (failed.contains({e.instance.dag_id, e.instance.cycle_index})) continue;
        auto const & dag = dags[it->second];
        std::size_t task = 0;
        try {
            task = dag.task_index(e.instance.source_task);
        } catch (LookupError const &) {
            throw IntegrityError("entry of unknown task '" + e.instance.source_task + "'");
        }
        report.per_dag[it->second].r_act += dag.tasks[task].reward(e.level);
    }
    for (auto & d : report.per_dag) {
        d.nr_percent = d.r_max == 0 ? Rational(100) : Rational(100) * d.r_act / d.r_max;
        report.r_act += d.r_act;
        report.r_max += d.r_max;
        report.nullified_instances += d.nullified_instances;
    }
    report.nr_percent = report.r_max == 0 ? Rational(100) : Rational(100) * report.r_act / report.r_max;
    return report;
}

ScheduleStats schedule_stats(HyperSchedule const & hs, Platform const & platform) {
    Tick const horizon = hs.horizon();
    if (horizon <= 0 || horizon % platform.background_period != 0) {
        throw IntegrityError("background period does not divide the schedule horizon");
    }
    ScheduleStats stats;
    for (std::size_t v = 0; v < platform.size(); ++v) {
        Tick const free = tile_queue(platform.queues[v], platform.background_period, horizon).total_idle();
        Tick busy = 0;
        for (auto const & e : hs.entries) {
            if (e.vm_id == platform.vms[v].vm_id) busy += e.finish - e.start;
        }
        stats.vms.push_back(VmStats{platform.vms[v].vm_id, busy, free - busy, horizon - free});
    }
    std::map<std::pair<std::string, std::int64_t>, Tick> finish;
    for (auto const & e : hs.entries) {
        auto [it, fresh] = finish.try_emplace({e.instance.dag_id, e.instance.cycle_index}, e.finish);
        if (!fresh) it->second = std::max(it->second, e.finish);
    }
    for (auto const & rec : hs.instances) {
        if (!rec.scheduled) continue;
        auto it = finish.find({rec.dag_id, rec.cycle});
        Tick const end = it == finish.end() ? rec.window.start : it->second;
        stats.instances.push_back(InstanceStats{rec.dag_id, rec.cycle, end - rec.window.start});
    }
    return stats;
}

} // namespace qosheft
