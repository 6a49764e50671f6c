#include "qosheft/periodic.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "qosheft/errors.hpp"

namespace qosheft {

namespace {

// Materialised slot count above which a hyperperiod is refused.
constexpr Tick max_materialised_slots = 50'000'000;

} // namespace

Tick hyperperiod(std::span<Tick const> periods) {
    if (periods.empty()) throw DomainError("hyperperiod of an empty period list");
    Tick result = 1;
    for (Tick p : periods) {
        if (p <= 0) throw DomainError("periods must be positive, got " + std::to_string(p));
        Tick const factor = p / std::gcd(result, p);
        if (__builtin_mul_overflow(result, factor, &result)) throw DomainError("hyperperiod overflows");
    }
    return result;
}

std::vector<CycleWindow> cycle_windows(DagSpec const & dag, Tick hyper, int repetition_factor) {
    if (dag.period <= 0 || hyper <= 0 || repetition_factor < 1) throw DomainError("invalid cycle window request");
    if (hyper % dag.period != 0) {
        throw DomainError("period " + std::to_string(dag.period) + " does not divide hyperperiod " +
                          std::to_string(hyper));
    }
    Tick const count = repetition_factor * (hyper / dag.period);
    Tick const phase = dag.release % dag.period;
    std::vector<CycleWindow> windows;
    windows.reserve(static_cast<std::size_t>(count));
    for (Tick k = 0; k < count; ++k) {
        windows.push_back(CycleWindow{phase + k * dag.period, phase + (k + 1) * dag.period});
    }
    return windows;
}

HyperSchedule schedule_periodic(std::span<DagSpec const> dags, Platform const & platform,
                                PeriodicOptions const & options) {
    if (options.repetition_factor < 1) throw DomainError("repetition factor must be at least 1");
    if (auto problems = check_platform(platform); !problems.empty()) {
        throw DomainError("invalid platform: " + problems.front());
    }
    std::set<std::string> ids;
    std::vector<Tick> periods{platform.background_period};
    Tick tail = 0;
    for (auto const & dag : dags) {
        if (auto report = validate_dag(dag, platform); !report.empty()) {
            throw DomainError("invalid DAG: " + report.front().location + ": " + report.front().message);
        }
        if (!ids.insert(dag.dag_id).second) throw DomainError("duplicate DAG id '" + dag.dag_id + "'");
        periods.push_back(dag.period);
        tail = std::max(tail, dag.release % dag.period);
    }

    HyperSchedule hs;
    hs.hyperperiod = hyperperiod(periods);
    hs.repetition_factor = options.repetition_factor;
    Tick ring = 0;
    if (__builtin_mul_overflow(hs.hyperperiod, Tick{options.repetition_factor}, &ring)) {
        throw DomainError("scheduling horizon overflows");
    }
    Tick slot_count = 0;
    for (auto const & q : platform.queues) slot_count += static_cast<Tick>(q.slots.size()) + 1;
    if ((ring + tail) / platform.background_period > max_materialised_slots / std::max<Tick>(slot_count, 1)) {
        throw DomainError("hyperperiod " + std::to_string(hs.hyperperiod) + " is too large to materialise");
    }

    PartialSchedule sched(platform, HorizonQueues(platform, ring, tail));

    for (auto const & dag : dags) {
        DagModel const model(dag, platform);
        std::optional<Tick> last_end;
        auto const windows = cycle_windows(dag, hs.hyperperiod, options.repetition_factor);
        for (std::size_t k = 0; k < windows.size(); ++k) {
            CycleWindow window = windows[k];
            if (last_end && *last_end > window.start) {
                window.start = *last_end;
                window.end = window.start + dag.period;
            }
            auto const instance = make_cycle_instance(model, static_cast<std::int64_t>(k));
            InstanceRecord record{dag.dag_id, instance.cycle, window, false};

            auto const base = schedule_base(model, instance, sched, window);
            if (!base.scheduled) {
                hs.failures.push_back(
                    Failure{dag.dag_id, instance.cycle, "task '" + base.failed_task + "' does not fit its cycle window"});
                hs.instances.push_back(record);
                continue;
            }
            if (options.enhance) enhance_quality(model, instance, sched, window);

            Tick finish = window.start;
            for (auto const & task : instance.tasks) {
                auto const & entry = *sched.find(task.instance_id);
                finish = std::max(finish, entry.finish);
                hs.entries.push_back(entry);
            }
            last_end = finish;
            record.scheduled = true;
            hs.instances.push_back(record);
        }
        if (last_end) hs.per_dag_last_end[dag.dag_id] = *last_end;
    }
    return hs;
}

} // namespace qosheft
