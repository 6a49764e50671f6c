#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qosheft/heft_core.hpp"
#include "qosheft/platform.hpp"
#include "qosheft/workload.hpp"

namespace qosheft {

/// Least common multiple of all periods. Throws DomainError on empty input,
/// non-positive periods or overflow.
Tick hyperperiod(std::span<Tick const> periods);

/// Nominal cycle windows [phase + k*period, phase + (k+1)*period) with
/// phase = release mod period, for k < repetition_factor * hyper / period.
std::vector<CycleWindow> cycle_windows(DagSpec const & dag, Tick hyper, int repetition_factor);

struct InstanceRecord {
    std::string dag_id;
    std::int64_t cycle = 0;
    CycleWindow window;
    bool scheduled = false;

    friend bool operator==(InstanceRecord const &, InstanceRecord const &) = default;
};

struct Failure {
    std::string dag_id;
    std::int64_t cycle = 0;
    std::string reason;

    friend bool operator==(Failure const &, Failure const &) = default;
};

struct HyperSchedule {
    Tick hyperperiod = 0;
    int repetition_factor = 1;
    std::vector<ScheduleEntry> entries;
    std::map<std::string, Tick> per_dag_last_end;
    std::vector<Failure> failures;
    std::vector<InstanceRecord> instances;

    /// Length after which the schedule repeats.
    Tick horizon() const { return hyperperiod * repetition_factor; }

    friend bool operator==(HyperSchedule const &, HyperSchedule const &) = default;
};

struct PeriodicOptions {
    int repetition_factor = 1;
    bool enhance = true;
};

/// Schedules every cycle instance of every DAG (input order) into the idle
/// time of the platform: base placement, then quality enhancement. Failed
/// instances are rolled back and recorded, never thrown.
HyperSchedule schedule_periodic(std::span<DagSpec const> dags, Platform const & platform,
                                PeriodicOptions const & options = {});

} // namespace qosheft
