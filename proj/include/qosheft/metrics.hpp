#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qosheft/periodic.hpp"
#include "qosheft/platform.hpp"
#include "qosheft/rational.hpp"
#include "qosheft/workload.hpp"

namespace qosheft {

struct DagReward {
    std::string dag_id;
    Rational r_act;
    Rational r_max;
    Rational nr_percent;
    std::int64_t nullified_instances = 0;
};

struct RewardReport {
    Rational r_act;
    Rational r_max;
    Rational nr_percent;
    std::vector<DagReward> per_dag;
    std::int64_t nullified_instances = 0;
};

/// NR = 100 * r_act / r_max, where r_max counts every instance at its top
/// level and failed instances earn nothing. NR is 100 when r_max is 0.
RewardReport normalized_reward(HyperSchedule const & hs, std::span<DagSpec const> dags);

struct VmStats {
    std::string vm_id;
    Tick busy = 0;         // occupied by scheduled entries
    Tick idle = 0;         // still free
    Tick preoccupied = 0;  // background workload
};

struct InstanceStats {
    std::string dag_id;
    std::int64_t cycle = 0;
    Tick makespan = 0;
};

struct ScheduleStats {
    std::vector<VmStats> vms;
    std::vector<InstanceStats> instances;
};

/// Tick accounting over one horizon of the schedule.
ScheduleStats schedule_stats(HyperSchedule const & hs, Platform const & platform);

} // namespace qosheft
