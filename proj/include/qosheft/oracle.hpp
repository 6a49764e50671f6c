#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qosheft/heft_core.hpp"
#include "qosheft/periodic.hpp"
#include "qosheft/platform.hpp"
#include "qosheft/workload.hpp"

namespace qosheft {

enum class ViolationKind { overlap, precedence, window, preoccupation, version, periodicity, integrity };

std::string_view to_string(ViolationKind kind);

struct ScheduleViolation {
    ViolationKind kind;
    std::string location;
    std::string detail;
};

using ViolationReport = std::vector<ScheduleViolation>;

/// Checks a hyper-schedule with plain interval arithmetic on the raw platform
/// data, independently of the event-queue code. The schedule is tiled twice
/// over its horizon so wrap-around conflicts surface as periodicity violations.
ViolationReport verify_schedule(HyperSchedule const & hs, std::span<DagSpec const> dags, Platform const & platform);

struct OptimalResult {
    bool feasible = false;
    Rational reward;
    std::vector<ScheduleEntry> witness;
};

/// Maximum total reward of one DAG instance inside `window`.
///
/// Enumerates task sequences and (VM, level) choices, placing each task at its
/// earliest feasible integer start. Any feasible schedule, replayed in order of
/// start times, left-shifts into one of these, so the search is exact.
/// Refuses (SearchLimitError) beyond 6 tasks, 3 VMs or a 32-tick window.
OptimalResult brute_force_optimal(DagSpec const & dag, Platform const & platform, CycleWindow window);

/// Same optimum by literal enumeration of every (VM, level, integer start) per
/// task in topological order. Refuses beyond 4 tasks, 2 VMs or a 16-tick window.
OptimalResult exhaustive_start_search(DagSpec const & dag, Platform const & platform, CycleWindow window);

} // namespace qosheft
