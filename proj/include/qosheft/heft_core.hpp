#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qosheft/platform.hpp"
#include "qosheft/ranking.hpp"
#include "qosheft/workload.hpp"

namespace qosheft {

struct CycleWindow {
    Tick start = 0;
    Tick end = 0;

    friend bool operator==(CycleWindow const &, CycleWindow const &) = default;
};

struct ScheduleEntry {
    TaskInstance instance;
    std::string vm_id;
    int level = 1;
    Tick start = 0;
    Tick finish = 0;

    friend bool operator==(ScheduleEntry const &, ScheduleEntry const &) = default;
};

/// Per-VM idle time over the materialised scheduling horizon [0, ring + tail).
///
/// The schedule repeats every `ring` ticks. Windows of phase-shifted DAGs may
/// run into [ring, ring + tail); that tail is kept as an exact mirror of
/// [0, tail), so every allocation is applied to all of its images.
class HorizonQueues {
public:
    HorizonQueues() = default;

    /// Tiles the platform's background idle pattern over the horizon.
    HorizonQueues(Platform const & platform, Tick ring, Tick tail = 0);

    std::size_t vm_count() const { return queues_.size(); }
    EventQueue const & queue(std::size_t vm) const { return queues_.at(vm); }
    Tick ring() const { return ring_; }
    Tick end() const { return ring_ + tail_; }

    void allocate(std::size_t vm, Tick start, Tick duration);
    void release(std::size_t vm, Tick start, Tick duration);

    std::optional<GapPlacement> find_gap(std::size_t vm, Tick earliest, Tick duration, Tick latest_finish) const;

    friend bool operator==(HorizonQueues const &, HorizonQueues const &) = default;

private:
    template <class Op>
    void for_each_image(Tick start, Tick duration, Op && op) const;

    std::vector<EventQueue> queues_;
    Tick ring_ = 0;
    Tick tail_ = 0;
};

/// Entries placed so far plus the idle time left around them.
class PartialSchedule {
public:
    PartialSchedule() = default;
    PartialSchedule(Platform const & platform, HorizonQueues queues);

    std::map<std::string, ScheduleEntry> const & entries() const { return entries_; }
    HorizonQueues const & queues() const { return queues_; }

    ScheduleEntry const * find(std::string const & instance_id) const;

    /// Carves the entry's interval out of idle time. Throws AllocationError
    /// if the interval is not idle, IntegrityError on duplicate ids.
    void insert(ScheduleEntry entry);

    /// Removes an entry and returns its interval to the idle pool.
    ScheduleEntry erase(std::string const & instance_id);

    std::size_t vm_index(std::string const & vm_id) const;
    std::string const & vm_id(std::size_t vm) const { return vm_ids_.at(vm); }

    friend bool operator==(PartialSchedule const &, PartialSchedule const &) = default;

private:
    std::vector<std::string> vm_ids_;
    std::map<std::string, ScheduleEntry> entries_;
    HorizonQueues queues_;
};

/// Index-based view of one DAG on one platform: adjacency, delay table,
/// execution times and rank order. Shared by every cycle copy of the DAG.
class DagModel {
public:
    DagModel(DagSpec dag, Platform const & platform);

    DagSpec const & dag() const { return dag_; }
    std::size_t task_count() const { return dag_.tasks.size(); }
    std::size_t vm_count() const { return vm_count_; }
    DagGraph const & graph() const { return graph_; }
    RankTable const & ranks() const { return ranks_; }
    std::vector<std::size_t> const & priority() const { return priority_; }

    Tick exec(std::size_t task, std::size_t vm, int level) const;
    Tick delay(std::size_t edge, std::size_t from_vm, std::size_t to_vm) const;
    int max_level(std::size_t task) const { return dag_.tasks[task].max_level(); }

private:
    DagSpec dag_;
    std::size_t vm_count_ = 0;
    DagGraph graph_;
    RankTable ranks_;
    std::vector<std::size_t> priority_;
    std::vector<std::vector<std::vector<Tick>>> exec_;  // [task][vm][level-1]
    std::vector<Tick> delay_;                           // [edge][from][to]
};

/// Instance ids of one cycle copy, by task index of the model.
struct CycleInstance {
    std::int64_t cycle = 0;
    std::vector<TaskInstance> tasks;
};

/// Builds the instance list through instantiate_cycle with namespace "<dag_id>/".
CycleInstance make_cycle_instance(DagModel const & model, std::int64_t cycle);

/// max(window.start, finish(p) + delay(p -> task) over predecessors p).
/// Throws PrecedenceError if a predecessor has no entry yet.
Tick earliest_start_time(DagModel const & model, CycleInstance const & instance, std::size_t task,
                         std::size_t vm, PartialSchedule const & sched, CycleWindow window);

struct Placement {
    std::size_t vm = 0;
    Tick start = 0;
    Tick finish = 0;

    friend bool operator==(Placement const &, Placement const &) = default;
};

/// VM and start minimising the finish time at `level`; ties to the lower VM index.
std::optional<Placement> place_task(DagModel const & model, CycleInstance const & instance, std::size_t task,
                                    PartialSchedule const & sched, CycleWindow window, int level);

struct BaseResult {
    bool scheduled = false;
    std::string failed_task;  // source task id of the first unplaceable task
};

/// Places every task at level 1 in priority order. All-or-nothing: on failure
/// `sched` is left exactly as it was.
BaseResult schedule_base(DagModel const & model, CycleInstance const & instance, PartialSchedule & sched,
                         CycleWindow window);

/// Raises task levels one step at a time on the task's own VM, keeping every
/// precedence, window and idle-time constraint. Returns the number of level steps taken.
int enhance_quality(DagModel const & model, CycleInstance const & instance, PartialSchedule & sched,
                    CycleWindow window);

} // namespace qosheft
