#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qosheft/platform.hpp"
#include "qosheft/rational.hpp"

namespace qosheft {

struct QualityVersion {
    int level = 1;
    Rational reward;

    friend bool operator==(QualityVersion const &, QualityVersion const &) = default;
};

struct TaskSpec {
    std::string task_id;
    /// vm_id -> execution time per level (index 0 is level 1).
    std::map<std::string, std::vector<Tick>> exec_time;
    std::vector<QualityVersion> versions;

    int max_level() const { return static_cast<int>(versions.size()); }

    /// Throws LookupError when the (vm, level) pair has no entry.
    Tick exec(std::string_view vm_id, int level) const;

    /// Throws LookupError for levels outside [1, max_level()].
    Rational const & reward(int level) const;

    friend bool operator==(TaskSpec const &, TaskSpec const &) = default;
};

struct EdgeSpec {
    std::string src;
    std::string dst;
    Rational data_volume;

    friend bool operator==(EdgeSpec const &, EdgeSpec const &) = default;
};

struct DagSpec {
    std::string dag_id;
    std::vector<TaskSpec> tasks;
    std::vector<EdgeSpec> edges;
    Tick period = 1;
    Tick release = 0;

    std::size_t task_index(std::string_view task_id) const;

    friend bool operator==(DagSpec const &, DagSpec const &) = default;
};

struct TaskInstance {
    std::string instance_id;
    std::string source_task;
    std::string dag_id;
    std::int64_t cycle_index = 0;

    friend bool operator==(TaskInstance const &, TaskInstance const &) = default;
};

struct Violation {
    std::string location;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Structural and numeric checks of a DAG against the platform it will run on.
/// Violations are returned, never thrown.
ValidationReport validate_dag(DagSpec const & dag, Platform const & platform);

/// Arc in an index-based adjacency list.
struct Arc {
    std::size_t task = 0;
    std::size_t edge = 0;
};

/// Index-based adjacency of a DagSpec. Throws LookupError on dangling edges.
class DagGraph {
public:
    explicit DagGraph(DagSpec const & dag);

    std::size_t size() const { return successors_.size(); }
    std::span<Arc const> successors(std::size_t task) const { return successors_[task]; }
    std::span<Arc const> predecessors(std::size_t task) const { return predecessors_[task]; }

    /// Kahn order with ties broken by task index. Throws StructuralError on cycles.
    std::vector<std::size_t> topological_order() const;

private:
    std::vector<std::vector<Arc>> successors_;
    std::vector<std::vector<Arc>> predecessors_;
};

struct CycleCopy {
    DagSpec dag;
    /// original task_id -> instance
    std::map<std::string, TaskInstance> instances;
};

/// Copy of `dag` whose task ids are `<id_namespace><task_id>.<cycle_index>`.
CycleCopy instantiate_cycle(DagSpec const & dag, std::int64_t cycle_index, std::string_view id_namespace);

/// ceil(data_volume / bandwidth) ticks between distinct VMs, 0 when co-located.
Tick comm_delay(EdgeSpec const & edge, std::size_t src_vm, std::size_t dst_vm, Platform const & platform);
Tick comm_delay(EdgeSpec const & edge, std::string_view src_vm, std::string_view dst_vm, Platform const & platform);

/// Mean communication cost of an edge, used by upward ranks.
Rational mean_comm_cost(EdgeSpec const & edge, Platform const & platform);

} // namespace qosheft
