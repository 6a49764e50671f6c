#include "qosheft/workload.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "qosheft/errors.hpp"

namespace qosheft {

Tick TaskSpec::exec(std::string_view vm_id, int level) const {
    auto it = exec_time.find(std::string(vm_id));
    if (it == exec_time.end() || level < 1 || static_cast<std::size_t>(level) > it->second.size()) {
        throw LookupError("task '" + task_id + "' has no execution time for " + std::string(vm_id) + " level " +
                          std::to_string(level));
    }
    return it->second[static_cast<std::size_t>(level - 1)];
}

Rational const & TaskSpec::reward(int level) const {
    if (level < 1 || level > max_level()) {
        throw LookupError("task '" + task_id + "' has no level " + std::to_string(level));
    }
    return versions[static_cast<std::size_t>(level - 1)].reward;
}

std::size_t DagSpec::task_index(std::string_view task_id) const {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].task_id == task_id) return i;
    }
    throw LookupError("DAG '" + dag_id + "' has no task '" + std::string(task_id) + "'");
}

DagGraph::DagGraph(DagSpec const & dag)
    : successors_(dag.tasks.size()), predecessors_(dag.tasks.size()) {
    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) index.emplace(dag.tasks[i].task_id, i);
    for (std::size_t e = 0; e < dag.edges.size(); ++e) {
        auto const & edge = dag.edges[e];
        auto src = index.find(edge.src);
        auto dst = index.find(edge.dst);
        if (src == index.end() || dst == index.end()) {
            throw LookupError("edge " + edge.src + "->" + edge.dst + " references an unknown task");
        }
        successors_[src->second].push_back(Arc{dst->second, e});
        predecessors_[dst->second].push_back(Arc{src->second, e});
    }
}

std::vector<std::size_t> DagGraph::topological_order() const {
    std::vector<std::size_t> in_degree(size());
    for (std::size_t i = 0; i < size(); ++i) in_degree[i] = predecessors_[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < size(); ++i) {
        if (in_degree[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> order;
    order.reserve(size());
    while (!ready.empty()) {
        std::size_t t = ready.top();
        ready.pop();
        order.push_back(t);
        for (auto const & arc : successors_[t]) {
            if (--in_degree[arc.task] == 0) ready.push(arc.task);
        }
    }
    if (order.size() != size()) throw StructuralError("cycle detected");
    return order;
}

ValidationReport validate_dag(DagSpec const & dag, Platform const & platform) {
    ValidationReport report;
    auto add = [&report](std::string location, std::string message) {
        report.push_back(Violation{std::move(location), std::move(message)});
    };
    std::string const where = "dag '" + dag.dag_id + "'";

    if (dag.period <= 0) add(where, "period must be positive");
    if (dag.release < 0) add(where, "release must be non-negative");

    std::set<std::string> ids;
    for (auto const & task : dag.tasks) {
        std::string const loc = where + " task '" + task.task_id + "'";
        if (!ids.insert(task.task_id).second) add(loc, "duplicate task id");
        if (task.versions.empty()) add(loc, "no quality versions");
        for (std::size_t l = 0; l < task.versions.size(); ++l) {
            if (task.versions[l].level != static_cast<int>(l) + 1) {
                add(loc, "version levels must be consecutive from 1");
                break;
            }
        }
        for (std::size_t l = 0; l < task.versions.size(); ++l) {
            if (task.versions[l].reward < 0) add(loc, "negative reward");
            if (l > 0 && task.versions[l].reward <= task.versions[l - 1].reward) {
                add(loc, "reward must strictly increase with level");
                break;
            }
        }
        for (auto const & vm : platform.vms) {
            auto it = task.exec_time.find(vm.vm_id);
            if (it == task.exec_time.end()) {
                add(loc, "missing exec time for VM " + vm.vm_id);
                continue;
            }
            auto const & times = it->second;
            if (times.size() != task.versions.size()) {
                add(loc, "exec time table for VM " + vm.vm_id + " does not match the version count");
            }
            for (std::size_t l = 0; l < times.size(); ++l) {
                if (times[l] <= 0) add(loc, "non-positive exec time on VM " + vm.vm_id);
                if (l > 0 && times[l] < times[l - 1]) {
                    add(loc, "non-monotone version times on VM " + vm.vm_id);
                    break;
                }
            }
        }
    }

    bool edges_ok = true;
    for (auto const & edge : dag.edges) {
        std::string const loc = where + " edge " + edge.src + "->" + edge.dst;
        if (!ids.contains(edge.src) || !ids.contains(edge.dst)) {
            add(loc, "unknown edge endpoint");
            edges_ok = false;
        }
        if (edge.src == edge.dst) add(loc, "self loop");
        if (edge.data_volume < 0) add(loc, "negative data volume");
    }

    if (dag.tasks.empty()) return report;
    if (edges_ok && ids.size() == dag.tasks.size()) {
        DagGraph graph(dag);
        try {
            graph.topological_order();
        } catch (StructuralError const &) {
            add(where, "cycle detected");
        }
        bool has_entry = false;
        bool has_exit = false;
        for (std::size_t i = 0; i < graph.size(); ++i) {
            has_entry = has_entry || graph.predecessors(i).empty();
            has_exit = has_exit || graph.successors(i).empty();
        }
        if (!has_entry) add(where, "no entry task");
        if (!has_exit) add(where, "no exit task");
    }
    return report;
}

CycleCopy instantiate_cycle(DagSpec const & dag, std::int64_t cycle_index, std::string_view id_namespace) {
    CycleCopy copy;
    copy.dag = dag;
    std::string const suffix = "." + std::to_string(cycle_index);
    for (auto & task : copy.dag.tasks) {
        std::string fresh = std::string(id_namespace) + task.task_id + suffix;
        copy.instances.emplace(task.task_id, TaskInstance{fresh, task.task_id, dag.dag_id, cycle_index});
        task.task_id = std::move(fresh);
    }
    for (auto & edge : copy.dag.edges) {
        edge.src = copy.instances.at(edge.src).instance_id;
        edge.dst = copy.instances.at(edge.dst).instance_id;
    }
    return copy;
}

Tick comm_delay(EdgeSpec const & edge, std::size_t src_vm, std::size_t dst_vm, Platform const & platform) {
    if (src_vm >= platform.size() || dst_vm >= platform.size()) throw LookupError("VM index out of range");
    if (src_vm == dst_vm) return 0;
    return ceil_ticks(edge.data_volume / platform.bandwidth[src_vm][dst_vm]);
}

Tick comm_delay(EdgeSpec const & edge, std::string_view src_vm, std::string_view dst_vm, Platform const & platform) {
    return comm_delay(edge, platform.vm_index(src_vm), platform.vm_index(dst_vm), platform);
}

Rational mean_comm_cost(EdgeSpec const & edge, Platform const & platform) {
    if (platform.size() < 2) return Rational(0);
    return edge.data_volume / platform.mean_bandwidth();
}

} // namespace qosheft
