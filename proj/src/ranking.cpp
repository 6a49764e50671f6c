#include "qosheft/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "qosheft/errors.hpp"

namespace qosheft {

Rational const & RankTable::at(std::string_view task_id) const {
    for (std::size_t i = 0; i < task_ids.size(); ++i) {
        if (task_ids[i] == task_id) return ranks[i];
    }
    throw LookupError("no rank for task '" + std::string(task_id) + "'");
}

RankTable upward_ranks(DagSpec const & dag, Platform const & platform) {
    DagGraph const graph(dag);
    auto const order = graph.topological_order();
    if (platform.size() == 0) throw DomainError("ranking needs at least one VM");

    Rational const mean_bw = platform.mean_bandwidth();
    bool const single_vm = platform.size() < 2;

    RankTable table;
    table.task_ids.reserve(dag.tasks.size());
    for (auto const & task : dag.tasks) table.task_ids.push_back(task.task_id);
    table.ranks.assign(dag.tasks.size(), Rational(0));

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto const & task = dag.tasks[*it];
        Rational mean_exec = 0;
        for (auto const & vm : platform.vms) mean_exec += task.exec(vm.vm_id, 1);
        mean_exec /= Rational(platform.size());

        Rational tail = 0;
        for (auto const & arc : graph.successors(*it)) {
            Rational comm = single_vm ? Rational(0) : dag.edges[arc.edge].data_volume / mean_bw;
            tail = std::max(tail, comm + table.ranks[arc.task]);
        }
        table.ranks[*it] = mean_exec + tail;
    }
    return table;
}

std::vector<std::size_t> priority_indices(RankTable const & ranks) {
    std::vector<std::size_t> order(ranks.ranks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&ranks](std::size_t a, std::size_t b) {
        if (ranks.ranks[a] != ranks.ranks[b]) return ranks.ranks[a] > ranks.ranks[b];
        return ranks.task_ids[a] < ranks.task_ids[b];
    });
    return order;
}

std::vector<std::string> priority_order(RankTable const & ranks) {
    std::vector<std::string> out;
    for (std::size_t i : priority_indices(ranks)) out.push_back(ranks.task_ids[i]);
    return out;
}

} // namespace qosheft
