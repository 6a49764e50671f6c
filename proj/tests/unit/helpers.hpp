#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "qosheft/platform.hpp"
#include "qosheft/workload.hpp"

namespace testing {

using namespace qosheft;

inline EventQueue queue(std::initializer_list<std::pair<Tick, Tick>> slots, std::string vm = "V1") {
    EventQueue q{std::move(vm), {}};
    for (auto [s, d] : slots) q.slots.push_back({s, d});
    return q;
}

/// `n` VMs, uniform bandwidth, per-VM idle slots (all idle when empty).
inline Platform platform(std::size_t n, Tick background_period, Rational bandwidth = 1,
                         std::vector<std::vector<std::pair<Tick, Tick>>> idle = {}) {
    Platform p;
    p.background_period = background_period;
    for (std::size_t i = 0; i < n; ++i) {
        std::string const id = "V" + std::to_string(i + 1);
        p.vms.push_back({id, "H" + std::to_string(i + 1)});
        EventQueue q{id, {}};
        if (i < idle.size()) {
            for (auto [s, d] : idle[i]) q.slots.push_back({s, d});
        } else {
            q.slots.push_back({0, background_period});
        }
        p.queues.push_back(q);
    }
    p.bandwidth.assign(n, std::vector<Rational>(n, bandwidth));
    for (std::size_t i = 0; i < n; ++i) p.bandwidth[i][i] = 0;
    return p;
}

/// Task with rewards equal to the level and the given per-level times on every listed VM.
inline TaskSpec task(std::string id, std::vector<Tick> times, std::vector<std::string> vms = {"V1", "V2"}) {
    TaskSpec t;
    t.task_id = std::move(id);
    for (std::size_t l = 0; l < times.size(); ++l) t.versions.push_back({static_cast<int>(l + 1), Rational(l + 1)});
    for (auto const & vm : vms) t.exec_time[vm] = times;
    return t;
}

/// Four-task diamond T1 -> {T2, T3} -> T4, times 1/2, 2/3, 2/3, 1/2 on V1 and V2.
inline DagSpec diamond(Tick period = 12, Rational volume = 1) {
    DagSpec d;
    d.dag_id = "D1";
    d.period = period;
    d.tasks = {task("T1", {1, 2}), task("T2", {2, 3}), task("T3", {2, 3}), task("T4", {1, 2})};
    d.edges = {{"T1", "T2", volume}, {"T1", "T3", volume}, {"T2", "T4", volume}, {"T3", "T4", volume}};
    return d;
}

} // namespace testing
