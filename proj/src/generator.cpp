#include "qosheft/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "qosheft/errors.hpp"

namespace qosheft {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Tick uniform_tick(std::mt19937_64 & rng, Tick lo, Tick hi) { return std::uniform_int_distribution<Tick>(lo, hi)(rng); }

std::string vm_name(std::size_t j) { return "V" + std::to_string(j + 1); }

void check_params(GenParams const & p) {
    if (p.n_tasks < 1) throw DomainError("n_tasks must be at least 1");
    if (!(p.edge_density >= 0.0 && p.edge_density <= 1.0)) throw DomainError("edge_density must lie in [0, 1]");
    if (p.n_levels < 1) throw DomainError("n_levels must be at least 1");
    if (p.period_slack < 1) throw DomainError("period_slack must be at least 1");
    if (p.exec_min < 1 || p.exec_max < p.exec_min) throw DomainError("exec range must satisfy 1 <= min <= max");
    if (p.n_vms < 1) throw DomainError("n_vms must be at least 1");
    if (p.period_reference_vms < 1) throw DomainError("period_reference_vms must be at least 1");
    if (p.period_quantum < 1) throw DomainError("period_quantum must be at least 1");
    if (p.volume_min < 0 || p.volume_max < p.volume_min) throw DomainError("volume range must satisfy 0 <= min <= max");
}

// Random composition of `total` into `parts` positive integers.
std::vector<Tick> composition(Tick total, Tick parts, std::mt19937_64 & rng) {
    std::vector<Tick> points(static_cast<std::size_t>(total - 1));
    std::iota(points.begin(), points.end(), Tick{1});
    std::shuffle(points.begin(), points.end(), rng);
    points.resize(static_cast<std::size_t>(parts - 1));
    std::sort(points.begin(), points.end());
    std::vector<Tick> out;
    Tick prev = 0;
    for (Tick c : points) {
        out.push_back(c - prev);
        prev = c;
    }
    out.push_back(total - prev);
    return out;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) + index);
}

DagSpec generate_dag(GenParams const & p) {
    check_params(p);
    std::size_t const n = p.n_tasks;

    std::mt19937_64 rng(derive_seed(p.seed, seed_stream::structure));
    auto const width = static_cast<std::size_t>(std::max<long>(1, std::lround(std::sqrt(static_cast<double>(n)))));
    std::size_t const n_layers = std::uniform_int_distribution<std::size_t>(
        std::max<std::size_t>(1, width - 1), std::min(n, width + 1))(rng);
    std::vector<std::size_t> layer_size(n_layers, 1);
    for (std::size_t i = n_layers; i < n; ++i) {
        ++layer_size[std::uniform_int_distribution<std::size_t>(0, n_layers - 1)(rng)];
    }
    std::vector<std::size_t> first(n_layers + 1, 0);
    std::partial_sum(layer_size.begin(), layer_size.end(), first.begin() + 1);

    std::set<std::pair<std::size_t, std::size_t>> arcs;
    std::bernoulli_distribution extra(p.edge_density);
    for (std::size_t b = 1; b < n_layers; ++b) {
        for (std::size_t v = first[b]; v < first[b + 1]; ++v) {
            arcs.emplace(std::uniform_int_distribution<std::size_t>(first[b - 1], first[b] - 1)(rng), v);
            for (std::size_t u = 0; u < first[b]; ++u) {
                if (extra(rng)) arcs.emplace(u, v);
            }
        }
    }

    DagSpec dag;
    dag.dag_id = "G" + std::to_string(p.seed);
    dag.tasks.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dag.tasks[i].task_id = "T" + std::to_string(i + 1);
        for (int level = 1; level <= p.n_levels; ++level) dag.tasks[i].versions.push_back({level, Rational(level)});
    }
    // One stream per VM: the tables of V1..Vk do not depend on n_vms.
    for (std::size_t j = 0; j < p.n_vms; ++j) {
        std::mt19937_64 vm_rng(derive_seed(p.seed, seed_stream::exec_times, j));
        for (auto & task : dag.tasks) {
            std::vector<Tick> times(static_cast<std::size_t>(p.n_levels));
            for (auto & t : times) t = uniform_tick(vm_rng, p.exec_min, p.exec_max);
            std::sort(times.begin(), times.end());
            for (std::size_t l = 1; l < times.size(); ++l) times[l] = std::max(times[l], times[l - 1] + 1);
            task.exec_time[vm_name(j)] = std::move(times);
        }
    }
    std::mt19937_64 volume_rng(derive_seed(p.seed, seed_stream::volumes));
    for (auto const & [u, v] : arcs) {
        dag.edges.push_back(EdgeSpec{dag.tasks[u].task_id, dag.tasks[v].task_id,
                                     Rational(uniform_tick(volume_rng, p.volume_min, p.volume_max))});
    }

    // Period: slack times a lower bound on the base-version makespan, from
    // mean times over the reference VMs (critical path vs. work / machines).
    std::size_t const ref = std::min(p.period_reference_vms, p.n_vms);
    std::vector<Rational> mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < ref; ++j) sum += dag.tasks[i].exec_time[vm_name(j)].front();
        mean[i] = sum / ref;
    }
    std::vector<Rational> path(mean);
    for (auto const & [u, v] : arcs) path[v] = std::max(path[v], path[u] + mean[v]);  // arcs sorted by source
    Rational const critical = *std::max_element(path.begin(), path.end());
    Rational const work = std::accumulate(mean.begin(), mean.end(), Rational(0)) / ref;
    Tick period = ceil_ticks(p.period_slack * std::max(critical, work));
    period = (period + p.period_quantum - 1) / p.period_quantum * p.period_quantum;
    dag.period = period;
    dag.release = 0;
    return dag;
}

DagSpec apply_ccr(DagSpec dag, Rational const & ccr, Platform const & platform) {
    if (ccr < 0) throw DomainError("ccr must be non-negative");
    if (dag.edges.empty()) return dag;
    if (ccr == 0) {
        for (auto & e : dag.edges) e.data_volume = 0;
        return dag;
    }
    if (dag.tasks.empty() || platform.size() == 0) throw DomainError("apply_ccr needs tasks and VMs");
    Rational exec_sum = 0;
    for (auto const & task : dag.tasks) {
        for (auto const & vm : platform.vms) exec_sum += task.exec(vm.vm_id, 1);
    }
    Rational const mean_exec = exec_sum / (dag.tasks.size() * platform.size());
    // Mean transfer time of a unit volume over distinct VM pairs, so that the
    // mean edge delay (not volume / mean bandwidth) matches ccr * mean_exec.
    Rational unit_time = 1;
    if (platform.size() > 1) {
        Rational sum = 0;
        for (std::size_t a = 0; a < platform.size(); ++a) {
            for (std::size_t b = 0; b < platform.size(); ++b) {
                if (a != b) sum += 1 / platform.bandwidth[a][b];
            }
        }
        unit_time = sum / (platform.size() * (platform.size() - 1));
    }
    Rational const target = ccr * mean_exec / unit_time;
    Rational volume_sum = 0;
    for (auto const & e : dag.edges) volume_sum += e.data_volume;
    if (volume_sum == 0) {
        for (auto & e : dag.edges) e.data_volume = target;
    } else {
        Rational const factor = target * dag.edges.size() / volume_sum;
        for (auto & e : dag.edges) e.data_volume *= factor;
    }
    return dag;
}

Platform generate_preoccupation(OccupancyParams const & p) {
    if (p.n_vms < 1) throw DomainError("n_vms must be at least 1");
    if (p.occupancy_fraction < 0 || p.occupancy_fraction >= 1) throw DomainError("occupancy must lie in [0, 1)");
    if (p.background_period < 1) throw DomainError("background_period must be positive");
    if (p.min_slot < 1) throw DomainError("min_slot must be positive");
    if (p.bandwidth_min < 1 || p.bandwidth_max < p.bandwidth_min) throw DomainError("invalid bandwidth range");
    if (p.max_busy_intervals < 1) throw DomainError("max_busy_intervals must be positive");

    Tick const bp = p.background_period;
    Rational const exact = p.occupancy_fraction * bp;
    Tick const busy = ceil_ticks(exact - Rational(1, 2));  // nearest, halves down
    Rational const error = exact > busy ? exact - busy : busy - exact;
    if (error * 50 > bp) {
        throw GenerationError("occupancy " + to_string(p.occupancy_fraction) +
                              " cannot be realised within 2% on background period " + std::to_string(bp));
    }
    Tick const idle = bp - busy;
    if (busy > 0 && idle < p.min_slot) {
        throw GenerationError("idle time " + std::to_string(idle) + " is shorter than min_slot " +
                              std::to_string(p.min_slot));
    }

    Platform platform;
    platform.background_period = bp;
    for (std::size_t j = 0; j < p.n_vms; ++j) {
        platform.vms.push_back(VmDescriptor{vm_name(j), "H" + std::to_string(j + 1)});
        EventQueue queue{vm_name(j), {}};
        if (busy == 0) {
            queue.slots.push_back({0, bp});
        } else {
            std::mt19937_64 rng(derive_seed(p.seed, seed_stream::background, j));
            Tick const k_max = std::min({Tick{p.max_busy_intervals}, busy, idle / p.min_slot});
            Tick const k = uniform_tick(rng, 1, k_max);
            auto const busy_parts = composition(busy, k, rng);
            auto idle_parts = composition(idle - k * (p.min_slot - 1), k, rng);
            for (auto & part : idle_parts) part += p.min_slot - 1;
            Tick t = uniform_tick(rng, 0, bp - 1);
            for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
                // Idle slot [t, t + idle_parts[i]) modulo bp, split at the wrap point.
                Tick const s = t % bp;
                Tick const e = s + idle_parts[i];
                if (e <= bp) {
                    queue.slots.push_back({s, idle_parts[i]});
                } else {
                    queue.slots.push_back({s, bp - s});
                    queue.slots.push_back({0, e - bp});
                }
                t += idle_parts[i] + busy_parts[i];
            }
            queue = normalize_event_queue(std::move(queue));
        }
        platform.queues.push_back(std::move(queue));
    }
    platform.bandwidth.assign(p.n_vms, std::vector<Rational>(p.n_vms, Rational(0)));
    for (std::size_t a = 0; a < p.n_vms; ++a) {
        for (std::size_t b = a + 1; b < p.n_vms; ++b) {
            std::mt19937_64 rng(derive_seed(p.seed, seed_stream::bandwidth, (std::uint64_t{a} << 32) | b));
            Rational const bw(uniform_tick(rng, p.bandwidth_min, p.bandwidth_max));
            platform.bandwidth[a][b] = bw;
            platform.bandwidth[b][a] = bw;
        }
    }
    return platform;
}

} // namespace qosheft
