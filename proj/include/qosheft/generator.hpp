#pragma once

#include <cstddef>
#include <cstdint>

#include "qosheft/platform.hpp"
#include "qosheft/rational.hpp"
#include "qosheft/workload.hpp"

namespace qosheft {

/// Derives an independent 64-bit seed for one purpose (`stream`) and item
/// (`index`) from a parent seed, so draws for one purpose never shift another.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

/// Seed streams used by the generators.
namespace seed_stream {
inline constexpr std::uint64_t structure = 1;
inline constexpr std::uint64_t exec_times = 2;
inline constexpr std::uint64_t volumes = 3;
inline constexpr std::uint64_t background = 4;
inline constexpr std::uint64_t bandwidth = 5;
inline constexpr std::uint64_t sweep_instance = 6;
} // namespace seed_stream

struct GenParams {
    std::size_t n_tasks = 10;
    double edge_density = 0.3;
    int n_levels = 2;
    Rational period_slack = Rational(3, 2);
    Tick exec_min = 1;
    Tick exec_max = 10;
    /// VMs V1..Vn that get execution-time tables.
    std::size_t n_vms = 4;
    /// Machine count used by the work/machines term of the period lower bound.
    std::size_t period_reference_vms = 4;
    /// Period is rounded up to a multiple of this.
    Tick period_quantum = 1;
    Tick volume_min = 1;
    Tick volume_max = 10;
    std::uint64_t seed = 0;
};

/// Layered random DAG "G<seed>": edges only go to later layers, every
/// non-entry task has a parent in the layer directly above it.
DagSpec generate_dag(GenParams const & params);

/// Rescales data volumes so that the mean transfer time of an edge over
/// distinct VM pairs is `ccr` times the mean base execution time over
/// (task, VM) pairs.
DagSpec apply_ccr(DagSpec dag, Rational const & ccr, Platform const & platform);

struct OccupancyParams {
    std::size_t n_vms = 4;
    Rational occupancy_fraction = 0;
    Tick background_period = 20;
    /// Minimum length of every idle slot of the background pattern.
    Tick min_slot = 2;
    std::uint64_t seed = 0;
    Tick bandwidth_min = 1;
    Tick bandwidth_max = 10;
    int max_busy_intervals = 4;
};

/// Random background workload per VM plus a random symmetric bandwidth matrix.
/// Throws GenerationError when the occupancy cannot be realised.
Platform generate_preoccupation(OccupancyParams const & params);

} // namespace qosheft
