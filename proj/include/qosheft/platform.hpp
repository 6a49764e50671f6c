#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qosheft/rational.hpp"

namespace qosheft {

struct IdleSlot {
    Tick start = 0;
    Tick duration = 0;

    Tick end() const { return start + duration; }

    friend bool operator==(IdleSlot const &, IdleSlot const &) = default;
};

/// Free time of one VM: idle slots sorted by start, pairwise disjoint and
/// never adjacent once normalized.
struct EventQueue {
    std::string vm_id;
    std::vector<IdleSlot> slots;

    Tick total_idle() const;

    friend bool operator==(EventQueue const &, EventQueue const &) = default;
};

struct VmDescriptor {
    std::string vm_id;
    std::string host_id;

    friend bool operator==(VmDescriptor const &, VmDescriptor const &) = default;
};

/// VMs, their pairwise link bandwidths and the free complement of the
/// pre-occupied background workload, which repeats every background_period.
struct Platform {
    std::vector<VmDescriptor> vms;
    std::vector<std::vector<Rational>> bandwidth;
    std::vector<EventQueue> queues;
    Tick background_period = 1;

    std::size_t size() const { return vms.size(); }

    /// Index of a VM in `vms`; throws LookupError for unknown ids.
    std::size_t vm_index(std::string_view vm_id) const;

    /// Mean bandwidth over all distinct VM pairs; 1 on single-VM platforms.
    Rational mean_bandwidth() const;

    /// Platform restricted to its first `n` VMs.
    Platform prefix(std::size_t n) const;

    friend bool operator==(Platform const &, Platform const &) = default;
};

/// Human-readable list of broken Platform invariants; empty when valid.
std::vector<std::string> check_platform(Platform const & platform);

EventQueue normalize_event_queue(EventQueue queue);

/// Carves [start, start + duration) out of the idle slot that contains it.
EventQueue allocate_interval(EventQueue queue, Tick start, Tick duration);

/// Returns [start, start + duration) to the idle pool; inverse of allocate_interval.
EventQueue release_interval(EventQueue queue, Tick start, Tick duration);

struct GapPlacement {
    std::size_t slot_index = 0;
    Tick start = 0;

    friend bool operator==(GapPlacement const &, GapPlacement const &) = default;
};

/// Leftmost start >= earliest such that [start, start + duration) fits in one
/// idle slot and finishes no later than latest_finish.
std::optional<GapPlacement> find_feasible_gap(
    EventQueue const & queue, Tick earliest, Tick duration, Tick latest_finish);

/// Repeats the slots of `queue` that lie in [0, period) over [0, horizon) and normalizes.
EventQueue tile_queue(EventQueue const & queue, Tick period, Tick horizon);

} // namespace qosheft
