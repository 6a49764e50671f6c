#include "qosheft/platform.hpp"

#include <algorithm>
#include <sstream>

#include "qosheft/errors.hpp"

namespace qosheft {

namespace {

std::string describe(IdleSlot const & slot) {
    std::ostringstream os;
    os << "[" << slot.start << ", " << slot.end() << ")";
    return os.str();
}

// First slot whose end is strictly after t.
auto first_ending_after(std::vector<IdleSlot> const & slots, Tick t) {
    return std::partition_point(slots.begin(), slots.end(), [t](IdleSlot const & s) { return s.end() <= t; });
}

} // namespace

Tick EventQueue::total_idle() const {
    Tick total = 0;
    for (auto const & slot : slots) total += slot.duration;
    return total;
}

std::size_t Platform::vm_index(std::string_view vm_id) const {
    for (std::size_t i = 0; i < vms.size(); ++i) {
        if (vms[i].vm_id == vm_id) return i;
    }
    throw LookupError("unknown VM '" + std::string(vm_id) + "'");
}

Rational Platform::mean_bandwidth() const {
    std::size_t n = vms.size();
    if (n < 2) return Rational(1);
    Rational sum = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) sum += bandwidth.at(a).at(b);
    }
    return sum / Rational(n * (n - 1) / 2);
}

Platform Platform::prefix(std::size_t n) const {
    if (n > vms.size()) throw DomainError("platform has fewer VMs than requested prefix");
    Platform out;
    out.background_period = background_period;
    out.vms.assign(vms.begin(), vms.begin() + static_cast<std::ptrdiff_t>(n));
    out.queues.assign(queues.begin(), queues.begin() + static_cast<std::ptrdiff_t>(n));
    out.bandwidth.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        out.bandwidth[a].assign(bandwidth.at(a).begin(), bandwidth.at(a).begin() + static_cast<std::ptrdiff_t>(n));
    }
    return out;
}

std::vector<std::string> check_platform(Platform const & platform) {
    std::vector<std::string> problems;
    std::size_t const n = platform.vms.size();
    if (platform.background_period <= 0) problems.push_back("background_period must be positive");
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (platform.vms[a].vm_id == platform.vms[b].vm_id) {
                problems.push_back("duplicate VM id '" + platform.vms[a].vm_id + "'");
            }
        }
    }
    if (platform.bandwidth.size() != n) {
        problems.push_back("bandwidth matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    } else {
        for (std::size_t a = 0; a < n; ++a) {
            if (platform.bandwidth[a].size() != n) {
                problems.push_back("bandwidth row " + std::to_string(a) + " has wrong length");
                continue;
            }
        }
        if (problems.empty()) {
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    if (a == b) continue;
                    if (platform.bandwidth[a][b] <= 0) {
                        problems.push_back("bandwidth " + platform.vms[a].vm_id + "-" + platform.vms[b].vm_id +
                                           " must be positive");
                    }
                    if (platform.bandwidth[a][b] != platform.bandwidth[b][a]) {
                        problems.push_back("bandwidth " + platform.vms[a].vm_id + "-" + platform.vms[b].vm_id +
                                           " is not symmetric");
                    }
                }
            }
        }
    }
    if (platform.queues.size() != n) {
        problems.push_back("expected one event queue per VM");
        return problems;
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto const & q = platform.queues[v];
        if (q.vm_id != platform.vms[v].vm_id) {
            problems.push_back("event queue " + std::to_string(v) + " belongs to '" + q.vm_id + "'");
        }
        for (std::size_t i = 0; i < q.slots.size(); ++i) {
            auto const & s = q.slots[i];
            if (s.duration <= 0) problems.push_back(q.vm_id + ": slot " + describe(s) + " is empty");
            if (s.start < 0 || s.end() > platform.background_period) {
                problems.push_back(q.vm_id + ": slot " + describe(s) + " outside [0, background_period)");
            }
            if (i > 0 && q.slots[i - 1].end() >= s.start) {
                problems.push_back(q.vm_id + ": slots " + describe(q.slots[i - 1]) + " and " + describe(s) +
                                   " are unsorted, overlapping or not merged");
            }
        }
    }
    return problems;
}

EventQueue normalize_event_queue(EventQueue queue) {
    auto & slots = queue.slots;
    for (auto const & s : slots) {
        if (s.duration < 0) throw StructuralError(queue.vm_id + ": negative slot duration " + describe(s));
    }
    std::erase_if(slots, [](IdleSlot const & s) { return s.duration == 0; });
    std::sort(slots.begin(), slots.end(), [](IdleSlot const & a, IdleSlot const & b) { return a.start < b.start; });

    std::vector<IdleSlot> merged;
    merged.reserve(slots.size());
    for (auto const & s : slots) {
        if (!merged.empty() && merged.back().end() > s.start) {
            throw StructuralError(queue.vm_id + ": overlapping idle slots " + describe(merged.back()) + " and " +
                                  describe(s));
        }
        if (!merged.empty() && merged.back().end() == s.start) {
            merged.back().duration += s.duration;
        } else {
            merged.push_back(s);
        }
    }
    slots = std::move(merged);
    return queue;
}

EventQueue allocate_interval(EventQueue queue, Tick start, Tick duration) {
    if (duration <= 0) throw DomainError("allocation duration must be positive");
    auto & slots = queue.slots;
    auto it = first_ending_after(slots, start);
    Tick const end = start + duration;
    if (it == slots.end() || it->start > start || it->end() < end) {
        std::ostringstream os;
        os << queue.vm_id << ": [" << start << ", " << end << ") is not inside one idle slot";
        throw AllocationError(os.str());
    }
    IdleSlot const slot = *it;
    IdleSlot const left{slot.start, start - slot.start};
    IdleSlot const right{end, slot.end() - end};

    it = slots.erase(it);
    if (right.duration > 0) it = slots.insert(it, right);
    if (left.duration > 0) slots.insert(it, left);
    return queue;
}

EventQueue release_interval(EventQueue queue, Tick start, Tick duration) {
    if (duration <= 0) throw DomainError("release duration must be positive");
    auto & slots = queue.slots;
    Tick const end = start + duration;
    auto it = first_ending_after(slots, start);
    if (it != slots.end() && it->start < end) {
        std::ostringstream os;
        os << queue.vm_id << ": released [" << start << ", " << end << ") overlaps idle slot " << describe(*it);
        throw DoubleFreeError(os.str());
    }
    slots.insert(it, IdleSlot{start, duration});
    return normalize_event_queue(std::move(queue));
}

std::optional<GapPlacement> find_feasible_gap(
    EventQueue const & queue, Tick earliest, Tick duration, Tick latest_finish) {
    if (duration <= 0) throw DomainError("gap search needs a positive duration");
    auto const & slots = queue.slots;
    // Slots ending at or before earliest + duration cannot hold the task.
    for (auto it = first_ending_after(slots, earliest); it != slots.end(); ++it) {
        Tick const start = std::max(earliest, it->start);
        if (start + duration > latest_finish) break;  // later slots start later still
        if (start + duration <= it->end()) {
            return GapPlacement{static_cast<std::size_t>(it - slots.begin()), start};
        }
    }
    return std::nullopt;
}

EventQueue tile_queue(EventQueue const & queue, Tick period, Tick horizon) {
    if (period <= 0) throw DomainError("tiling period must be positive");
    EventQueue out{queue.vm_id, {}};
    for (Tick offset = 0; offset < horizon; offset += period) {
        for (auto const & s : queue.slots) {
            Tick const a = std::max<Tick>(s.start, 0) + offset;
            Tick const b = std::min(s.end(), period) + offset;
            Tick const clipped_end = std::min(b, horizon);
            if (clipped_end > a) out.slots.push_back(IdleSlot{a, clipped_end - a});
        }
    }
    return normalize_event_queue(std::move(out));
}

} // namespace qosheft
