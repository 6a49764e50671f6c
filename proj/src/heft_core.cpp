#include "qosheft/heft_core.hpp"

#include <algorithm>
#include <sstream>

#include "qosheft/errors.hpp"

namespace qosheft {

HorizonQueues::HorizonQueues(Platform const & platform, Tick ring, Tick tail) : ring_(ring), tail_(tail) {
    if (ring <= 0 || tail < 0 || tail > ring) throw DomainError("invalid scheduling horizon");
    if (ring % platform.background_period != 0) {
        throw DomainError("horizon must be a multiple of the background period");
    }
    queues_.reserve(platform.queues.size());
    for (auto const & q : platform.queues) {
        queues_.push_back(tile_queue(q, platform.background_period, ring + tail));
    }
}

template <class Op>
void HorizonQueues::for_each_image(Tick start, Tick duration, Op && op) const {
    Tick const end = start + duration;
    if (start < 0 || end > ring_ + tail_) {
        std::ostringstream os;
        os << "[" << start << ", " << end << ") lies outside the horizon [0, " << ring_ + tail_ << ")";
        throw AllocationError(os.str());
    }
    op(start, duration);
    if (tail_ == 0) return;
    // Mirror images: [0, tail) <-> [ring, ring + tail).
    for (Tick offset : {-ring_, ring_}) {
        Tick const a = std::max<Tick>(start + offset, 0);
        Tick const b = std::min(end + offset, ring_ + tail_);
        if (b > a) op(a, b - a);
    }
}

void HorizonQueues::allocate(std::size_t vm, Tick start, Tick duration) {
    // Work on a copy so a refused interval leaves the queue untouched.
    auto q = queues_.at(vm);
    for_each_image(start, duration, [&q](Tick s, Tick d) { q = allocate_interval(std::move(q), s, d); });
    queues_[vm] = std::move(q);
}

void HorizonQueues::release(std::size_t vm, Tick start, Tick duration) {
    auto q = queues_.at(vm);
    for_each_image(start, duration, [&q](Tick s, Tick d) { q = release_interval(std::move(q), s, d); });
    queues_[vm] = std::move(q);
}

std::optional<GapPlacement> HorizonQueues::find_gap(
    std::size_t vm, Tick earliest, Tick duration, Tick latest_finish) const {
    return find_feasible_gap(queues_.at(vm), earliest, duration, std::min(latest_finish, end()));
}

PartialSchedule::PartialSchedule(Platform const & platform, HorizonQueues queues) : queues_(std::move(queues)) {
    if (queues_.vm_count() != platform.size()) throw DomainError("queue count does not match the platform");
    for (auto const & vm : platform.vms) vm_ids_.push_back(vm.vm_id);
}

ScheduleEntry const * PartialSchedule::find(std::string const & instance_id) const {
    auto it = entries_.find(instance_id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::size_t PartialSchedule::vm_index(std::string const & vm_id) const {
    for (std::size_t i = 0; i < vm_ids_.size(); ++i) {
        if (vm_ids_[i] == vm_id) return i;
    }
    throw LookupError("unknown VM '" + vm_id + "'");
}

void PartialSchedule::insert(ScheduleEntry entry) {
    if (entries_.contains(entry.instance.instance_id)) {
        throw IntegrityError("instance '" + entry.instance.instance_id + "' is already scheduled");
    }
    if (entry.finish <= entry.start) throw DomainError("entry must have positive length");
    queues_.allocate(vm_index(entry.vm_id), entry.start, entry.finish - entry.start);
    auto id = entry.instance.instance_id;
    entries_.emplace(std::move(id), std::move(entry));
}

ScheduleEntry PartialSchedule::erase(std::string const & instance_id) {
    auto it = entries_.find(instance_id);
    if (it == entries_.end()) throw LookupError("instance '" + instance_id + "' is not scheduled");
    ScheduleEntry entry = std::move(it->second);
    entries_.erase(it);
    queues_.release(vm_index(entry.vm_id), entry.start, entry.finish - entry.start);
    return entry;
}

DagModel::DagModel(DagSpec dag, Platform const & platform)
    : dag_(std::move(dag)), vm_count_(platform.size()), graph_(dag_), ranks_(upward_ranks(dag_, platform)),
      priority_(priority_indices(ranks_)) {
    exec_.resize(dag_.tasks.size());
    for (std::size_t t = 0; t < dag_.tasks.size(); ++t) {
        auto const & task = dag_.tasks[t];
        exec_[t].resize(vm_count_);
        for (std::size_t v = 0; v < vm_count_; ++v) {
            for (int level = 1; level <= task.max_level(); ++level) {
                exec_[t][v].push_back(task.exec(platform.vms[v].vm_id, level));
            }
        }
    }
    delay_.resize(dag_.edges.size() * vm_count_ * vm_count_);
    for (std::size_t e = 0; e < dag_.edges.size(); ++e) {
        for (std::size_t a = 0; a < vm_count_; ++a) {
            for (std::size_t b = 0; b < vm_count_; ++b) {
                delay_[(e * vm_count_ + a) * vm_count_ + b] = comm_delay(dag_.edges[e], a, b, platform);
            }
        }
    }
}

Tick DagModel::exec(std::size_t task, std::size_t vm, int level) const {
    return exec_[task][vm].at(static_cast<std::size_t>(level - 1));
}

Tick DagModel::delay(std::size_t edge, std::size_t from_vm, std::size_t to_vm) const {
    return delay_[(edge * vm_count_ + from_vm) * vm_count_ + to_vm];
}

CycleInstance make_cycle_instance(DagModel const & model, std::int64_t cycle) {
    auto copy = instantiate_cycle(model.dag(), cycle, model.dag().dag_id + "/");
    CycleInstance instance;
    instance.cycle = cycle;
    instance.tasks.reserve(model.task_count());
    for (auto const & task : model.dag().tasks) instance.tasks.push_back(copy.instances.at(task.task_id));
    return instance;
}

namespace {

struct PlacedNeighbour {
    Tick start = 0;
    Tick finish = 0;
    std::size_t vm = 0;
    std::size_t edge = 0;
};

std::vector<PlacedNeighbour> placed_predecessors(DagModel const & model, CycleInstance const & instance,
                                                 std::size_t task, PartialSchedule const & sched) {
    std::vector<PlacedNeighbour> out;
    for (auto const & arc : model.graph().predecessors(task)) {
        auto const & id = instance.tasks[arc.task].instance_id;
        auto const * entry = sched.find(id);
        if (entry == nullptr) {
            throw PrecedenceError("predecessor '" + id + "' of '" + instance.tasks[task].instance_id +
                                  "' is not scheduled");
        }
        out.push_back(PlacedNeighbour{entry->start, entry->finish, sched.vm_index(entry->vm_id), arc.edge});
    }
    return out;
}

Tick ready_time(DagModel const & model, std::vector<PlacedNeighbour> const & preds, std::size_t vm, Tick floor) {
    Tick est = floor;
    for (auto const & p : preds) est = std::max(est, p.finish + model.delay(p.edge, p.vm, vm));
    return est;
}

} // namespace

Tick earliest_start_time(DagModel const & model, CycleInstance const & instance, std::size_t task, std::size_t vm,
                         PartialSchedule const & sched, CycleWindow window) {
    return ready_time(model, placed_predecessors(model, instance, task, sched), vm, window.start);
}

std::optional<Placement> place_task(DagModel const & model, CycleInstance const & instance, std::size_t task,
                                    PartialSchedule const & sched, CycleWindow window, int level) {
    auto const preds = placed_predecessors(model, instance, task, sched);
    std::optional<Placement> best;
    for (std::size_t vm = 0; vm < model.vm_count(); ++vm) {
        Tick const est = ready_time(model, preds, vm, window.start);
        Tick const duration = model.exec(task, vm, level);
        auto gap = sched.queues().find_gap(vm, est, duration, window.end);
        if (!gap) continue;
        Tick const finish = gap->start + duration;
        if (!best || finish < best->finish) best = Placement{vm, gap->start, finish};
    }
    return best;
}

BaseResult schedule_base(DagModel const & model, CycleInstance const & instance, PartialSchedule & sched,
                         CycleWindow window) {
    PartialSchedule work = sched;
    for (std::size_t task : model.priority()) {
        auto placement = place_task(model, instance, task, work, window, 1);
        if (!placement) return BaseResult{false, instance.tasks[task].source_task};
        work.insert(ScheduleEntry{instance.tasks[task], work.vm_id(placement->vm), 1, placement->start,
                                  placement->finish});
    }
    sched = std::move(work);
    return BaseResult{true, {}};
}

int enhance_quality(DagModel const & model, CycleInstance const & instance, PartialSchedule & sched,
                    CycleWindow window) {
    int steps = 0;
    for (std::size_t task : model.priority()) {
        auto const & id = instance.tasks[task].instance_id;
        auto const * found = sched.find(id);
        if (found == nullptr) throw IntegrityError("enhancement needs a complete base schedule; '" + id + "' is missing");
        ScheduleEntry current = *found;
        std::size_t const vm = sched.vm_index(current.vm_id);

        // Predecessors are never moved past this task's base start, so the
        // floor is the base start itself; the max keeps condition (c) explicit.
        Tick const floor = ready_time(model, placed_predecessors(model, instance, task, sched), vm, current.start);
        Tick ceiling = window.end;
        for (auto const & arc : model.graph().successors(task)) {
            auto const * succ = sched.find(instance.tasks[arc.task].instance_id);
            if (succ == nullptr) continue;
            ceiling = std::min(ceiling, succ->start - model.delay(arc.edge, vm, sched.vm_index(succ->vm_id)));
        }

        while (current.level < model.max_level(task)) {
            int const next = current.level + 1;
            Tick const duration = model.exec(task, vm, next);
            sched.erase(id);
            auto gap = sched.queues().find_gap(vm, floor, duration, ceiling);
            if (!gap) {
                sched.insert(current);
                break;
            }
            current.level = next;
            current.start = gap->start;
            current.finish = gap->start + duration;
            sched.insert(current);
            ++steps;
        }
    }
    return steps;
}

} // namespace qosheft
