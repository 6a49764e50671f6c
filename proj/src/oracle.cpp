#include "qosheft/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "qosheft/errors.hpp"

// Everything here works from the raw DagSpec and Platform fields. It shares
// no code with the event queues, the delay helpers or the scheduler.

namespace qosheft {

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::precedence: return "precedence";
    case ViolationKind::window: return "window";
    case ViolationKind::preoccupation: return "preoccupation";
    case ViolationKind::version: return "version";
    case ViolationKind::periodicity: return "periodicity";
    case ViolationKind::integrity: return "integrity";
    }
    return "unknown";
}

namespace {

struct Interval {
    Tick start;
    Tick end;
};

// ceil(volume / bandwidth) from numerator and denominator.
Tick transfer_ticks(Rational const & volume, Rational const & bandwidth) {
    Rational const q = volume / bandwidth;
    auto const num = numerator(q);
    auto const den = denominator(q);
    auto ticks = num / den;
    if (ticks * den < num) ++ticks;
    return ticks.convert_to<Tick>();
}

Tick delay_between(Platform const & platform, EdgeSpec const & edge, std::size_t from, std::size_t to) {
    if (from == to || edge.data_volume == 0) return 0;
    return transfer_ticks(edge.data_volume, platform.bandwidth[from][to]);
}

Tick floor_mod(Tick a, Tick m) {
    Tick r = a % m;
    return r < 0 ? r + m : r;
}

// Occupied intervals of one VM inside [0, period): the complement of its idle slots.
std::vector<Interval> busy_pattern(EventQueue const & queue, Tick period) {
    std::vector<Interval> idle;
    for (auto const & s : queue.slots) {
        Tick const a = std::max<Tick>(s.start, 0);
        Tick const b = std::min(s.start + s.duration, period);
        if (b > a) idle.push_back({a, b});
    }
    std::sort(idle.begin(), idle.end(), [](Interval x, Interval y) { return x.start < y.start; });
    std::vector<Interval> busy;
    Tick t = 0;
    for (auto const & i : idle) {
        if (i.start > t) busy.push_back({t, i.start});
        t = std::max(t, i.end);
    }
    if (t < period) busy.push_back({t, period});
    return busy;
}

bool hits_background(std::vector<Interval> const & busy, Tick period, Tick start, Tick end) {
    for (Tick base = start - floor_mod(start, period); base < end; base += period) {
        for (auto const & b : busy) {
            if (base + b.start < end && start < base + b.end) return true;
        }
    }
    return false;
}

std::string entry_name(ScheduleEntry const & e) {
    return e.instance.dag_id + ":" + e.instance.source_task + "#" + std::to_string(e.instance.cycle_index);
}

} // namespace

ViolationReport verify_schedule(HyperSchedule const & hs, std::span<DagSpec const> dags, Platform const & platform) {
    ViolationReport report;
    auto add = [&report](ViolationKind kind, std::string location, std::string detail) {
        report.push_back(ScheduleViolation{kind, std::move(location), std::move(detail)});
    };

    Tick const period_bg = platform.background_period;
    if (hs.hyperperiod <= 0 || hs.repetition_factor < 1) {
        add(ViolationKind::integrity, "schedule", "non-positive hyperperiod or repetition factor");
        return report;
    }
    Tick const horizon = hs.hyperperiod * hs.repetition_factor;
    if (period_bg <= 0 || hs.hyperperiod % period_bg != 0) {
        add(ViolationKind::integrity, "schedule", "background period does not divide the hyperperiod");
        return report;
    }

    std::map<std::string, DagSpec const *> dag_by_id;
    for (auto const & d : dags) {
        dag_by_id[d.dag_id] = &d;
        if (d.period <= 0 || hs.hyperperiod % d.period != 0) {
            add(ViolationKind::integrity, "dag " + d.dag_id, "period does not divide the hyperperiod");
            return report;
        }
    }
    std::set<std::pair<std::string, std::int64_t>> failed;
    for (auto const & f : hs.failures) failed.emplace(f.dag_id, f.cycle);
    for (auto const & rec : hs.instances) {
        if (rec.scheduled == failed.contains({rec.dag_id, rec.cycle})) {
            add(ViolationKind::integrity, "dag " + rec.dag_id + " cycle " + std::to_string(rec.cycle),
                "instance record disagrees with the failure list");
        }
    }

    std::vector<std::vector<Interval>> busy(platform.vms.size());
    for (std::size_t v = 0; v < platform.vms.size(); ++v) {
        for (auto const & q : platform.queues) {
            if (q.vm_id == platform.vms[v].vm_id) busy[v] = busy_pattern(q, period_bg);
        }
    }

    struct Placed {
        std::size_t entry;
        std::size_t vm;
    };
    // (dag, cycle, task index) -> placed entry
    std::map<std::tuple<std::string, std::int64_t, std::size_t>, Placed> placed;
    std::vector<std::vector<std::size_t>> on_vm(platform.vms.size());

    for (std::size_t i = 0; i < hs.entries.size(); ++i) {
        auto const & e = hs.entries[i];
        std::string const where = "entry " + entry_name(e);

        std::size_t vm = platform.vms.size();
        for (std::size_t v = 0; v < platform.vms.size(); ++v) {
            if (platform.vms[v].vm_id == e.vm_id) vm = v;
        }
        if (vm == platform.vms.size()) {
            add(ViolationKind::integrity, where, "unknown VM '" + e.vm_id + "'");
            continue;
        }
        auto d = dag_by_id.find(e.instance.dag_id);
        if (d == dag_by_id.end()) {
            add(ViolationKind::integrity, where, "unknown DAG");
            continue;
        }
        DagSpec const & dag = *d->second;
        std::size_t task = dag.tasks.size();
        for (std::size_t t = 0; t < dag.tasks.size(); ++t) {
            if (dag.tasks[t].task_id == e.instance.source_task) task = t;
        }
        if (task == dag.tasks.size()) {
            add(ViolationKind::integrity, where, "unknown task");
            continue;
        }
        std::int64_t const cycles = horizon / dag.period;
        if (e.instance.cycle_index < 0 || e.instance.cycle_index >= cycles) {
            add(ViolationKind::integrity, where, "cycle index outside [0, " + std::to_string(cycles) + ")");
            continue;
        }
        if (failed.contains({dag.dag_id, e.instance.cycle_index})) {
            add(ViolationKind::integrity, where, "entry belongs to an instance reported as failed");
        }
        if (e.finish <= e.start || e.start < 0) {
            add(ViolationKind::integrity, where, "empty or negative interval");
            continue;
        }
        if (!placed.emplace(std::tuple{dag.dag_id, e.instance.cycle_index, task}, Placed{i, vm}).second) {
            add(ViolationKind::integrity, where, "task instance scheduled twice");
            continue;
        }
        on_vm[vm].push_back(i);

        auto const & task_spec = dag.tasks[task];
        if (e.level < 1 || e.level > static_cast<int>(task_spec.versions.size())) {
            add(ViolationKind::version, where, "level " + std::to_string(e.level) + " does not exist");
        } else {
            auto times = task_spec.exec_time.find(e.vm_id);
            if (times == task_spec.exec_time.end() || times->second.size() < static_cast<std::size_t>(e.level)) {
                add(ViolationKind::version, where, "no execution time for this VM and level");
            } else if (Tick const want = times->second[static_cast<std::size_t>(e.level - 1)];
                       e.finish - e.start != want) {
                add(ViolationKind::version, where,
                    "duration " + std::to_string(e.finish - e.start) + " differs from exec time " +
                        std::to_string(want));
            }
        }

        Tick const phase = floor_mod(dag.release, dag.period);
        Tick const w_start = phase + e.instance.cycle_index * dag.period;
        Tick const w_end = w_start + dag.period;
        if (e.start < w_start || e.finish > w_end) {
            std::ostringstream os;
            os << "[" << e.start << ", " << e.finish << ") leaves window [" << w_start << ", " << w_end << ")";
            add(ViolationKind::window, where, os.str());
        }
        if (hits_background(busy[vm], period_bg, e.start, e.finish)) {
            add(ViolationKind::preoccupation, where, "runs during background workload");
        }
    }

    // Completeness of every instance that is not reported as failed.
    for (auto const & dag : dags) {
        for (std::int64_t c = 0; c < horizon / dag.period; ++c) {
            if (failed.contains({dag.dag_id, c})) continue;
            for (std::size_t t = 0; t < dag.tasks.size(); ++t) {
                if (!placed.contains({dag.dag_id, c, t})) {
                    add(ViolationKind::integrity, "dag " + dag.dag_id + " cycle " + std::to_string(c),
                        "task " + dag.tasks[t].task_id + " is missing");
                }
            }
        }
    }

    // Precedence with transfer delays.
    for (auto const & dag : dags) {
        std::map<std::string, std::size_t> index;
        for (std::size_t t = 0; t < dag.tasks.size(); ++t) index[dag.tasks[t].task_id] = t;
        for (std::int64_t c = 0; c < horizon / dag.period; ++c) {
            for (auto const & edge : dag.edges) {
                auto s = index.find(edge.src);
                auto d = index.find(edge.dst);
                if (s == index.end() || d == index.end()) continue;
                auto ps = placed.find({dag.dag_id, c, s->second});
                auto pd = placed.find({dag.dag_id, c, d->second});
                if (ps == placed.end() || pd == placed.end()) continue;
                auto const & a = hs.entries[ps->second.entry];
                auto const & b = hs.entries[pd->second.entry];
                Tick const ready = a.finish + delay_between(platform, edge, ps->second.vm, pd->second.vm);
                if (b.start < ready) {
                    add(ViolationKind::precedence, "entry " + entry_name(b),
                        "starts at " + std::to_string(b.start) + " before " + edge.src + " data is ready at " +
                            std::to_string(ready));
                }
            }
        }
    }

    // Overlaps on each VM, over two consecutive copies of the horizon.
    for (std::size_t v = 0; v < on_vm.size(); ++v) {
        struct Copy {
            Tick start, end;
            std::size_t entry;
            int shift;
        };
        std::vector<Copy> copies;
        for (std::size_t i : on_vm[v]) {
            for (int shift = 0; shift < 2; ++shift) {
                copies.push_back({hs.entries[i].start + shift * horizon, hs.entries[i].finish + shift * horizon, i,
                                  shift});
            }
        }
        std::sort(copies.begin(), copies.end(), [](Copy const & x, Copy const & y) {
            return std::tie(x.start, x.end, x.entry) < std::tie(y.start, y.end, y.entry);
        });
        for (std::size_t a = 0; a < copies.size(); ++a) {
            for (std::size_t b = a + 1; b < copies.size() && copies[b].start < copies[a].end; ++b) {
                auto const & x = copies[a];
                auto const & y = copies[b];
                if (x.shift == 1 && y.shift == 1) continue;  // repeats a shift-0 pair
                bool const wrap = x.shift != y.shift;
                add(wrap ? ViolationKind::periodicity : ViolationKind::overlap,
                    "vm " + platform.vms[v].vm_id,
                    entry_name(hs.entries[x.entry]) + " and " + entry_name(hs.entries[y.entry]) +
                        (wrap ? " collide across the horizon boundary" : " overlap"));
            }
        }
    }
    return report;
}

namespace {

// Flat tables of one DAG instance for the exhaustive searches.
struct SearchProblem {
    std::size_t n = 0;
    std::size_t vms = 0;
    Tick length = 0;
    std::vector<std::vector<std::vector<Tick>>> exec;  // [task][vm][level-1]
    std::vector<std::vector<Rational>> reward;         // [task][level-1]
    std::vector<Rational> best_reward;                 // [task]
    struct In {
        std::size_t from;
        std::vector<std::vector<Tick>> delay;  // [from vm][to vm]
    };
    std::vector<std::vector<In>> preds;
    std::vector<std::uint64_t> free;  // bit t: tick window.start + t is idle
};

SearchProblem build_problem(DagSpec const & dag, Platform const & platform, CycleWindow window,
                            std::size_t max_tasks, std::size_t max_vms, Tick max_window) {
    SearchProblem p;
    p.n = dag.tasks.size();
    p.vms = platform.vms.size();
    p.length = window.end - window.start;
    if (p.n > max_tasks || p.vms > max_vms || p.length > max_window) {
        std::ostringstream os;
        os << "search limited to " << max_tasks << " tasks, " << max_vms << " VMs and a " << max_window
           << "-tick window";
        throw SearchLimitError(os.str());
    }
    if (p.n == 0 || p.vms == 0 || p.length <= 0 || window.start < 0) throw DomainError("empty search problem");

    std::map<std::string, std::size_t> index;
    for (std::size_t t = 0; t < p.n; ++t) index[dag.tasks[t].task_id] = t;
    p.exec.resize(p.n);
    p.reward.resize(p.n);
    p.best_reward.resize(p.n);
    p.preds.resize(p.n);
    for (std::size_t t = 0; t < p.n; ++t) {
        auto const & task = dag.tasks[t];
        for (auto const & v : task.versions) p.reward[t].push_back(v.reward);
        if (p.reward[t].empty()) throw DomainError("task without versions");
        p.best_reward[t] = *std::max_element(p.reward[t].begin(), p.reward[t].end());
        for (auto const & vm : platform.vms) {
            auto it = task.exec_time.find(vm.vm_id);
            if (it == task.exec_time.end() || it->second.size() < task.versions.size()) {
                throw DomainError("missing execution time");
            }
            p.exec[t].push_back(it->second);
        }
    }
    for (auto const & edge : dag.edges) {
        SearchProblem::In in{index.at(edge.src), {}};
        in.delay.assign(p.vms, std::vector<Tick>(p.vms, 0));
        for (std::size_t a = 0; a < p.vms; ++a) {
            for (std::size_t b = 0; b < p.vms; ++b) in.delay[a][b] = delay_between(platform, edge, a, b);
        }
        p.preds[index.at(edge.dst)].push_back(std::move(in));
    }
    p.free.assign(p.vms, 0);
    for (std::size_t v = 0; v < p.vms; ++v) {
        auto const pattern = busy_pattern(platform.queues[v], platform.background_period);
        for (Tick t = 0; t < p.length; ++t) {
            if (!hits_background(pattern, platform.background_period, window.start + t, window.start + t + 1)) {
                p.free[v] |= std::uint64_t{1} << t;
            }
        }
    }
    return p;
}

struct Slot {
    std::size_t vm = 0;
    int level = 0;
    Tick start = 0;  // relative to the window
    Tick finish = 0;
};

std::uint64_t span_mask(Tick start, Tick duration) {
    std::uint64_t const ones = duration >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << duration) - 1;
    return ones << start;
}

Tick ready(SearchProblem const & p, std::vector<Slot> const & slots, std::size_t task, std::size_t vm) {
    Tick est = 0;
    for (auto const & in : p.preds[task]) est = std::max(est, slots[in.from].finish + in.delay[slots[in.from].vm][vm]);
    return est;
}

OptimalResult witness(DagSpec const & dag, Platform const & platform, CycleWindow window,
                      std::vector<Slot> const & slots, Rational const & reward) {
    OptimalResult r;
    r.feasible = true;
    r.reward = reward;
    for (std::size_t t = 0; t < slots.size(); ++t) {
        auto const & id = dag.tasks[t].task_id;
        r.witness.push_back(ScheduleEntry{TaskInstance{id, id, dag.dag_id, 0}, platform.vms[slots[t].vm].vm_id,
                                          slots[t].level, window.start + slots[t].start,
                                          window.start + slots[t].finish});
    }
    return r;
}

class SequenceSearch {
public:
    explicit SequenceSearch(SearchProblem const & p) : p_(p), slots_(p.n), used_(p.vms, 0), placed_(p.n, false) {
        for (auto const & r : p.best_reward) remaining_ += r;
    }

    void run() { extend(0, std::nullopt, 0); }

    bool found() const { return found_; }
    Rational const & best() const { return best_; }
    std::vector<Slot> const & best_slots() const { return best_slots_; }

private:
    void extend(std::size_t depth, std::optional<std::size_t> last, Rational const & gained) {
        if (depth == p_.n) {
            if (!found_ || gained > best_) {
                found_ = true;
                best_ = gained;
                best_slots_ = slots_;
            }
            return;
        }
        if (found_ && gained + remaining_ <= best_) return;
        for (std::size_t t = 0; t < p_.n; ++t) {
            if (placed_[t] || !ready_to_run(t)) continue;
            for (std::size_t v = 0; v < p_.vms; ++v) {
                // Two adjacent independent tasks on different VMs can be
                // swapped without changing either start; keep one order.
                if (last && t < *last && slots_[*last].vm != v && !depends_on(t, *last)) continue;
                Tick const est = ready(p_, slots_, t, v);
                for (int level = static_cast<int>(p_.reward[t].size()); level >= 1; --level) {
                    Tick const d = p_.exec[t][v][static_cast<std::size_t>(level - 1)];
                    auto start = earliest_fit(v, est, d);
                    if (!start) continue;
                    slots_[t] = Slot{v, level, *start, *start + d};
                    std::uint64_t const mask = span_mask(*start, d);
                    used_[v] |= mask;
                    placed_[t] = true;
                    remaining_ -= p_.best_reward[t];
                    extend(depth + 1, t, gained + p_.reward[t][static_cast<std::size_t>(level - 1)]);
                    remaining_ += p_.best_reward[t];
                    placed_[t] = false;
                    used_[v] &= ~mask;
                }
            }
        }
    }

    bool ready_to_run(std::size_t t) const {
        for (auto const & in : p_.preds[t]) {
            if (!placed_[in.from]) return false;
        }
        return true;
    }

    bool depends_on(std::size_t t, std::size_t u) const {
        for (auto const & in : p_.preds[t]) {
            if (in.from == u) return true;
        }
        return false;
    }

    std::optional<Tick> earliest_fit(std::size_t v, Tick est, Tick d) const {
        std::uint64_t const avail = p_.free[v] & ~used_[v];
        for (Tick s = est; s + d <= p_.length; ++s) {
            std::uint64_t const m = span_mask(s, d);
            if ((avail & m) == m) return s;
        }
        return std::nullopt;
    }

    SearchProblem const & p_;
    std::vector<Slot> slots_;
    std::vector<std::uint64_t> used_;
    std::vector<bool> placed_;
    Rational remaining_ = 0;
    bool found_ = false;
    Rational best_ = 0;
    std::vector<Slot> best_slots_;
};

std::vector<std::size_t> topological(SearchProblem const & p) {
    std::vector<std::size_t> indeg(p.n, 0), order;
    for (std::size_t t = 0; t < p.n; ++t) indeg[t] = p.preds[t].size();
    std::vector<bool> done(p.n, false);
    while (order.size() < p.n) {
        std::size_t pick = p.n;
        for (std::size_t t = 0; t < p.n && pick == p.n; ++t) {
            if (done[t]) continue;
            bool ok = true;
            for (auto const & in : p.preds[t]) ok = ok && done[in.from];
            if (ok) pick = t;
        }
        if (pick == p.n) throw StructuralError("cycle detected");
        done[pick] = true;
        order.push_back(pick);
    }
    return order;
}

class GridSearch {
public:
    explicit GridSearch(SearchProblem const & p) : p_(p), order_(topological(p)), slots_(p.n), used_(p.vms, 0) {}

    void run() { extend(0, 0); }

    bool found() const { return found_; }
    Rational const & best() const { return best_; }
    std::vector<Slot> const & best_slots() const { return best_slots_; }

private:
    void extend(std::size_t depth, Rational const & gained) {
        if (depth == p_.n) {
            if (!found_ || gained > best_) {
                found_ = true;
                best_ = gained;
                best_slots_ = slots_;
            }
            return;
        }
        std::size_t const t = order_[depth];
        for (std::size_t v = 0; v < p_.vms; ++v) {
            for (std::size_t l = 0; l < p_.reward[t].size(); ++l) {
                Tick const d = p_.exec[t][v][l];
                for (Tick s = ready(p_, slots_, t, v); s + d <= p_.length; ++s) {
                    std::uint64_t const m = span_mask(s, d);
                    if ((p_.free[v] & ~used_[v] & m) != m) continue;
                    slots_[t] = Slot{v, static_cast<int>(l + 1), s, s + d};
                    used_[v] |= m;
                    extend(depth + 1, gained + p_.reward[t][l]);
                    used_[v] &= ~m;
                }
            }
        }
    }

    SearchProblem const & p_;
    std::vector<std::size_t> order_;
    std::vector<Slot> slots_;
    std::vector<std::uint64_t> used_;
    bool found_ = false;
    Rational best_ = 0;
    std::vector<Slot> best_slots_;
};

} // namespace

OptimalResult brute_force_optimal(DagSpec const & dag, Platform const & platform, CycleWindow window) {
    auto const problem = build_problem(dag, platform, window, 6, 3, 32);
    SequenceSearch search(problem);
    search.run();
    if (!search.found()) return {};
    return witness(dag, platform, window, search.best_slots(), search.best());
}

OptimalResult exhaustive_start_search(DagSpec const & dag, Platform const & platform, CycleWindow window) {
    auto const problem = build_problem(dag, platform, window, 4, 2, 16);
    GridSearch search(problem);
    search.run();
    if (!search.found()) return {};
    return witness(dag, platform, window, search.best_slots(), search.best());
}

} // namespace qosheft
