// Acceptance checks. `acceptance` runs all of them, `acceptance N` only
// criterion N. Prints one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qosheft/generator.hpp"
#include "qosheft/metrics.hpp"
#include "qosheft/oracle.hpp"
#include "qosheft/periodic.hpp"
#include "qosheft/platform.hpp"
#include "qosheft/sweep.hpp"

using namespace qosheft;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

// One DAG on a generated platform, as in the sweeps.
struct Problem {
    std::vector<DagSpec> dags;
    Platform platform;
};

Problem make_problem(std::size_t n_tasks, std::uint64_t seed, Rational const & occupancy, std::size_t n_vms,
                     Rational const & ccr, std::size_t generated_vms = 0) {
    SweepConfig const defaults;
    std::size_t const width = std::max(n_vms, generated_vms);
    GenParams g = defaults.dag_template;
    g.n_tasks = n_tasks;
    g.n_vms = width;
    g.seed = seed;
    OccupancyParams o = defaults.platform_template;
    o.n_vms = width;
    o.occupancy_fraction = occupancy;
    o.seed = seed;
    Problem p;
    p.platform = generate_preoccupation(o).prefix(n_vms);
    p.dags.push_back(apply_ccr(generate_dag(g), ccr, p.platform));
    return p;
}

Rational nr_of(Problem const & p, bool enhance) {
    auto const hs = schedule_periodic(p.dags, p.platform, PeriodicOptions{1, enhance});
    return normalized_reward(hs, p.dags).nr_percent;
}

double mean(std::vector<double> const & xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

std::vector<double> ranks_of(std::vector<double> const & xs) {
    std::vector<std::size_t> idx(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> r(xs.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
        i = j + 1;
    }
    return r;
}

double spearman(std::vector<double> const & x, std::vector<double> const & y) {
    auto const rx = ranks_of(x);
    auto const ry = ranks_of(y);
    double const mx = mean(rx), my = mean(ry);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::string fmt(double x, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string join(std::vector<double> const & xs) {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : " ") + fmt(x);
    return s;
}

// Seeds used by the statistical trend checks.
constexpr std::size_t trend_seeds = 100;
constexpr std::uint64_t trend_base_seed = 20240601;

double mean_nr(std::size_t n_tasks, Rational const & occupancy, std::size_t n_vms, Rational const & ccr,
               std::size_t generated_vms = 0) {
    std::vector<double> values;
    for (std::size_t i = 0; i < trend_seeds; ++i) {
        auto const seed = instance_seed(trend_base_seed, n_tasks, i);
        values.push_back(to_double(nr_of(make_problem(n_tasks, seed, occupancy, n_vms, ccr, generated_vms), true)));
    }
    return mean(values);
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
    auto const t0 = Clock::now();
    std::vector<Tick> const a{8, 12}, b{3, 4};
    Tick const ha = hyperperiod(a), hb = hyperperiod(b);
    double const ms = seconds_since(t0) * 1000;
    return {ha == 24 && hb == 12 && ms < 1.0,
            "lcm(8,12)=" + std::to_string(ha) + " lcm(3,4)=" + std::to_string(hb) + " in " + fmt(ms, 4) + " ms"};
}

Outcome criterion_2() {
    auto const t0 = Clock::now();
    std::mt19937_64 rng(2);
    std::size_t violations = 0;
    auto check_shape = [](EventQueue const & q) {
        for (std::size_t i = 0; i < q.slots.size(); ++i) {
            if (q.slots[i].duration <= 0) return false;
            if (i > 0 && q.slots[i - 1].end() >= q.slots[i].start) return false;
        }
        return true;
    };
    for (int run = 0; run < 10'000; ++run) {
        // Random normalized queue inside [0, 200).
        EventQueue initial{"V", {}};
        Tick t = std::uniform_int_distribution<Tick>(0, 5)(rng);
        while (t < 200) {
            Tick const len = std::uniform_int_distribution<Tick>(1, 20)(rng);
            initial.slots.push_back({t, std::min(len, 200 - t)});
            t += len + std::uniform_int_distribution<Tick>(1, 10)(rng);
        }
        initial = normalize_event_queue(initial);
        if (normalize_event_queue(initial) != initial) ++violations;
        Tick const total = initial.total_idle();

        EventQueue q = initial;
        std::vector<IdleSlot> taken;
        Tick allocated = 0;
        int const steps = std::uniform_int_distribution<int>(1, 30)(rng);
        for (int s = 0; s < steps; ++s) {
            bool const do_release = !taken.empty() && std::bernoulli_distribution(0.4)(rng);
            if (do_release || q.slots.empty()) {
                if (taken.empty()) break;
                std::size_t const k = std::uniform_int_distribution<std::size_t>(0, taken.size() - 1)(rng);
                q = release_interval(q, taken[k].start, taken[k].duration);
                allocated -= taken[k].duration;
                taken.erase(taken.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                auto const & slot = q.slots[std::uniform_int_distribution<std::size_t>(0, q.slots.size() - 1)(rng)];
                Tick const a = std::uniform_int_distribution<Tick>(slot.start, slot.end() - 1)(rng);
                Tick const d = std::uniform_int_distribution<Tick>(1, slot.end() - a)(rng);
                // find_feasible_gap from a must report this exact start.
                auto gap = find_feasible_gap(q, a, d, a + d);
                if (!gap || gap->start != a) ++violations;
                q = allocate_interval(q, a, d);
                taken.push_back({a, d});
                allocated += d;
            }
            if (q.total_idle() + allocated != total || !check_shape(q) || normalize_event_queue(q) != q) ++violations;
        }
        std::shuffle(taken.begin(), taken.end(), rng);
        for (auto const & s : taken) q = release_interval(q, s.start, s.duration);
        if (q != initial) ++violations;
    }
    double const secs = seconds_since(t0);
    return {violations == 0 && secs < 5.0,
            "10000 sequences, " + std::to_string(violations) + " violations, " + fmt(secs) + " s"};
}

// Shared corpus of criteria 3 and 4.
template <class Visit>
void feasibility_corpus(Visit && visit) {
    for (std::size_t n : {10, 20, 30}) {
        for (std::uint64_t i = 0; i < 30; ++i) {
            for (auto const & occ : {Rational(1, 10), Rational(3, 10), Rational(6, 10)}) {
                visit(make_problem(n, instance_seed(3, n, i), occ, 4, Rational(1, 2)));
            }
        }
    }
}

Outcome criterion_3() {
    auto const t0 = Clock::now();
    std::size_t cases = 0, bad = 0, failed_instances = 0;
    std::string first;
    feasibility_corpus([&](Problem const & p) {
        ++cases;
        auto const hs = schedule_periodic(p.dags, p.platform);
        failed_instances += hs.failures.size();
        auto const report = verify_schedule(hs, p.dags, p.platform);
        if (!report.empty()) {
            ++bad;
            if (first.empty()) first = std::string(to_string(report[0].kind)) + " " + report[0].location;
        }
    });
    double const secs = seconds_since(t0);
    return {bad == 0 && secs < 60.0, std::to_string(cases) + " schedules, " + std::to_string(bad) +
                                         " with violations" + (first.empty() ? "" : " (" + first + ")") + ", " +
                                         std::to_string(failed_instances) + " failed instances, " + fmt(secs) + " s"};
}

Outcome criterion_4() {
    std::size_t cases = 0, bad = 0, strictly_better = 0;
    feasibility_corpus([&](Problem const & p) {
        ++cases;
        auto const base = schedule_periodic(p.dags, p.platform, PeriodicOptions{1, false});
        auto const enhanced = schedule_periodic(p.dags, p.platform, PeriodicOptions{1, true});
        auto key_set = [](HyperSchedule const & hs) {
            std::set<std::string> keys;
            for (auto const & e : hs.entries) keys.insert(e.instance.instance_id);
            return keys;
        };
        auto const nr_base = normalized_reward(base, p.dags).nr_percent;
        auto const nr_enh = normalized_reward(enhanced, p.dags).nr_percent;
        if (nr_enh < nr_base || key_set(base) != key_set(enhanced) || base.failures != enhanced.failures ||
            !verify_schedule(enhanced, p.dags, p.platform).empty()) {
            ++bad;
        }
        if (nr_enh > nr_base) ++strictly_better;
    });
    return {bad == 0, std::to_string(cases) + " schedules, " + std::to_string(bad) + " violations, " +
                          std::to_string(strictly_better) + " strictly improved"};
}

Outcome criterion_5() {
    auto const t0 = Clock::now();
    std::mt19937_64 rng(5);
    std::size_t bad = 0, scheduled = 0, cross_checked = 0;
    Tick const periods[] = {8, 12, 16, 24};
    for (int i = 0; i < 100; ++i) {
        Tick const bp = periods[i % 4];
        GenParams g;
        g.n_tasks = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        g.n_vms = 2;
        g.exec_min = 1;
        g.exec_max = 4;
        g.seed = rng();
        OccupancyParams o;
        o.n_vms = 2;
        o.background_period = bp;
        o.min_slot = 1;
        o.occupancy_fraction = Rational(std::uniform_int_distribution<Tick>(0, bp / 2)(rng), bp);
        o.seed = rng();
        Platform const platform = generate_preoccupation(o);
        DagSpec dag = apply_ccr(generate_dag(g), Rational(1, 2), platform);
        dag.period = bp;  // one instance per hyperperiod, window [0, bp)
        std::vector<DagSpec> const dags{dag};

        auto const hs = schedule_periodic(dags, platform);
        auto const optimum = brute_force_optimal(dag, platform, CycleWindow{0, bp});
        if (hs.failures.empty()) {
            ++scheduled;
            Rational reward = 0;
            for (auto const & e : hs.entries) reward += dag.tasks[dag.task_index(e.instance.source_task)].reward(e.level);
            if (!optimum.feasible || reward > optimum.reward) ++bad;
        }
        if (bp <= 16) {
            ++cross_checked;
            auto const literal = exhaustive_start_search(dag, platform, CycleWindow{0, bp});
            if (literal.feasible != optimum.feasible || literal.reward != optimum.reward) ++bad;
        }
    }
    double const secs = seconds_since(t0);
    return {bad == 0 && secs < 30.0, "100 micro-instances, " + std::to_string(scheduled) + " scheduled, " +
                                         std::to_string(cross_checked) + " cross-checked, " + std::to_string(bad) +
                                         " violations, " + fmt(secs) + " s"};
}

Outcome criterion_6() {
    std::vector<double> grid, nr;
    for (int k = 1; k <= 6; ++k) {
        grid.push_back(k / 10.0);
        nr.push_back(mean_nr(10, Rational(k, 10), 4, Rational(1, 2)));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < nr.size(); ++i) monotone = monotone && nr[i] <= nr[i - 1];
    double const rho = spearman(grid, nr);
    return {monotone && rho <= -0.8, "mean NR over occupancy 10..60%: " + join(nr) + "; rho " + fmt(rho, 3)};
}

Outcome criterion_7() {
    bool pass = true;
    std::string detail;
    for (std::size_t n : {10, 30}) {
        std::vector<double> nr;
        for (std::size_t procs : {2, 4, 6, 8, 10}) nr.push_back(mean_nr(n, Rational(3, 10), procs, Rational(1, 2), 10));
        bool monotone = true;
        for (std::size_t i = 1; i < nr.size(); ++i) monotone = monotone && nr[i] >= nr[i - 1];
        bool const plateau = nr[4] - nr[3] <= nr[1] - nr[0];
        pass = pass && monotone && plateau;
        detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + ": " + join(nr);
    }
    return {pass, "mean NR over 2..10 VMs, " + detail};
}

Outcome criterion_8() {
    bool pass = true;
    std::string detail;
    for (std::size_t n : {10, 30, 50}) {
        double const low = mean_nr(n, Rational(3, 10), 4, Rational(1, 4));
        double const high = mean_nr(n, Rational(3, 10), 4, Rational(2));
        pass = pass && high <= low;
        detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + ": " + fmt(low) + " -> " +
                  fmt(high);
    }
    return {pass, "mean NR at CCR 0.25 -> 2.0, " + detail};
}

Outcome criterion_9() {
    auto const t0 = Clock::now();
    auto run = [](std::size_t workers) {
        SweepConfig c = full_sweep_preset();
        c.dag_sizes = {10, 20};
        c.dags_per_size = 10;
        c.workers = workers;
        c.record_timing = false;
        auto const rows = run_sweep(c);
        return rows_csv(rows) + "\n" + aggregates_csv(aggregate_rows(rows));
    };
    auto const a = run(1);
    auto const b = run(1);
    auto const c = run(4);
    double const secs = seconds_since(t0);
    bool const same = a == b && a == c;
    return {same && secs < 120.0, std::string(same ? "identical" : "different") + " CSVs over 3 runs (workers 1, 1, 4), " +
                                      std::to_string(a.size()) + " bytes, " + fmt(secs) + " s"};
}

// Background seed for the worked example: found by scanning seeds of a
// 2-VM, 25%-occupied platform on background period 8 for one where both
// instances schedule and enhancement helps; the oracle confirms the slack.
constexpr std::uint64_t worked_example_seed = 7;

DagSpec diamond() {
    DagSpec d;
    d.dag_id = "D1";
    d.period = 12;
    std::vector<std::pair<std::string, std::vector<Tick>>> const times{
        {"T1", {1, 2}}, {"T2", {2, 3}}, {"T3", {2, 3}}, {"T4", {1, 2}}};
    for (auto const & [id, t] : times) {
        TaskSpec task;
        task.task_id = id;
        task.versions = {{1, 1}, {2, 2}};
        task.exec_time = {{"V1", t}, {"V2", t}};
        d.tasks.push_back(task);
    }
    d.edges = {{"T1", "T2", 1}, {"T1", "T3", 1}, {"T2", "T4", 1}, {"T3", "T4", 1}};
    return d;
}

Platform worked_example_platform(std::uint64_t seed) {
    OccupancyParams o;
    o.n_vms = 2;
    o.background_period = 8;
    o.occupancy_fraction = Rational(1, 4);
    o.min_slot = 1;
    o.seed = seed;
    return generate_preoccupation(o);
}

Outcome criterion_10() {
    std::vector<DagSpec> const dags{diamond()};
    Platform const platform = worked_example_platform(worked_example_seed);
    auto const base = schedule_periodic(dags, platform, PeriodicOptions{1, false});
    auto const enhanced = schedule_periodic(dags, platform, PeriodicOptions{1, true});
    auto const nr_base = normalized_reward(base, dags).nr_percent;
    auto const nr_enh = normalized_reward(enhanced, dags).nr_percent;

    bool oracle_ok = true;
    Rational oracle_total = 0;
    for (auto const & rec : enhanced.instances) {
        auto const opt = brute_force_optimal(dags[0], platform, rec.window);
        Rational got = 0;
        for (auto const & e : enhanced.entries) {
            if (e.instance.cycle_index == rec.cycle) got += dags[0].tasks[dags[0].task_index(e.instance.source_task)].reward(e.level);
        }
        oracle_ok = oracle_ok && opt.feasible && got <= opt.reward && opt.reward > 4;
        oracle_total += opt.reward;
    }
    bool const pass = base.hyperperiod == 24 && base.instances.size() == 2 && base.failures.empty() &&
                      enhanced.failures.empty() && nr_enh > nr_base && oracle_ok &&
                      verify_schedule(enhanced, dags, platform).empty();
    return {pass, "seed " + std::to_string(worked_example_seed) + ", hyperperiod " + std::to_string(base.hyperperiod) +
                      ", NR " + format_fixed(nr_base, 2) + "% -> " + format_fixed(nr_enh, 2) +
                      "%, oracle optimum " + to_string(oracle_total) + " of 16"};
}

} // namespace

int main(int argc, char ** argv) {
    std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria{
        {"hyperperiod exactness", criterion_1},
        {"event-queue algebra", criterion_2},
        {"feasibility suite", criterion_3},
        {"enhancement monotonicity", criterion_4},
        {"oracle bound", criterion_5},
        {"occupancy trend", criterion_6},
        {"processor trend", criterion_7},
        {"CCR trend", criterion_8},
        {"determinism", criterion_9},
        {"worked example", criterion_10},
    };
    std::size_t only = 0;
    if (argc > 1) only = static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10));
    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && only != i + 1) continue;
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (std::exception const & e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        all_pass = all_pass && outcome.pass;
        std::printf("%s %2zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
