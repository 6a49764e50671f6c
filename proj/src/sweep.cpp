#include "qosheft/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qosheft/errors.hpp"
#include "qosheft/metrics.hpp"
#include "qosheft/periodic.hpp"

namespace qosheft {

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::occupancy: return "occupancy";
    case SweepAxis::ccr: return "ccr";
    case SweepAxis::processors: return "processors";
    }
    return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
    for (auto axis : {SweepAxis::occupancy, SweepAxis::ccr, SweepAxis::processors}) {
        if (to_string(axis) == name) return axis;
    }
    throw ParseError("unknown sweep axis '" + std::string(name) + "'");
}

SweepConfig::SweepConfig()
    : occupancy_grid{Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10), Rational(5, 10),
                     Rational(6, 10)},
      ccr_grid{Rational(1, 4), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)},
      processor_grid{2, 4, 6, 8, 10} {
    // Periods on a half-background-period grid keep hyperperiods short.
    platform_template.background_period = 20;
    platform_template.min_slot = 2;
    dag_template.period_quantum = platform_template.background_period / 2;
}

SweepConfig full_sweep_preset() { return SweepConfig(); }

void validate(SweepConfig const & c) {
    if (c.dag_sizes.empty()) throw DomainError("no DAG sizes");
    if (c.dags_per_size == 0) throw DomainError("dags_per_size must be positive");
    if (c.axes.empty()) throw DomainError("no sweep axes");
    if (c.repetition_factor < 1) throw DomainError("repetition factor must be at least 1");
    for (auto axis : c.axes) {
        bool const empty = (axis == SweepAxis::occupancy && c.occupancy_grid.empty()) ||
                           (axis == SweepAxis::ccr && c.ccr_grid.empty()) ||
                           (axis == SweepAxis::processors && c.processor_grid.empty());
        if (empty) throw DomainError("empty grid for axis " + std::string(to_string(axis)));
    }
    for (auto n : c.dag_sizes) {
        if (n == 0) throw DomainError("DAG sizes must be positive");
    }
    for (auto const & o : c.occupancy_grid) {
        if (o < 0 || o >= 1) throw DomainError("occupancy values must lie in [0, 1)");
    }
    for (auto const & x : c.ccr_grid) {
        if (x < 0) throw DomainError("ccr values must be non-negative");
    }
    for (auto p : c.processor_grid) {
        if (p == 0) throw DomainError("processor counts must be positive");
    }
    if (c.base_processors == 0) throw DomainError("base processor count must be positive");
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t n_tasks, std::size_t seed_index) {
    return derive_seed(base_seed, seed_stream::sweep_instance,
                       (static_cast<std::uint64_t>(n_tasks) << 32) | static_cast<std::uint64_t>(seed_index));
}

std::vector<SweepCell> enumerate_cells(SweepConfig const & c) {
    std::vector<SweepCell> cells;
    auto push = [&](SweepAxis axis, Rational const & occ, Rational const & ccr, std::size_t procs) {
        for (auto n : c.dag_sizes) {
            for (std::size_t i = 0; i < c.dags_per_size; ++i) cells.push_back(SweepCell{axis, n, i, occ, ccr, procs});
        }
    };
    for (auto axis : c.axes) {
        switch (axis) {
        case SweepAxis::occupancy:
            for (auto const & o : c.occupancy_grid) push(axis, o, c.base_ccr, c.base_processors);
            break;
        case SweepAxis::ccr:
            for (auto const & x : c.ccr_grid) push(axis, c.base_occupancy, x, c.base_processors);
            break;
        case SweepAxis::processors:
            for (auto p : c.processor_grid) push(axis, c.base_occupancy, c.base_ccr, p);
            break;
        }
    }
    return cells;
}

namespace {

// Every cell draws its DAG and platform for the largest processor count, so
// one seed gives the same DAG on every axis and nested platforms.
std::size_t platform_width(SweepConfig const & c) {
    std::size_t width = c.base_processors;
    for (auto p : c.processor_grid) width = std::max(width, p);
    return width;
}

std::string decimal(Rational const & value) {
    std::string s = format_fixed(value, 6);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

Rational axis_value(SweepRow const & row) {
    switch (row.axis) {
    case SweepAxis::occupancy: return row.occupancy;
    case SweepAxis::ccr: return row.ccr;
    case SweepAxis::processors: return Rational(row.n_processors);
    }
    return 0;
}

} // namespace

SweepRow run_cell(SweepConfig const & c, SweepCell const & cell) {
    auto const started = std::chrono::steady_clock::now();
    std::uint64_t const seed = instance_seed(c.base_seed, cell.n_tasks, cell.seed_index);
    std::size_t const width = platform_width(c);
    if (cell.n_processors > width) throw DomainError("processor count exceeds the generated platform");

    GenParams g = c.dag_template;
    g.n_tasks = cell.n_tasks;
    g.n_vms = width;
    g.seed = seed;
    OccupancyParams o = c.platform_template;
    o.n_vms = width;
    o.occupancy_fraction = cell.occupancy;
    o.seed = seed;

    Platform const platform = generate_preoccupation(o).prefix(cell.n_processors);
    DagSpec const dag = apply_ccr(generate_dag(g), cell.ccr, platform);
    std::vector<DagSpec> const dags{dag};
    auto const hs = schedule_periodic(dags, platform, PeriodicOptions{c.repetition_factor, true});
    auto const reward = normalized_reward(hs, dags);

    SweepRow row;
    row.axis = cell.axis;
    row.n_tasks = cell.n_tasks;
    row.occupancy = cell.occupancy;
    row.ccr = cell.ccr;
    row.n_processors = cell.n_processors;
    row.seed = seed;
    row.nr_percent = reward.nr_percent;
    row.failed_instances = static_cast<std::int64_t>(hs.failures.size());
    if (c.record_timing) {
        row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                          .count();
    }
    return row;
}

std::vector<SweepRow> run_sweep(SweepConfig const & c) {
    validate(c);
    auto const cells = enumerate_cells(c);
    std::vector<SweepRow> rows(cells.size());
    std::size_t workers = c.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.workers;
    workers = std::min(workers, std::max<std::size_t>(cells.size(), 1));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                rows[i] = run_cell(c, cells[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = cells.size();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

std::vector<SweepAggregate> aggregate_rows(std::vector<SweepRow> const & rows) {
    std::vector<SweepAggregate> out;
    std::vector<std::vector<double>> samples;
    std::map<std::tuple<SweepAxis, Rational, std::size_t>, std::size_t> slot;
    for (auto const & row : rows) {
        auto key = std::tuple{row.axis, axis_value(row), row.n_tasks};
        auto [it, fresh] = slot.try_emplace(key, out.size());
        if (fresh) {
            out.push_back(SweepAggregate{row.axis, axis_value(row), row.n_tasks, 0, 0, 0});
            samples.emplace_back();
        }
        samples[it->second].push_back(to_double(row.nr_percent));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto const & xs = samples[i];
        double sum = 0;
        for (double x : xs) sum += x;
        double const mean = sum / static_cast<double>(xs.size());
        double sq = 0;
        for (double x : xs) sq += (x - mean) * (x - mean);
        out[i].count = xs.size();
        out[i].mean_nr = mean;
        out[i].std_nr = xs.size() > 1 ? std::sqrt(sq / static_cast<double>(xs.size() - 1)) : 0.0;
    }
    return out;
}

std::string rows_csv(std::vector<SweepRow> const & rows) {
    std::ostringstream os;
    os << "axis,n_tasks,occupancy,ccr,n_processors,seed,nr_percent,failed_instances,wall_ms\n";
    for (auto const & r : rows) {
        os << to_string(r.axis) << "," << r.n_tasks << "," << decimal(r.occupancy) << "," << decimal(r.ccr) << ","
           << r.n_processors << "," << r.seed << "," << format_fixed(r.nr_percent, 6) << "," << r.failed_instances
           << "," << r.wall_ms << "\n";
    }
    return os.str();
}

std::string aggregates_csv(std::vector<SweepAggregate> const & aggregates) {
    std::ostringstream os;
    os << "axis,value,n_tasks,count,mean_nr,std_nr\n" << std::fixed << std::setprecision(6);
    for (auto const & a : aggregates) {
        os << to_string(a.axis) << "," << decimal(a.value) << "," << a.n_tasks << "," << a.count << "," << a.mean_nr
           << "," << a.std_nr << "\n";
    }
    return os.str();
}

} // namespace qosheft
