#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qosheft/generator.hpp"
#include "qosheft/rational.hpp"

namespace qosheft {

enum class SweepAxis { occupancy, ccr, processors };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

struct SweepConfig {
    std::vector<std::size_t> dag_sizes{10, 20, 30, 40, 50};
    std::size_t dags_per_size = 100;
    std::vector<Rational> occupancy_grid;
    std::vector<Rational> ccr_grid;
    std::vector<std::size_t> processor_grid;
    std::vector<SweepAxis> axes{SweepAxis::occupancy, SweepAxis::ccr, SweepAxis::processors};
    std::uint64_t base_seed = 1;

    // Values of the parameters an axis does not vary.
    Rational base_occupancy = Rational(3, 10);
    Rational base_ccr = Rational(1, 2);
    std::size_t base_processors = 4;

    GenParams dag_template;
    OccupancyParams platform_template;
    int repetition_factor = 1;

    std::size_t workers = 1;
    bool record_timing = true;

    SweepConfig();
};

/// Full-scale defaults: sizes 10..50, 100 DAGs each, occupancy 10..60%,
/// CCR {0.25, 0.5, 1, 1.5, 2}, processors 2..10.
SweepConfig full_sweep_preset();

/// Throws DomainError for empty grids or sizes, or dags_per_size == 0.
void validate(SweepConfig const & config);

struct SweepCell {
    SweepAxis axis = SweepAxis::occupancy;
    std::size_t n_tasks = 0;
    std::size_t seed_index = 0;
    Rational occupancy;
    Rational ccr;
    std::size_t n_processors = 0;
};

struct SweepRow {
    SweepAxis axis = SweepAxis::occupancy;
    std::size_t n_tasks = 0;
    Rational occupancy;
    Rational ccr;
    std::size_t n_processors = 0;
    std::uint64_t seed = 0;
    Rational nr_percent;
    std::int64_t failed_instances = 0;
    std::int64_t wall_ms = 0;
};

struct SweepAggregate {
    SweepAxis axis = SweepAxis::occupancy;
    Rational value;
    std::size_t n_tasks = 0;
    std::size_t count = 0;
    double mean_nr = 0;
    double std_nr = 0;  // sample standard deviation, 0 for a single row
};

/// Seed of the DAG/platform pair behind one (size, seed index).
std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t n_tasks, std::size_t seed_index);

/// Cells in output order: axis, value, size, seed index.
std::vector<SweepCell> enumerate_cells(SweepConfig const & config);

/// One cell: generate, schedule, score. Pure in (config, cell) apart from wall_ms.
SweepRow run_cell(SweepConfig const & config, SweepCell const & cell);

/// Runs all cells on `config.workers` threads; output order never depends on it.
std::vector<SweepRow> run_sweep(SweepConfig const & config);

std::vector<SweepAggregate> aggregate_rows(std::vector<SweepRow> const & rows);

std::string rows_csv(std::vector<SweepRow> const & rows);
std::string aggregates_csv(std::vector<SweepAggregate> const & aggregates);

} // namespace qosheft
