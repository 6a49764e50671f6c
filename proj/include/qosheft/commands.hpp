#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "qosheft/generator.hpp"
#include "qosheft/sweep.hpp"

namespace qosheft::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int infeasible = 1;
inline constexpr int usage = 2;
} // namespace exit_code

struct ScheduleOptions {
    std::vector<std::filesystem::path> dag_files;
    std::filesystem::path platform_file;
    std::filesystem::path output = "schedule.json";
    std::filesystem::path gantt;  // defaults to <output stem>.csv
    int repetition_factor = 1;
    bool enhance = true;
};

struct VerifyOptions {
    std::filesystem::path schedule_file;
    std::vector<std::filesystem::path> dag_files;
    std::filesystem::path platform_file;
};

struct GenerateOptions {
    GenParams dag;
    OccupancyParams platform;
    Rational ccr = Rational(1, 2);
    std::filesystem::path output = ".";
};

struct SweepOptions {
    SweepConfig config;
    std::filesystem::path output = "sweep";
};

int cmd_schedule(ScheduleOptions const & options, std::ostream & out, std::ostream & err);
int cmd_verify(VerifyOptions const & options, std::ostream & out, std::ostream & err);
int cmd_generate(GenerateOptions const & options, std::ostream & out, std::ostream & err);
/// Writes <output>/results.csv and <output>/aggregates.csv.
int cmd_sweep(SweepOptions const & options, std::ostream & out, std::ostream & err);

} // namespace qosheft::cli
