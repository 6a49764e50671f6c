#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qosheft/periodic.hpp"
#include "qosheft/platform.hpp"
#include "qosheft/workload.hpp"

namespace qosheft::io {

using Json = nlohmann::ordered_json;

// Field names and layouts are documented in SCHEMA.md. Readers are strict:
// unknown fields are rejected, and every error names the JSON path.

Json to_json(DagSpec const & dag);
Json to_json(Platform const & platform);
Json to_json(HyperSchedule const & hs);

DagSpec dag_from_json(Json const & json);
Platform platform_from_json(Json const & json);
HyperSchedule schedule_from_json(Json const & json);

/// Parses JSON text; syntax errors report `source:line:column`.
Json parse_json(std::string_view text, std::string_view source);

DagSpec load_dag(std::filesystem::path const & path);
Platform load_platform(std::filesystem::path const & path);
HyperSchedule load_schedule(std::filesystem::path const & path);

/// Pretty-printed with a trailing newline; byte-stable for equal values.
std::string dump(Json const & json);

void write_file(std::filesystem::path const & path, std::string const & contents);
std::string read_file(std::filesystem::path const & path);

/// vm,start,finish,dag,task,level,origin over one horizon; background rows
/// are the occupied complement of each VM's idle pattern.
std::string gantt_csv(HyperSchedule const & hs, Platform const & platform);

} // namespace qosheft::io
