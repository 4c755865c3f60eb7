#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tverify/pipeline.hpp"

namespace tverify {

// Shortest decimal that round-trips to the exact same bits (to_chars).
std::string format_double(double v);

// Strict double parser; `row` is reported in the CsvError on failure.
double parse_double(std::string_view text, std::size_t row);

std::string trajectory_to_csv(const Trajectory& traj);

struct ParsedTrajectory {
    std::vector<double> times;
    std::vector<State3> states;
};

// Parses a `t,x,y,z` CSV. Throws CsvError naming the offending row.
ParsedTrajectory trajectory_from_csv(std::string_view text);

// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const nlohmann::json& j);

nlohmann::ordered_json report_to_json(const ValidityReport& report);

std::string_view accumulation_name(Accumulation a);
std::optional<Accumulation> accumulation_from_name(std::string_view name);

} // namespace tverify
