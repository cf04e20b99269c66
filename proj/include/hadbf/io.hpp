// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hadbf/apals.hpp"

namespace hadbf
{

// A scenario plus the solver settings that travel with it in one file.
struct RunConfig
{
    Scenario scenario;
    ApalsOptions options;
};

// Angles are written in degrees; everything else keeps its unit.
nlohmann::json to_json(const RunConfig &config);
RunConfig run_config_from_json(const nlohmann::json &doc);

RunConfig load_run_config(const std::filesystem::path &path);
void save_run_config(const std::filesystem::path &path, const RunConfig &config);

// FNV-1a 64 over the canonical JSON text, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string scenario_hash(const RunConfig &config);
std::string file_hash(const std::filesystem::path &path);

// Shortest round-trip decimal form, always with '.'.
std::string format_double(double v);

class CsvWriter
{
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<double> &values);
    void row(const std::vector<std::string> &cells);
    std::string str() const { return text_; }
    void save(const std::filesystem::path &path) const;

private:
    std::size_t columns_;
    std::string text_;
};

void write_text_file(const std::filesystem::path &path, const std::string &text);

// theta_deg, gain_db
std::string beampattern_csv(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const std::vector<double> &grid,
                            double element_spacing = 0.5);

// iteration, best_cost
std::string cost_trace_csv(const std::vector<double> &trace);

// theta_rad, cf_value, guard_pass
std::string scan_trace_csv(const std::vector<ScanPoint> &scan);

nlohmann::json weights_json(const HybridSolution &solution, const RunConfig &config, std::uint64_t seed);

} // namespace hadbf
