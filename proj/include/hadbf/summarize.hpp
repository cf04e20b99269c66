// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace hadbf
{

struct Check
{
    enum class Status
    {
        kPass,
        kFail,
        kSkipped, // inputs missing
    };

    std::string id;
    std::string figure;
    std::string description;
    Status status = Status::kSkipped;
    std::string detail;
    bool acceptance = false; // counts toward the exit status
};

struct SummaryReport
{
    bool complete = false;
    int n_curves = 0;
    std::vector<std::string> figures;
    std::vector<std::string> missing;
    std::vector<Check> checks;
    nlohmann::json json;
    std::string markdown;

    bool acceptance_failed() const;
};

// Reads every *_manifest.json under `dir` (one level of subdirectories too).
SummaryReport summarize_directory(const std::filesystem::path &dir);

// Writes report.md and report.json next to the results.
void write_report(const std::filesystem::path &dir, const SummaryReport &report);

} // namespace hadbf
