// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hadbf/apals.hpp"
#include "hadbf/io.hpp"

namespace hadbf
{

struct SweepAxis
{
    std::string name; // snr_desired_db, n_antennas, ...
    std::vector<double> values;
};

struct ExperimentSpec
{
    std::string figure_id;
    std::optional<SweepAxis> sweep; // figure default when empty
    int n_trials = 20;
    std::uint64_t seed = 42;
    RunConfig base{reference_scenario(16, 128, 0.0), {}};
    std::filesystem::path output_dir;
    int n_threads = 0;

    void validate() const;
};

const std::vector<std::string> &figure_ids();

// The figure's protocol applied to `base`: array size, snapshot count and
// the other fields the figure pins.
RunConfig figure_config(const std::string &figure_id, const RunConfig &base);
// Same, starting from the reference scenario.
RunConfig figure_config(const std::string &figure_id);
SweepAxis default_sweep(const std::string &figure_id);

struct Stats
{
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for one value
    int n = 0;
};

Stats describe(const std::vector<double> &values);

std::uint64_t trial_seed(std::uint64_t master, int trial);

// Fully digital optimum P_d a^H (R_i+n)^-1 a with the true covariance, dB.
double optimal_sinr_db(const Scenario &scenario);

// Fixed-size pool; results land by index so the order of completion never
// matters.
void parallel_for(int n, int n_threads, const std::function<void(int)> &body);

struct ConvergenceTrial
{
    std::vector<double> iba;
    std::vector<double> ba;
    std::vector<double> pso;
};

// The three swarms on the phase-only objective at the scanned angle, all
// started from the same seed and incumbent.
ConvergenceTrial convergence_trial(const RunConfig &config, std::uint64_t seed);

struct NullDepths
{
    double at_m30_tabulated = 0.0;
    double at_60_tabulated = 0.0;
    double at_m30_power = 0.0;
    double at_60_power = 0.0;
};

NullDepths null_depths(const HybridSolution &solution, const Scenario &scenario);

struct ExperimentOutput
{
    std::vector<std::filesystem::path> files;
    nlohmann::json manifest;
};

ExperimentOutput run_experiment(const ExperimentSpec &spec);

// Reference null depths quoted in reports.
struct TableReference
{
    Method method;
    double at_m30;
    double at_60;
};

const std::vector<TableReference> &table_reference(const std::string &figure_id);

} // namespace hadbf
