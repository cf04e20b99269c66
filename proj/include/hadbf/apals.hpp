// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hadbf/array.hpp"
#include "hadbf/closed_form.hpp"
#include "hadbf/hybrid.hpp"
#include "hadbf/metaheuristics.hpp"

namespace hadbf
{

// 30305 points put the first positive grid angle at 1.0367e-4 rad.
inline constexpr int kDefaultGridPoints = 30305;

class SearchGrid
{
public:
    static SearchGrid uniform(int n_points = kDefaultGridPoints);
    // Arbitrary candidate angles, kept in the given order.
    static SearchGrid from_points(std::vector<double> points);

    const std::vector<double> &points() const { return points_; }
    int n_points() const { return static_cast<int>(points_.size()); }
    // pi / (n - 1) for uniform grids, 0 otherwise.
    double spacing() const { return spacing_; }

private:
    SearchGrid(std::vector<double> p, double s) : points_(std::move(p)), spacing_(s) {}

    std::vector<double> points_;
    double spacing_ = 0.0;
};

struct GuardPolicy
{
    enum class Kind
    {
        // |f^H F(theta)^H a - 1| no larger than at the neighbours of the best
        // grid point
        kGridResolution,
        // |f^H F(theta)^H a - 1| <= value
        kTolerance,
        // ||F(theta)^H a||^2 >= value * max over the grid
        kMainLobe,
    };

    Kind kind = Kind::kGridResolution;
    double value = 0.0;

    static GuardPolicy grid_resolution() { return {Kind::kGridResolution, 0.0}; }
    static GuardPolicy tolerance(double tau);
    static GuardPolicy main_lobe(double fraction = 0.5);
};

enum class Method
{
    kScb,
    kDl,
    kDlApals,
    kSmfApals,
    kBaApals,
    kPsoApals,
    kIbaApals,
};

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
bool is_hybrid(Method m);
bool is_swarm(Method m);
const std::vector<Method> &all_methods();

struct OptimizerSettings
{
    int population = 40;
    int iterations = 100;
    PsoConfig pso;
    BatConfig ba;
    ImprovedBatConfig iba;
    PhaseObjectiveOptions phase;
};

struct ApalsOptions
{
    SearchGrid grid = SearchGrid::uniform();
    GuardPolicy guard;
    double dl_level = kDefaultDiagonalLoading;
    OptimizerSettings optimizer;
    int n_threads = 0; // 0: hardware concurrency
    bool keep_scan = false;
};

struct ScanPoint
{
    double theta = 0.0;
    double cost = 0.0;
    double residual = 0.0;    // |f^H F^H a(theta_p) - 1|
    double main_lobe = 0.0;   // ||F^H a(theta_p)||^2
    bool guard_pass = false;
};

struct HybridSolution
{
    AnalogBeamformer analog = AnalogBeamformer::identity(1);
    DigitalWeights digital;
    std::optional<double> optimized_angle; // empty for fully digital methods
    double presumed_theta = 0.0;
    double achieved_cost = 0.0;
    double achieved_sinr = 0.0; // dB
    Method method = Method::kDl;
    std::vector<double> cost_trace; // swarm methods only
};

struct ApalsResult
{
    HybridSolution solution;
    std::vector<ScanPoint> scan; // filled when keep_scan is set
};

// Snapshots seen through a given analog matrix.
using BlockSource = std::function<SnapshotBlock(const AnalogBeamformer &)>;

// Scan the grid with the DL combiner designed at F(theta_p), pick the best
// guarded angle, then run `method` once there. `optimizer_seed` feeds the
// swarm methods.
ApalsResult apals_search(const Scenario &scenario, Method method, const BlockSource &source,
                         const ApalsOptions &options = {}, std::optional<double> presumed_theta = std::nullopt,
                         std::uint64_t optimizer_seed = 0);

// End to end with snapshot, mismatch and optimizer streams derived from `seed`.
HybridSolution run_pipeline(const Scenario &scenario, Method method, std::uint64_t seed,
                            const ApalsOptions &options = {});

// Several methods on one trial: shared snapshots, mismatch draw and analog scan.
std::vector<HybridSolution> run_pipelines(const Scenario &scenario, const std::vector<Method> &methods,
                                          std::uint64_t seed, const ApalsOptions &options = {});

// Same as run_pipeline, also returning the scan for hybrid methods.
ApalsResult run_pipeline_with_scan(const Scenario &scenario, Method method, std::uint64_t seed,
                                   const ApalsOptions &options = {});

} // namespace hadbf
