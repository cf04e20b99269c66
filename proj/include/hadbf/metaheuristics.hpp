// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hadbf/array.hpp"
#include "hadbf/hybrid.hpp"

namespace hadbf
{

// Bounded real-vector objective, minimized by every optimizer below.
struct ObjectiveAdapter
{
    int dimension = 0;
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;
    std::function<double(std::span<const double>)> evaluate;

    void validate() const;
};

struct PhaseObjectiveOptions
{
    double phase_lower = 0.0;
    double phase_upper = kPi / 4.0;
    // Score the weights after scaling them to a unit response in the look
    // direction; false scores the raw phase vector.
    bool distortionless = true;
    std::optional<double> presumed_theta;
};

// Fitness of the phase-only combiner f_D = [e^{j a_1}, ..., e^{j a_L}] behind
// `f_rf`: the residual interference power of `cost_function`.
ObjectiveAdapter phase_only_objective(const Scenario &scenario, const AnalogBeamformer &f_rf,
                                      const PhaseObjectiveOptions &options = {});

// Weights the objective actually scores for a given phase vector.
DigitalWeights phase_only_weights(const Scenario &scenario, const AnalogBeamformer &f_rf,
                                  std::span<const double> phases, const PhaseObjectiveOptions &options = {});

using Population = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Read-only view of the swarm after each iteration. Loudness and pulse rates
// are empty for PSO.
struct SwarmView
{
    int iteration = 0;
    const Population *positions = nullptr;
    std::span<const double> loudness;
    std::span<const double> pulse_rates;
    double best_cost = 0.0;
    bool loudness_reset = false;
};

using SwarmObserver = std::function<void(const SwarmView &)>;

struct RunControl
{
    // Start position of individual 0; the initial global best can only
    // improve on it.
    std::vector<double> incumbent;
    SwarmObserver observer;
};

struct OptimizationResult
{
    std::vector<double> best_position;
    double best_cost = 0.0;
    std::vector<double> trace; // global best after each iteration
};

struct PsoConfig
{
    double c1 = 0.5;
    double c2 = 0.5;
    double inertia_max = 0.9;
    double inertia_min = 0.4;
    double velocity_fraction = 0.2; // of the bound range
};

struct BatConfig
{
    double alpha = 0.9;
    double gamma = 0.9;
    double f_min = 0.0;
    double f_max = 2.0;
    double loudness_min = 0.0;
    double loudness_max = 2.0;
    double pulse_min = 0.0;
    double pulse_max = 1.0;
    // false: v += (x - x*) f as printed; true: v += (x* - x) f
    bool attract_to_best = false;
};

struct ImprovedBatConfig
{
    double alpha = 0.9;
    double gamma = 0.9;
    double f_min = 0.0;
    double f_max = 1.5;
    double loudness_min = 0.0;
    double loudness_max = 2.0;
    double pulse_min = 0.0;
    double pulse_max = 1.0;
    double habitat_min = 0.5; // P
    double habitat_max = 0.9;
    double compensation_min = 0.1; // C
    double compensation_max = 0.9;
    double contraction_min = 0.5; // eta
    double contraction_max = 1.0;
    int stagnation_window = 2; // G
    double inertia_min = 0.4;
    double inertia_max = 0.9;
    double inertia_sigma = 0.2;
    double sound_speed = 340.0;
    double reset_pulse_min = 0.85;
    double reset_pulse_max = 0.9;
    // Use (c + v_bat) / (c + v_best) in the Doppler factor instead of 1.
    bool doppler_velocity_ratio = false;
};

OptimizationResult pso_optimize(const ObjectiveAdapter &objective, int n_particles, int n_iterations,
                                std::uint64_t seed, const PsoConfig &config = {}, const RunControl &control = {});

OptimizationResult ba_optimize(const ObjectiveAdapter &objective, int n_bats, int n_iterations, std::uint64_t seed,
                               const BatConfig &config = {}, const RunControl &control = {});

OptimizationResult iba_optimize(const ObjectiveAdapter &objective, int n_bats, int n_iterations, std::uint64_t seed,
                                const ImprovedBatConfig &config = {}, const RunControl &control = {});

// Update rules, exposed for testing.
namespace bat
{

// f = f_min + (f_max - f_min) beta
double frequency(double f_min, double f_max, double beta);

// r0 (1 - exp(-gamma t))
double pulse_rate(double r0, double gamma, int t);

// alpha^n A0 after n accepted moves
double loudness_after(double a0, double alpha, int n_updates);

// g +/- eta |m - x| ln(1/u)
double quantum_step(double g, double m, double x, double eta, double u, bool positive);

// mu_min + (mu_max - mu_min) rand + sigma randn
double stochastic_inertia(double mu_min, double mu_max, double sigma, double rand01, double randn);

// Doppler-compensated frequency for one dimension.
double compensated_frequency(double f, double compensation, double g, double x, double v_bat, double v_best,
                             double sound_speed, bool velocity_ratio);

} // namespace bat

// Smallest u used in ln(1/u).
inline constexpr double kQuantumFloor = 1e-12;

} // namespace hadbf
