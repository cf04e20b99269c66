// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "hadbf/core.hpp"
#include "hadbf/random.hpp"

namespace hadbf
{

class AnalogBeamformer;

// Full experiment configuration. Angles in radians, powers relative to the
// noise floor in dB.
struct Scenario
{
    int n_antennas = 16;
    int n_subarrays = 4;
    double element_spacing = 0.5; // wavelengths
    double theta_desired = 0.0;
    std::vector<double> theta_interferers;
    double snr_desired_db = 0.0;
    std::vector<double> snr_interferer_db; // one entry per interferer
    double noise_power = 1.0;
    int n_snapshots = 128;
    std::uint64_t seed = 0;
    double doa_mismatch_max = 0.0;

    int elements_per_subarray() const { return n_antennas / n_subarrays; }
    int n_interferers() const { return static_cast<int>(theta_interferers.size()); }
    double desired_power() const;
    double interferer_power(int k) const;

    // Throws ContractError / DomainError when an invariant does not hold.
    void validate() const;
};

// Desired signal at 0 deg; jammers at 60 and -30 deg with 15 dB SNR.
Scenario reference_scenario(int n_antennas, int n_snapshots, double snr_desired_db);

// a(theta): entry n = exp(j 2 pi d n sin theta), unnormalized.
CVector steering_vector(double theta, int n_antennas, double element_spacing = 0.5);

// Columns a(theta_d), a(theta_1), ..., a(theta_K).
CMatrix steering_matrix(const Scenario &scenario);

// Interference-only columns a(theta_1..K), each scaled by sqrt(P_k).
CMatrix weighted_interference_matrix(const Scenario &scenario);

struct SnapshotBlock
{
    CMatrix samples;      // D x Q, columns x(n)
    CMatrix true_signals; // (K+1) x Q, row 0 is s_d
    double noise_power = 1.0;

    int dimension() const { return static_cast<int>(samples.rows()); }
    int n_snapshots() const { return static_cast<int>(samples.cols()); }
};

// x(n) = F^H A s(n) + v(n) with circular Gaussian sources and noise.
// Sources are drawn before noise so that blocks for different analog
// matrices share one source realization when fed the same generator state.
SnapshotBlock generate_snapshots(const Scenario &scenario, const AnalogBeamformer &f_rf, Rng &rng);

struct CovarianceEstimate
{
    CMatrix matrix;
    int n_snapshots = 0;

    int dimension() const { return static_cast<int>(matrix.rows()); }
};

CovarianceEstimate sample_covariance(const SnapshotBlock &block);

// sum_k P_k (F^H a_k)(F^H a_k)^H + sigma^2 F^H F
CovarianceEstimate true_reduced_covariance(const Scenario &scenario, const AnalogBeamformer &f_rf);

} // namespace hadbf
