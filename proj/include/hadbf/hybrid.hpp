// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hadbf/array.hpp"
#include "hadbf/core.hpp"

namespace hadbf
{

struct AnalogOptions
{
    double element_spacing = 0.5;
    // Constant added to the global element index in the phase law. A nonzero
    // value rotates every block by the same phase.
    int index_offset = 0;
};

// Partial-connected N x L phase matrix: block l feeds antennas [lM, (l+1)M)
// with entries of modulus 1/sqrt(M).
class AnalogBeamformer
{
public:
    static AnalogBeamformer from_angle(double theta, int n_antennas, int n_subarrays, const AnalogOptions &options = {});

    // Fully digital combining: L = N, M = 1.
    static AnalogBeamformer identity(int n_antennas);

    // Validates block support, modulus and orthonormality.
    static AnalogBeamformer from_matrix(CMatrix matrix, int n_subarrays);

    const CMatrix &matrix() const { return matrix_; }
    int n_antennas() const { return static_cast<int>(matrix_.rows()); }
    int n_subarrays() const { return static_cast<int>(matrix_.cols()); }
    int elements_per_subarray() const { return n_antennas() / n_subarrays(); }
    std::optional<double> steer_angle() const { return steer_angle_; }

    // F^H v
    CVector reduce(const CVector &v) const { return matrix_.adjoint() * v; }

private:
    AnalogBeamformer(CMatrix m, std::optional<double> angle) : matrix_(std::move(m)), steer_angle_(angle) {}

    CMatrix matrix_;
    std::optional<double> steer_angle_;
};

AnalogBeamformer analog_from_angle(double theta, int n_antennas, int n_subarrays, const AnalogOptions &options = {});

enum class WeightKind
{
    kComplex,
    kPhaseOnly,
};

class DigitalWeights
{
public:
    DigitalWeights() = default;

    static DigitalWeights complex(CVector v);
    static DigitalWeights from_phases(std::span<const double> phases);

    const CVector &vector() const { return v_; }
    WeightKind kind() const { return kind_; }
    int size() const { return static_cast<int>(v_.size()); }
    std::vector<double> phases() const;

    // Scaled by 1 / (f^H a_eff)^* so that f^H a_eff = 1.
    DigitalWeights distortionless(const CVector &effective_steering) const;

private:
    DigitalWeights(CVector v, WeightKind k) : v_(std::move(v)), kind_(k) {}

    CVector v_;
    WeightKind kind_ = WeightKind::kComplex;
};

// F^H a(theta)
CVector effective_steering(const AnalogBeamformer &f_rf, double theta, double element_spacing = 0.5);

// Output SINR with per-interferer powers P_k. Linear and dB flavours.
double output_sinr_linear(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario);
double output_sinr(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario);

// Residual interference power ||f^H F^H A_i||^2 with A_i columns scaled by sqrt(P_k).
double cost_function(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario);

// |f^H F^H a(theta)|
double array_response(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, double theta, double element_spacing = 0.5);

// 20 log10 |f^H F^H a(theta)| normalized so the grid maximum is 0 dB.
std::vector<double> beampattern(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, std::span<const double> grid,
                                double element_spacing = 0.5);

enum class DbScale
{
    kPower,     // 20 log10 |r| / |r_peak|
    kTabulated, // 10 log10 |r| / |r_peak|, the scale used by the reference null-depth tables
};

// Peak-normalized gain at `theta`; the peak is taken over a 0.01 deg grid on
// [-90, 90] deg.
double null_depth(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, double theta,
                  DbScale scale = DbScale::kPower, double element_spacing = 0.5);

// n uniformly spaced angles on [-pi/2, pi/2].
std::vector<double> angle_grid(int n_points);

} // namespace hadbf
