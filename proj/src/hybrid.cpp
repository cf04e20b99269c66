// SPDX-License-Identifier: Apache-2.0
#include "hadbf/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hadbf
{

AnalogBeamformer AnalogBeamformer::from_angle(double theta, int n_antennas, int n_subarrays,
                                              const AnalogOptions &options)
{
    if (n_subarrays < 1 || n_antennas < 1 || n_antennas % n_subarrays != 0)
        throw ContractError("n_antennas (" + std::to_string(n_antennas) + ") must be a positive multiple of n_subarrays (" +
                            std::to_string(n_subarrays) + ")");
    if (!std::isfinite(theta) || std::abs(theta) > kPi / 2.0 + 1e-12)
        throw DomainError("steering angle must lie in [-pi/2, pi/2]");

    const int m = n_antennas / n_subarrays;
    const double amp = 1.0 / std::sqrt(static_cast<double>(m));
    const double step = 2.0 * kPi * options.element_spacing * std::sin(theta);
    CMatrix f = CMatrix::Zero(n_antennas, n_subarrays);
    for (int l = 0; l < n_subarrays; ++l)
        for (int i = 0; i < m; ++i)
        {
            const int g = l * m + i;
            f(g, l) = std::polar(amp, step * (g + options.index_offset));
        }
    return AnalogBeamformer(std::move(f), theta);
}

AnalogBeamformer AnalogBeamformer::identity(int n_antennas)
{
    if (n_antennas < 1)
        throw ContractError("n_antennas must be >= 1");
    return AnalogBeamformer(CMatrix::Identity(n_antennas, n_antennas), std::nullopt);
}

AnalogBeamformer AnalogBeamformer::from_matrix(CMatrix matrix, int n_subarrays)
{
    const auto n = static_cast<int>(matrix.rows());
    if (n_subarrays < 1 || matrix.cols() != n_subarrays || n % n_subarrays != 0)
        throw ContractError("analog matrix must be N x L with L dividing N");
    const int m = n / n_subarrays;
    const double amp = 1.0 / std::sqrt(static_cast<double>(m));
    for (int l = 0; l < n_subarrays; ++l)
        for (int r = 0; r < n; ++r)
        {
            const bool inside = r >= l * m && r < (l + 1) * m;
            const double mag = std::abs(matrix(r, l));
            if (!inside && mag != 0.0)
                throw ContractError("analog matrix has support outside its diagonal block");
            if (inside && std::abs(mag - amp) > 1e-12)
                throw ContractError("analog matrix entries must have modulus 1/sqrt(M)");
        }
    const CMatrix gram = matrix.adjoint() * matrix;
    if ((gram - CMatrix::Identity(n_subarrays, n_subarrays)).cwiseAbs().maxCoeff() > 1e-12)
        throw ContractError("analog matrix columns are not orthonormal");
    return AnalogBeamformer(std::move(matrix), std::nullopt);
}

AnalogBeamformer analog_from_angle(double theta, int n_antennas, int n_subarrays, const AnalogOptions &options)
{
    return AnalogBeamformer::from_angle(theta, n_antennas, n_subarrays, options);
}

DigitalWeights DigitalWeights::complex(CVector v)
{
    if (v.size() == 0)
        throw ContractError("digital weights must be non-empty");
    return DigitalWeights(std::move(v), WeightKind::kComplex);
}

DigitalWeights DigitalWeights::from_phases(std::span<const double> phases)
{
    if (phases.empty())
        throw ContractError("digital weights must be non-empty");
    CVector v(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t i = 0; i < phases.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = std::polar(1.0, phases[i]);
    return DigitalWeights(std::move(v), WeightKind::kPhaseOnly);
}

std::vector<double> DigitalWeights::phases() const
{
    std::vector<double> out(static_cast<std::size_t>(v_.size()));
    for (Eigen::Index i = 0; i < v_.size(); ++i)
        out[static_cast<std::size_t>(i)] = std::arg(v_(i));
    return out;
}

DigitalWeights DigitalWeights::distortionless(const CVector &effective_steering) const
{
    const Complex r = v_.dot(effective_steering); // f^H a
    if (std::abs(r) == 0.0)
        throw ContractError("weights have zero response in the look direction");
    return DigitalWeights(v_ / std::conj(r), WeightKind::kComplex);
}

CVector effective_steering(const AnalogBeamformer &f_rf, double theta, double element_spacing)
{
    return f_rf.reduce(steering_vector(theta, f_rf.n_antennas(), element_spacing));
}

namespace
{

void check_weights(const AnalogBeamformer &f_rf, const DigitalWeights &f_d)
{
    if (f_d.size() != f_rf.n_subarrays())
        throw ContractError("digital weights have " + std::to_string(f_d.size()) + " entries, expected " +
                            std::to_string(f_rf.n_subarrays()));
    if (f_d.vector().squaredNorm() == 0.0)
        throw ContractError("digital weights must be nonzero");
}

double interference_power(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario)
{
    if (scenario.n_interferers() == 0)
        return 0.0;
    const CMatrix b = f_rf.matrix().adjoint() * weighted_interference_matrix(scenario);
    return (f_d.vector().adjoint() * b).squaredNorm();
}

} // namespace

double output_sinr_linear(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario)
{
    scenario.validate();
    check_weights(f_rf, f_d);
    const CVector at = effective_steering(f_rf, scenario.theta_desired, scenario.element_spacing);
    const double signal = scenario.desired_power() * std::norm(f_d.vector().dot(at));
    const double noise = scenario.noise_power * f_d.vector().squaredNorm();
    return signal / (interference_power(f_rf, f_d, scenario) + noise);
}

double output_sinr(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario)
{
    return 10.0 * std::log10(output_sinr_linear(f_rf, f_d, scenario));
}

double cost_function(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const Scenario &scenario)
{
    scenario.validate();
    check_weights(f_rf, f_d);
    return interference_power(f_rf, f_d, scenario);
}

double array_response(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, double theta, double element_spacing)
{
    check_weights(f_rf, f_d);
    return std::abs(f_d.vector().dot(effective_steering(f_rf, theta, element_spacing)));
}

std::vector<double> beampattern(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, std::span<const double> grid,
                                double element_spacing)
{
    if (grid.empty())
        throw ContractError("beampattern needs a non-empty angle grid");
    check_weights(f_rf, f_d);
    std::vector<double> mag(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        mag[i] = array_response(f_rf, f_d, grid[i], element_spacing);
    const double peak = *std::max_element(mag.begin(), mag.end());
    if (peak == 0.0)
        throw ContractError("beampattern is identically zero on the grid");
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = (mag[i] == peak) ? 0.0 : 20.0 * std::log10(mag[i] / peak);
    return out;
}

double null_depth(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, double theta, DbScale scale,
                  double element_spacing)
{
    static const std::vector<double> peak_grid = angle_grid(18001);
    double peak = 0.0;
    for (double t : peak_grid)
        peak = std::max(peak, array_response(f_rf, f_d, t, element_spacing));
    const double r = array_response(f_rf, f_d, theta, element_spacing);
    peak = std::max(peak, r);
    const double factor = scale == DbScale::kPower ? 20.0 : 10.0;
    return factor * std::log10(std::max(r, 1e-300) / peak);
}

std::vector<double> angle_grid(int n_points)
{
    if (n_points < 2)
        throw ContractError("angle grid needs at least two points");
    std::vector<double> g(static_cast<std::size_t>(n_points));
    const double half = kPi / 2.0;
    const auto denom = static_cast<double>(n_points - 1);
    for (int i = 0; i < n_points; ++i)
        g[static_cast<std::size_t>(i)] = (2.0 * i - denom) * half / denom;
    g.front() = -half;
    g.back() = half;
    return g;
}

} // namespace hadbf
