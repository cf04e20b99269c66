// SPDX-License-Identifier: Apache-2.0
#include "hadbf/array.hpp"

#include <cmath>
#include <string>

#include "hadbf/hybrid.hpp"

namespace hadbf
{

namespace
{

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void check_angle(double theta, const char *what)
{
    if (!std::isfinite(theta) || std::abs(theta) > kPi / 2.0 + 1e-12)
        throw DomainError(std::string(what) + " must lie in [-pi/2, pi/2], got " + std::to_string(theta));
}

} // namespace

double Scenario::desired_power() const
{
    return noise_power * db_to_linear(snr_desired_db);
}

double Scenario::interferer_power(int k) const
{
    return noise_power * db_to_linear(snr_interferer_db.at(static_cast<std::size_t>(k)));
}

void Scenario::validate() const
{
    if (n_subarrays < 1)
        throw ContractError("n_subarrays must be >= 1");
    if (n_antennas < 1 || n_antennas % n_subarrays != 0)
        throw ContractError("n_antennas must be a positive multiple of n_subarrays");
    if (!(element_spacing > 0.0))
        throw ContractError("element_spacing must be positive");
    if (n_snapshots < 1)
        throw ContractError("n_snapshots must be >= 1");
    if (!(noise_power > 0.0))
        throw ContractError("noise_power must be positive");
    if (snr_interferer_db.size() != theta_interferers.size())
        throw ContractError("snr_interferer_db needs one entry per interferer");
    if (doa_mismatch_max < 0.0)
        throw ContractError("doa_mismatch_max must be non-negative");
    check_angle(theta_desired, "theta_desired");
    for (double t : theta_interferers)
    {
        check_angle(t, "theta_interferers");
        if (t == theta_desired)
            throw ContractError("interferer coincides with the desired direction");
    }
}

Scenario reference_scenario(int n_antennas, int n_snapshots, double snr_desired_db)
{
    Scenario s;
    s.n_antennas = n_antennas;
    s.n_subarrays = 4;
    s.theta_desired = 0.0;
    s.theta_interferers = {deg_to_rad(60.0), deg_to_rad(-30.0)};
    s.snr_desired_db = snr_desired_db;
    s.snr_interferer_db = {15.0, 15.0};
    s.n_snapshots = n_snapshots;
    return s;
}

CVector steering_vector(double theta, int n_antennas, double element_spacing)
{
    check_angle(theta, "theta");
    if (n_antennas < 1)
        throw ContractError("n_antennas must be >= 1");
    const double step = 2.0 * kPi * element_spacing * std::sin(theta);
    CVector a(n_antennas);
    for (int n = 0; n < n_antennas; ++n)
        a(n) = std::polar(1.0, step * n);
    return a;
}

CMatrix steering_matrix(const Scenario &scenario)
{
    scenario.validate();
    const int k = scenario.n_interferers();
    CMatrix a(scenario.n_antennas, k + 1);
    a.col(0) = steering_vector(scenario.theta_desired, scenario.n_antennas, scenario.element_spacing);
    for (int i = 0; i < k; ++i)
        a.col(i + 1) = steering_vector(scenario.theta_interferers[i], scenario.n_antennas, scenario.element_spacing);
    return a;
}

CMatrix weighted_interference_matrix(const Scenario &scenario)
{
    const CMatrix a = steering_matrix(scenario);
    CMatrix ai(scenario.n_antennas, scenario.n_interferers());
    for (int k = 0; k < scenario.n_interferers(); ++k)
        ai.col(k) = a.col(k + 1) * std::sqrt(scenario.interferer_power(k));
    return ai;
}

SnapshotBlock generate_snapshots(const Scenario &scenario, const AnalogBeamformer &f_rf, Rng &rng)
{
    scenario.validate();
    if (f_rf.n_antennas() != scenario.n_antennas)
        throw ContractError("analog beamformer has " + std::to_string(f_rf.n_antennas()) +
                            " rows, scenario has " + std::to_string(scenario.n_antennas) + " antennas");

    const int q = scenario.n_snapshots;
    const int k = scenario.n_interferers();
    const int d = f_rf.n_subarrays();

    SnapshotBlock block;
    block.noise_power = scenario.noise_power;
    block.true_signals.resize(k + 1, q);
    for (int n = 0; n < q; ++n)
    {
        block.true_signals(0, n) = complex_gaussian(rng, scenario.desired_power());
        for (int i = 0; i < k; ++i)
            block.true_signals(i + 1, n) = complex_gaussian(rng, scenario.interferer_power(i));
    }

    CMatrix noise(d, q);
    for (int n = 0; n < q; ++n)
        for (int l = 0; l < d; ++l)
            noise(l, n) = complex_gaussian(rng, scenario.noise_power);

    const CMatrix reduced = f_rf.matrix().adjoint() * steering_matrix(scenario);
    block.samples = reduced * block.true_signals + noise;
    return block;
}

CovarianceEstimate sample_covariance(const SnapshotBlock &block)
{
    if (block.n_snapshots() < 1 || block.dimension() < 1)
        throw ContractError("sample_covariance needs a non-empty snapshot block");
    CovarianceEstimate c;
    c.n_snapshots = block.n_snapshots();
    c.matrix = (block.samples * block.samples.adjoint()) / static_cast<double>(c.n_snapshots);
    // exact Hermitian symmetry
    c.matrix = 0.5 * (c.matrix + c.matrix.adjoint()).eval();
    return c;
}

CovarianceEstimate true_reduced_covariance(const Scenario &scenario, const AnalogBeamformer &f_rf)
{
    scenario.validate();
    const CMatrix &f = f_rf.matrix();
    const CMatrix b = f.adjoint() * weighted_interference_matrix(scenario);
    CovarianceEstimate c;
    c.n_snapshots = 0;
    c.matrix = b * b.adjoint() + scenario.noise_power * (f.adjoint() * f);
    return c;
}

} // namespace hadbf
