// SPDX-License-Identifier: Apache-2.0
#include "hadbf/metaheuristics.hpp"

#include <cmath>
#include <limits>

namespace hadbf
{

void ObjectiveAdapter::validate() const
{
    if (dimension < 1)
        throw ContractError("objective dimension must be >= 1");
    if (static_cast<int>(lower_bounds.size()) != dimension || static_cast<int>(upper_bounds.size()) != dimension)
        throw ContractError("bounds must match the objective dimension");
    for (int j = 0; j < dimension; ++j)
        if (!(lower_bounds[j] <= upper_bounds[j]))
            throw ContractError("lower bound exceeds upper bound");
    if (!evaluate)
        throw ContractError("objective has no evaluate function");
}

DigitalWeights phase_only_weights(const Scenario &scenario, const AnalogBeamformer &f_rf,
                                  std::span<const double> phases, const PhaseObjectiveOptions &options)
{
    DigitalWeights w = DigitalWeights::from_phases(phases);
    if (!options.distortionless)
        return w;
    const double look = options.presumed_theta.value_or(scenario.theta_desired);
    return w.distortionless(effective_steering(f_rf, look, scenario.element_spacing));
}

ObjectiveAdapter phase_only_objective(const Scenario &scenario, const AnalogBeamformer &f_rf,
                                      const PhaseObjectiveOptions &options)
{
    scenario.validate();
    if (f_rf.n_antennas() != scenario.n_antennas)
        throw ContractError("analog beamformer does not match the scenario");
    if (!(options.phase_lower < options.phase_upper))
        throw ContractError("phase bounds are empty");

    const int l = f_rf.n_subarrays();
    // Precompute F^H a for the look direction and each weighted interferer.
    const double look = options.presumed_theta.value_or(scenario.theta_desired);
    CVector look_steering = effective_steering(f_rf, look, scenario.element_spacing);
    CMatrix interference = f_rf.matrix().adjoint() * weighted_interference_matrix(scenario);
    const bool normalize = options.distortionless;

    ObjectiveAdapter obj;
    obj.dimension = l;
    obj.lower_bounds.assign(static_cast<std::size_t>(l), options.phase_lower);
    obj.upper_bounds.assign(static_cast<std::size_t>(l), options.phase_upper);
    obj.evaluate = [look_steering = std::move(look_steering), interference = std::move(interference),
                    normalize](std::span<const double> x) {
        CVector w(static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i)
            w(static_cast<Eigen::Index>(i)) = std::polar(1.0, x[i]);
        double residual = interference.cols() == 0 ? 0.0 : (w.adjoint() * interference).squaredNorm();
        if (normalize)
        {
            const double gain = std::norm(w.dot(look_steering));
            if (gain == 0.0)
                return std::numeric_limits<double>::infinity();
            residual /= gain;
        }
        return residual;
    };
    return obj;
}

} // namespace hadbf
