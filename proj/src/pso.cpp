// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "swarm_util.hpp"

namespace hadbf
{

OptimizationResult pso_optimize(const ObjectiveAdapter &objective, int n_particles, int n_iterations,
                                std::uint64_t seed, const PsoConfig &config, const RunControl &control)
{
    detail::check_swarm(objective, n_particles, n_iterations);
    const int dim = objective.dimension;

    Population x = detail::initial_population(objective, n_particles, seed, control);
    Population v = Population::Zero(n_particles, dim);
    Population pbest = x;
    std::vector<double> pcost = detail::evaluate_all(objective, x);

    int gi = detail::argmin(pcost);
    std::vector<double> g = detail::row_vector(pbest, gi);
    double gcost = pcost[gi];

    std::vector<double> vmax(dim);
    for (int j = 0; j < dim; ++j)
        vmax[j] = config.velocity_fraction * (objective.upper_bounds[j] - objective.lower_bounds[j]);

    OptimizationResult result;
    result.trace.reserve(n_iterations);
    for (int t = 0; t < n_iterations; ++t)
    {
        const double w = n_iterations > 1 ? config.inertia_max - (config.inertia_max - config.inertia_min) * t /
                                                                      static_cast<double>(n_iterations - 1)
                                          : config.inertia_max;
        for (int i = 0; i < n_particles; ++i)
        {
            Rng rng = make_rng(seed, {detail::kStepBranch, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)});
            for (int j = 0; j < dim; ++j)
            {
                const double r1 = uniform(rng, 0.0, 1.0);
                const double r2 = uniform(rng, 0.0, 1.0);
                double vij = w * v(i, j) + config.c1 * r1 * (pbest(i, j) - x(i, j)) + config.c2 * r2 * (g[j] - x(i, j));
                v(i, j) = std::clamp(vij, -vmax[j], vmax[j]);
                x(i, j) = detail::clamp_to(objective, j, x(i, j) + v(i, j));
            }
        }
        const std::vector<double> cost = detail::evaluate_all(objective, x);
        for (int i = 0; i < n_particles; ++i)
        {
            if (cost[i] < pcost[i])
            {
                pcost[i] = cost[i];
                pbest.row(i) = x.row(i);
            }
            if (cost[i] < gcost)
            {
                gcost = cost[i];
                g = detail::row_vector(x, i);
            }
        }
        result.trace.push_back(gcost);
        if (control.observer)
        {
            SwarmView view;
            view.iteration = t + 1;
            view.positions = &x;
            view.best_cost = gcost;
            control.observer(view);
        }
    }
    result.best_position = std::move(g);
    result.best_cost = gcost;
    return result;
}

} // namespace hadbf
