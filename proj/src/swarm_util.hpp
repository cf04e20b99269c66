// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hadbf/metaheuristics.hpp"
#include "hadbf/random.hpp"

namespace hadbf::detail
{

inline constexpr std::uint64_t kInitBranch = 0;
inline constexpr std::uint64_t kStepBranch = 1;
inline constexpr std::uint64_t kResetBranch = 2;

inline void check_swarm(const ObjectiveAdapter &objective, int n_agents, int n_iterations)
{
    objective.validate();
    if (n_agents < 2)
        throw ContractError("population size must be >= 2");
    if (n_iterations < 1)
        throw ContractError("iteration count must be >= 1");
}

inline double clamp_to(const ObjectiveAdapter &objective, int j, double x)
{
    return std::clamp(x, objective.lower_bounds[j], objective.upper_bounds[j]);
}

inline void clamp_row(const ObjectiveAdapter &objective, Population &pop, int i)
{
    for (int j = 0; j < objective.dimension; ++j)
        pop(i, j) = clamp_to(objective, j, pop(i, j));
}

// Uniform start inside the box; row 0 takes the incumbent when one is given.
inline Population initial_population(const ObjectiveAdapter &objective, int n_agents, std::uint64_t seed,
                                     const RunControl &control)
{
    if (!control.incumbent.empty() && static_cast<int>(control.incumbent.size()) != objective.dimension)
        throw ContractError("incumbent does not match the objective dimension");
    Population pop(n_agents, objective.dimension);
    for (int i = 0; i < n_agents; ++i)
    {
        Rng rng = make_rng(seed, {kInitBranch, static_cast<std::uint64_t>(i)});
        for (int j = 0; j < objective.dimension; ++j)
            pop(i, j) = uniform(rng, objective.lower_bounds[j], objective.upper_bounds[j]);
    }
    if (!control.incumbent.empty())
    {
        for (int j = 0; j < objective.dimension; ++j)
            pop(0, j) = control.incumbent[j];
        clamp_row(objective, pop, 0);
    }
    return pop;
}

inline double evaluate_row(const ObjectiveAdapter &objective, const Population &pop, int i)
{
    const double c = objective.evaluate(std::span<const double>(pop.row(i).data(), objective.dimension));
    return std::isnan(c) ? std::numeric_limits<double>::infinity() : c;
}

inline std::vector<double> evaluate_all(const ObjectiveAdapter &objective, const Population &pop)
{
    std::vector<double> cost(pop.rows());
    for (int i = 0; i < pop.rows(); ++i)
        cost[i] = evaluate_row(objective, pop, i);
    return cost;
}

inline int argmin(const std::vector<double> &v)
{
    return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

inline std::vector<double> row_vector(const Population &pop, int i)
{
    return std::vector<double>(pop.row(i).data(), pop.row(i).data() + pop.cols());
}

} // namespace hadbf::detail
