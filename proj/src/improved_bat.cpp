// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <numeric>

#include "swarm_util.hpp"

namespace hadbf
{

OptimizationResult iba_optimize(const ObjectiveAdapter &objective, int n_bats, int n_iterations, std::uint64_t seed,
                                const ImprovedBatConfig &config, const RunControl &control)
{
    detail::check_swarm(objective, n_bats, n_iterations);
    if (config.stagnation_window < 1)
        throw ContractError("stagnation window must be >= 1");
    const int dim = objective.dimension;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    Population x = detail::initial_population(objective, n_bats, seed, control);
    Population v = Population::Zero(n_bats, dim);
    std::vector<double> loudness(n_bats), r0(n_bats), pulse(n_bats, 0.0);
    std::vector<double> habitat(n_bats), compensation(n_bats), contraction(n_bats);
    for (int i = 0; i < n_bats; ++i)
    {
        Rng rng = make_rng(seed, {detail::kInitBranch, static_cast<std::uint64_t>(i), 1});
        loudness[i] = uniform(rng, config.loudness_min, config.loudness_max);
        r0[i] = uniform(rng, config.pulse_min, config.pulse_max);
        habitat[i] = uniform(rng, config.habitat_min, config.habitat_max);
        compensation[i] = uniform(rng, config.compensation_min, config.compensation_max);
        contraction[i] = uniform(rng, config.contraction_min, config.contraction_max);
    }
    std::vector<double> fitness = detail::evaluate_all(objective, x);
    Population pbest = x;
    std::vector<double> pcost = fitness;

    int gi = detail::argmin(fitness);
    std::vector<double> g = detail::row_vector(x, gi);
    double gcost = fitness[gi];
    Eigen::VectorXd v_best = Eigen::VectorXd::Zero(dim);

    Population cand(n_bats, dim);
    Population cand_v(n_bats, dim);
    std::vector<double> accept_draw(n_bats);
    int stall = 0;

    OptimizationResult result;
    result.trace.reserve(n_iterations);
    for (int t = 1; t <= n_iterations; ++t)
    {
        const double start_cost = gcost;
        const Eigen::RowVectorXd m = pbest.colwise().mean();
        const double a_mean = std::accumulate(loudness.begin(), loudness.end(), 0.0) / n_bats;

        for (int i = 0; i < n_bats; ++i)
        {
            Rng rng = make_rng(seed, {detail::kStepBranch, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)});
            cand_v.row(i) = v.row(i);
            if (uniform(rng, 0.0, 1.0) < habitat[i])
            {
                for (int j = 0; j < dim; ++j)
                {
                    const double u = uniform(rng, kQuantumFloor, 1.0);
                    const bool positive = uniform(rng, 0.0, 1.0) < habitat[i];
                    cand(i, j) = bat::quantum_step(g[j], m[j], x(i, j), contraction[i], u, positive);
                }
            }
            else
            {
                const double f = bat::frequency(config.f_min, config.f_max, uniform(rng, 0.0, 1.0));
                const double w = bat::stochastic_inertia(config.inertia_min, config.inertia_max, config.inertia_sigma,
                                                         uniform(rng, 0.0, 1.0), standard_normal(rng));
                for (int j = 0; j < dim; ++j)
                {
                    const double fj = bat::compensated_frequency(f, compensation[i], g[j], x(i, j), v(i, j), v_best[j],
                                                                 config.sound_speed, config.doppler_velocity_ratio);
                    cand_v(i, j) = w * v(i, j) + (g[j] - x(i, j)) * fj;
                    cand(i, j) = x(i, j) + cand_v(i, j);
                }
            }
            if (standard_normal(rng) > pulse[i])
            {
                const double spread = std::sqrt(std::abs(loudness[i] - a_mean) + eps);
                for (int j = 0; j < dim; ++j)
                    cand(i, j) = g[j] * (1.0 + spread * standard_normal(rng));
            }
            detail::clamp_row(objective, cand, i);
            accept_draw[i] = uniform(rng, 0.0, 1.0);
        }

        const std::vector<double> cost = detail::evaluate_all(objective, cand);
        for (int i = 0; i < n_bats; ++i)
        {
            v.row(i) = cand_v.row(i);
            if (cost[i] <= fitness[i] && accept_draw[i] < loudness[i])
            {
                x.row(i) = cand.row(i);
                fitness[i] = cost[i];
                loudness[i] *= config.alpha;
                pulse[i] = bat::pulse_rate(r0[i], config.gamma, t);
            }
            if (cost[i] < pcost[i])
            {
                pcost[i] = cost[i];
                pbest.row(i) = cand.row(i);
            }
            if (cost[i] < gcost)
            {
                gcost = cost[i];
                g = detail::row_vector(cand, i);
                v_best = cand_v.row(i).transpose();
            }
        }

        bool reset = false;
        stall = gcost < start_cost ? 0 : stall + 1;
        if (stall >= config.stagnation_window)
        {
            Rng rng = make_rng(seed, {detail::kResetBranch, static_cast<std::uint64_t>(t)});
            for (int i = 0; i < n_bats; ++i)
            {
                loudness[i] = uniform(rng, config.loudness_min, config.loudness_max);
                pulse[i] = uniform(rng, config.reset_pulse_min, config.reset_pulse_max);
            }
            stall = 0;
            reset = true;
        }

        result.trace.push_back(gcost);
        if (control.observer)
        {
            SwarmView view;
            view.iteration = t;
            view.positions = &x;
            view.loudness = loudness;
            view.pulse_rates = pulse;
            view.best_cost = gcost;
            view.loudness_reset = reset;
            control.observer(view);
        }
    }
    result.best_position = std::move(g);
    result.best_cost = gcost;
    return result;
}

} // namespace hadbf
