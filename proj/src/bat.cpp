// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>

#include "swarm_util.hpp"

namespace hadbf
{

namespace bat
{

double frequency(double f_min, double f_max, double beta) { return f_min + (f_max - f_min) * beta; }

double pulse_rate(double r0, double gamma, int t) { return r0 * (1.0 - std::exp(-gamma * t)); }

double loudness_after(double a0, double alpha, int n_updates) { return a0 * std::pow(alpha, n_updates); }

double quantum_step(double g, double m, double x, double eta, double u, bool positive)
{
    if (!(u > 0.0) || u > 1.0)
        throw DomainError("quantum step needs u in (0, 1]");
    const double step = eta * std::abs(m - x) * std::log(1.0 / u);
    return positive ? g + step : g - step;
}

double stochastic_inertia(double mu_min, double mu_max, double sigma, double rand01, double randn)
{
    return mu_min + (mu_max - mu_min) * rand01 + sigma * randn;
}

double compensated_frequency(double f, double compensation, double g, double x, double v_bat, double v_best,
                             double sound_speed, bool velocity_ratio)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double ratio = 1.0;
    if (velocity_ratio)
    {
        const double den = sound_speed + v_best;
        ratio = std::abs(den) > eps ? (sound_speed + v_bat) / den : 1.0;
    }
    return f * (1.0 + compensation * (g - x) / (std::abs(g - x) + eps) * ratio);
}

} // namespace bat

namespace
{

double mean_of(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

} // namespace

OptimizationResult ba_optimize(const ObjectiveAdapter &objective, int n_bats, int n_iterations, std::uint64_t seed,
                               const BatConfig &config, const RunControl &control)
{
    detail::check_swarm(objective, n_bats, n_iterations);
    const int dim = objective.dimension;

    Population x = detail::initial_population(objective, n_bats, seed, control);
    Population v = Population::Zero(n_bats, dim);
    std::vector<double> loudness(n_bats), r0(n_bats), pulse(n_bats, 0.0);
    for (int i = 0; i < n_bats; ++i)
    {
        Rng rng = make_rng(seed, {detail::kInitBranch, static_cast<std::uint64_t>(i), 1});
        loudness[i] = uniform(rng, config.loudness_min, config.loudness_max);
        r0[i] = uniform(rng, config.pulse_min, config.pulse_max);
    }
    std::vector<double> fitness = detail::evaluate_all(objective, x);
    int gi = detail::argmin(fitness);
    std::vector<double> g = detail::row_vector(x, gi);
    double gcost = fitness[gi];

    Population cand(n_bats, dim);
    std::vector<double> accept_draw(n_bats);

    OptimizationResult result;
    result.trace.reserve(n_iterations);
    for (int t = 1; t <= n_iterations; ++t)
    {
        const double a_mean = mean_of(loudness);
        for (int i = 0; i < n_bats; ++i)
        {
            Rng rng = make_rng(seed, {detail::kStepBranch, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)});
            const double f = bat::frequency(config.f_min, config.f_max, uniform(rng, 0.0, 1.0));
            for (int j = 0; j < dim; ++j)
            {
                const double pull = config.attract_to_best ? g[j] - x(i, j) : x(i, j) - g[j];
                v(i, j) += pull * f;
                cand(i, j) = x(i, j) + v(i, j);
            }
            if (uniform(rng, 0.0, 1.0) > pulse[i])
                for (int j = 0; j < dim; ++j)
                    cand(i, j) = g[j] + uniform(rng, -1.0, 1.0) * a_mean;
            detail::clamp_row(objective, cand, i);
            accept_draw[i] = uniform(rng, 0.0, 1.0);
        }

        const std::vector<double> cost = detail::evaluate_all(objective, cand);
        for (int i = 0; i < n_bats; ++i)
        {
            if (accept_draw[i] < loudness[i] && cost[i] < fitness[i])
            {
                x.row(i) = cand.row(i);
                fitness[i] = cost[i];
                loudness[i] *= config.alpha;
                pulse[i] = bat::pulse_rate(r0[i], config.gamma, t);
            }
            if (cost[i] < gcost)
            {
                gcost = cost[i];
                g = detail::row_vector(cand, i);
            }
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
            control.observer(view);
        }
    }
    result.best_position = std::move(g);
    result.best_cost = gcost;
    return result;
}

} // namespace hadbf
