#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hadbf/experiments.hpp"
#include "hadbf/metaheuristics.hpp"

using namespace hadbf;

namespace
{

ObjectiveAdapter quadratic_1d(double x0)
{
    ObjectiveAdapter o;
    o.dimension = 1;
    o.lower_bounds = {-5.0};
    o.upper_bounds = {5.0};
    o.evaluate = [x0](std::span<const double> x) { return (x[0] - x0) * (x[0] - x0); };
    return o;
}

ObjectiveAdapter sphere(int dim)
{
    ObjectiveAdapter o;
    o.dimension = dim;
    o.lower_bounds.assign(dim, -2.0);
    o.upper_bounds.assign(dim, 3.0);
    o.evaluate = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x)
            s += (v - 0.7) * (v - 0.7) + 0.1 * std::sin(7 * v) * std::sin(7 * v);
        return s;
    };
    return o;
}

using Runner = std::function<OptimizationResult(const ObjectiveAdapter &, int, int, std::uint64_t, const RunControl &)>;

std::vector<std::pair<const char *, Runner>> runners()
{
    return {
        {"pso", [](const ObjectiveAdapter &o, int n, int t, std::uint64_t s,
                   const RunControl &c) { return pso_optimize(o, n, t, s, {}, c); }},
        {"ba", [](const ObjectiveAdapter &o, int n, int t, std::uint64_t s,
                  const RunControl &c) { return ba_optimize(o, n, t, s, {}, c); }},
        {"ba_attract", [](const ObjectiveAdapter &o, int n, int t, std::uint64_t s, const RunControl &c) {
             BatConfig cfg;
             cfg.attract_to_best = true;
             return ba_optimize(o, n, t, s, cfg, c);
         }},
        {"iba", [](const ObjectiveAdapter &o, int n, int t, std::uint64_t s,
                   const RunControl &c) { return iba_optimize(o, n, t, s, {}, c); }},
        {"iba_doppler", [](const ObjectiveAdapter &o, int n, int t, std::uint64_t s, const RunControl &c) {
             ImprovedBatConfig cfg;
             cfg.doppler_velocity_ratio = true;
             return iba_optimize(o, n, t, s, cfg, c);
         }},
    };
}

int last_improvement(const std::vector<double> &trace)
{
    int k = 0;
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] < trace[i - 1] * (1 - 1e-9))
            k = static_cast<int>(i);
    return k;
}

} // namespace

TEST_CASE("PSO solves a convex scalar problem")
{
    const OptimizationResult r = pso_optimize(quadratic_1d(1.3), 40, 100, 17);
    CHECK(r.best_cost < 1e-6);
    CHECK(r.best_position[0] == doctest::Approx(1.3).epsilon(1e-3));
}

TEST_CASE("constant objective is reported after the first iteration")
{
    ObjectiveAdapter o = quadratic_1d(0.0);
    o.evaluate = [](std::span<const double>) { return 4.25; };
    for (auto &[name, run] : runners())
    {
        CAPTURE(name);
        const OptimizationResult r = run(o, 10, 5, 3, {});
        REQUIRE(r.trace.size() == 5);
        CHECK(r.trace[0] == 4.25);
        CHECK(r.best_cost == 4.25);
    }
}

TEST_CASE("traces are non-increasing and end at the best cost")
{
    const ObjectiveAdapter o = sphere(4);
    for (auto &[name, run] : runners())
        for (std::uint64_t seed : {1u, 2u, 3u})
        {
            CAPTURE(name);
            CAPTURE(seed);
            const OptimizationResult r = run(o, 20, 60, seed, {});
            REQUIRE(r.trace.size() == 60);
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                CHECK(r.trace[i] <= r.trace[i - 1]);
            CHECK(r.best_cost == *std::min_element(r.trace.begin(), r.trace.end()));
            CHECK(r.best_cost == r.trace.back());
            CHECK(o.evaluate(r.best_position) == r.best_cost);
        }
}

TEST_CASE("positions stay inside the bounds")
{
    const ObjectiveAdapter o = sphere(3);
    for (auto &[name, run] : runners())
    {
        CAPTURE(name);
        int calls = 0;
        bool inside = true;
        RunControl c;
        c.observer = [&](const SwarmView &v) {
            ++calls;
            const Population &p = *v.positions;
            for (Eigen::Index i = 0; i < p.rows(); ++i)
                for (int j = 0; j < o.dimension; ++j)
                    inside = inside && p(i, j) >= o.lower_bounds[j] && p(i, j) <= o.upper_bounds[j];
        };
        run(o, 15, 40, 9, c);
        CHECK(calls == 40);
        CHECK(inside);
    }
}

TEST_CASE("identical seeds give identical runs")
{
    const ObjectiveAdapter o = sphere(4);
    for (auto &[name, run] : runners())
    {
        CAPTURE(name);
        const OptimizationResult a = run(o, 12, 30, 77, {});
        const OptimizationResult b = run(o, 12, 30, 77, {});
        const OptimizationResult c = run(o, 12, 30, 78, {});
        CHECK(a.trace == b.trace);
        CHECK(a.best_position == b.best_position);
        CHECK(a.trace != c.trace);
    }
}

TEST_CASE("the incumbent is never lost")
{
    const ObjectiveAdapter o = sphere(2);
    RunControl c;
    c.incumbent = {0.7, 0.7};
    const double incumbent_cost = o.evaluate(c.incumbent);
    for (auto &[name, run] : runners())
    {
        CAPTURE(name);
        const OptimizationResult r = run(o, 5, 3, 4, c);
        CHECK(r.trace[0] <= incumbent_cost);
    }
    RunControl wrong;
    wrong.incumbent = {1.0};
    CHECK_THROWS_AS(pso_optimize(o, 5, 3, 4, {}, wrong), ContractError);
}

TEST_CASE("invalid sizes are contract errors")
{
    const ObjectiveAdapter o = sphere(2);
    CHECK_THROWS_AS(pso_optimize(o, 1, 10, 0), ContractError);
    CHECK_THROWS_AS(ba_optimize(o, 1, 10, 0), ContractError);
    CHECK_THROWS_AS(iba_optimize(o, 1, 10, 0), ContractError);
    CHECK_THROWS_AS(iba_optimize(o, 10, 0, 0), ContractError);
    ObjectiveAdapter bad = o;
    bad.upper_bounds = {1.0};
    CHECK_THROWS_AS(ba_optimize(bad, 5, 5, 0), ContractError);
}

TEST_CASE("bat update primitives")
{
    CHECK(bat::loudness_after(2.0, 0.9, 3) == doctest::Approx(1.458));
    CHECK(bat::frequency(0.0, 2.0, 0.0) == 0.0);
    CHECK(bat::frequency(0.0, 2.0, 1.0) == 2.0);
    CHECK(bat::frequency(0.0, 1.5, 0.5) == doctest::Approx(0.75));
    CHECK(bat::stochastic_inertia(0.4, 0.9, 0.2, 0.0, 0.0) == doctest::Approx(0.4));
    CHECK(bat::stochastic_inertia(0.4, 0.9, 0.2, 1.0, 1.0) == doctest::Approx(1.1));
    CHECK(bat::quantum_step(0.3, 0.3, 0.3, 0.8, 0.5, true) == 0.3);
    CHECK(bat::quantum_step(0.3, 0.3, 0.3, 0.8, 0.5, false) == 0.3);
    CHECK(bat::quantum_step(1.0, 2.0, 0.0, 0.5, std::exp(-1.0), true) == doctest::Approx(2.0));
    CHECK(bat::quantum_step(1.0, 2.0, 0.0, 0.5, std::exp(-1.0), false) == doctest::Approx(0.0));
}

TEST_CASE("quantum step stays finite on (0, 1]")
{
    for (double u : {kQuantumFloor, 1e-6, 0.5, 1.0})
        CHECK(std::isfinite(bat::quantum_step(0.1, 0.4, -0.2, 1.0, u, true)));
    CHECK(bat::quantum_step(0.1, 0.4, -0.2, 1.0, 1.0, true) == doctest::Approx(0.1));
    CHECK_THROWS_AS(bat::quantum_step(0.0, 1.0, 0.0, 1.0, 0.0, true), DomainError);
    CHECK_THROWS_AS(bat::quantum_step(0.0, 1.0, 0.0, 1.0, 1.5, true), DomainError);
}

TEST_CASE("pulse rate rises monotonically toward r0")
{
    for (double r0 : {0.0, 0.3, 1.0})
    {
        double prev = -1.0;
        for (int t = 0; t < 200; ++t)
        {
            const double r = bat::pulse_rate(r0, 0.9, t);
            CHECK(r >= prev);
            CHECK(r <= r0);
            prev = r;
        }
    }
    CHECK(bat::pulse_rate(0.8, 0.9, 0) == 0.0);
}

TEST_CASE("compensated frequency")
{
    CHECK(bat::compensated_frequency(1.0, 0.5, 2.0, 2.0, 0.0, 0.0, 340.0, false) == doctest::Approx(1.0));
    CHECK(bat::compensated_frequency(1.0, 0.5, 3.0, 1.0, 0.0, 0.0, 340.0, false) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(bat::compensated_frequency(1.0, 0.5, 1.0, 3.0, 0.0, 0.0, 340.0, false) == doctest::Approx(0.5).epsilon(1e-6));
    const double ratio = bat::compensated_frequency(1.0, 0.5, 3.0, 1.0, 10.0, 0.0, 340.0, true);
    CHECK(ratio == doctest::Approx(1.0 + 0.5 * 350.0 / 340.0).epsilon(1e-6));
}

TEST_CASE("loudness only decays between stagnation resets")
{
    ObjectiveAdapter o = quadratic_1d(0.0);
    o.evaluate = [](std::span<const double> x) { return std::floor(std::abs(x[0])); }; // plateaus force resets
    int resets = 0;
    bool decays = true, pulses_in_range = true;
    std::vector<double> prev;
    RunControl c;
    c.observer = [&](const SwarmView &v) {
        std::vector<double> cur(v.loudness.begin(), v.loudness.end());
        if (v.loudness_reset)
        {
            ++resets;
            for (double r : v.pulse_rates)
                pulses_in_range = pulses_in_range && r >= 0.85 && r <= 0.9;
        }
        else if (!prev.empty())
            for (std::size_t i = 0; i < cur.size(); ++i)
                decays = decays && cur[i] <= prev[i];
        prev = cur;
    };
    iba_optimize(o, 10, 50, 5, {}, c);
    CHECK(resets > 0);
    CHECK(decays);
    CHECK(pulses_in_range);

    // BA has no reset
    prev.clear();
    bool ba_decays = true;
    RunControl cb;
    cb.observer = [&](const SwarmView &v) {
        std::vector<double> cur(v.loudness.begin(), v.loudness.end());
        CHECK_FALSE(v.loudness_reset);
        if (!prev.empty())
            for (std::size_t i = 0; i < cur.size(); ++i)
                ba_decays = ba_decays && cur[i] <= prev[i];
        prev = cur;
    };
    ba_optimize(sphere(2), 10, 30, 5, {}, cb);
    CHECK(ba_decays);
}

TEST_CASE("phase-only objective scores the distortionless weights")
{
    const Scenario s = reference_scenario(16, 128, 0.0);
    const AnalogBeamformer f = analog_from_angle(1e-4, 16, 4);
    const ObjectiveAdapter o = phase_only_objective(s, f);
    const std::vector<double> x = {0.1, 0.2, 0.05, 0.3};
    CHECK(o.evaluate(x) == doctest::Approx(cost_function(f, phase_only_weights(s, f, x), s)).epsilon(1e-12));
    PhaseObjectiveOptions raw;
    raw.distortionless = false;
    const ObjectiveAdapter r = phase_only_objective(s, f, raw);
    CHECK(r.evaluate(x) == doctest::Approx(cost_function(f, DigitalWeights::from_phases(x), s)).epsilon(1e-12));
    CHECK(o.lower_bounds == std::vector<double>(4, 0.0));
    PhaseObjectiveOptions empty;
    empty.phase_upper = empty.phase_lower;
    CHECK_THROWS_AS(phase_only_objective(s, f, empty), ContractError);
}

TEST_CASE("BA stagnates earlier and higher than the improved variant")
{
    struct Panel
    {
        int n, q;
        double snr_d;
    };
    for (const Panel p : {Panel{16, 128, 0.0}, Panel{32, 200, -15.0}})
    {
        CAPTURE(p.n);
        RunConfig c = figure_config("fig7");
        c.scenario = reference_scenario(p.n, p.q, p.snr_d);
        c.options.n_threads = 1;
        int hits = 0;
        for (int t = 0; t < 20; ++t)
        {
            const ConvergenceTrial r = convergence_trial(c, trial_seed(42, t));
            if (r.ba.back() > r.iba.back() && last_improvement(r.ba) <= last_improvement(r.iba))
                ++hits;
        }
        CHECK(hits >= 14);
    }
}
