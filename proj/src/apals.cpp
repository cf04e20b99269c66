// SPDX-License-Identifier: Apache-2.0
#include "hadbf/apals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hadbf/random.hpp"

namespace hadbf
{

SearchGrid SearchGrid::uniform(int n_points)
{
    if (n_points < 2)
        throw ContractError("uniform search grid needs at least two points");
    return SearchGrid(angle_grid(n_points), kPi / (n_points - 1));
}

SearchGrid SearchGrid::from_points(std::vector<double> points)
{
    if (points.empty())
        throw ContractError("search grid is empty");
    for (double t : points)
        if (!std::isfinite(t) || std::abs(t) > kPi / 2.0 + 1e-12)
            throw DomainError("search grid angles must lie in [-pi/2, pi/2]");
    return SearchGrid(std::move(points), 0.0);
}

GuardPolicy GuardPolicy::tolerance(double tau)
{
    if (!(tau >= 0.0))
        throw ContractError("guard tolerance must be >= 0");
    return {Kind::kTolerance, tau};
}

GuardPolicy GuardPolicy::main_lobe(double fraction)
{
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ContractError("main-lobe fraction must lie in [0, 1]");
    return {Kind::kMainLobe, fraction};
}

namespace
{

struct MethodEntry
{
    Method method;
    std::string_view name;
};

constexpr MethodEntry kMethods[] = {
    {Method::kScb, "scb"},
    {Method::kDl, "dl"},
    {Method::kDlApals, "dl_apals"},
    {Method::kSmfApals, "smf_apals"},
    {Method::kBaApals, "ba_apals"},
    {Method::kPsoApals, "pso_apals"},
    {Method::kIbaApals, "iba_apals"},
};

} // namespace

std::string_view method_name(Method m)
{
    for (const auto &e : kMethods)
        if (e.method == m)
            return e.name;
    throw ContractError("unknown method");
}

Method parse_method(std::string_view name)
{
    for (const auto &e : kMethods)
        if (e.name == name)
            return e.method;
    throw ContractError("unknown method '" + std::string(name) + "'");
}

bool is_hybrid(Method m) { return m != Method::kScb && m != Method::kDl; }

bool is_swarm(Method m) { return m == Method::kBaApals || m == Method::kPsoApals || m == Method::kIbaApals; }

const std::vector<Method> &all_methods()
{
    static const std::vector<Method> v = [] {
        std::vector<Method> out;
        for (const auto &e : kMethods)
            out.push_back(e.method);
        return out;
    }();
    return v;
}

namespace
{

int thread_count(int requested, int work)
{
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, std::max(1, work / 256));
}

std::vector<ScanPoint> scan_grid(const Scenario &scenario, const SearchGrid &grid, const DigitalWeights &f_d,
                                 double presumed_theta, int n_threads)
{
    const CMatrix interference = weighted_interference_matrix(scenario);
    const CVector look = steering_vector(presumed_theta, scenario.n_antennas, scenario.element_spacing);
    const AnalogOptions analog{scenario.element_spacing, 0};
    const auto &pts = grid.points();
    std::vector<ScanPoint> out(pts.size());

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
        {
            const AnalogBeamformer f = analog_from_angle(pts[i], scenario.n_antennas, scenario.n_subarrays, analog);
            ScanPoint &p = out[i];
            p.theta = pts[i];
            p.cost = interference.cols() > 0 ? (f_d.vector().adjoint() * f.matrix().adjoint() * interference).squaredNorm()
                                             : 0.0;
            const CVector a_eff = f.reduce(look);
            p.residual = std::abs(f_d.vector().dot(a_eff) - Complex(1.0, 0.0));
            p.main_lobe = a_eff.squaredNorm();
        }
    };

    const int nt = thread_count(n_threads, static_cast<int>(pts.size()));
    if (nt == 1)
    {
        work(0, pts.size());
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (pts.size() + nt - 1) / nt;
    for (int t = 0; t < nt; ++t)
    {
        const std::size_t b = std::min(pts.size(), t * chunk);
        const std::size_t e = std::min(pts.size(), b + chunk);
        pool.emplace_back(work, b, e);
    }
    for (auto &th : pool)
        th.join();
    return out;
}

void apply_guard(std::vector<ScanPoint> &scan, const GuardPolicy &guard)
{
    switch (guard.kind)
    {
    case GuardPolicy::Kind::kGridResolution:
    {
        std::size_t k = 0;
        for (std::size_t i = 1; i < scan.size(); ++i)
            if (scan[i].residual < scan[k].residual)
                k = i;
        double limit = scan[k].residual;
        if (k > 0)
            limit = std::max(limit, scan[k - 1].residual);
        if (k + 1 < scan.size())
            limit = std::max(limit, scan[k + 1].residual);
        for (auto &p : scan)
            p.guard_pass = p.residual <= limit;
        break;
    }
    case GuardPolicy::Kind::kTolerance:
        for (auto &p : scan)
            p.guard_pass = p.residual <= guard.value;
        break;
    case GuardPolicy::Kind::kMainLobe:
    {
        double peak = 0.0;
        for (const auto &p : scan)
            peak = std::max(peak, p.main_lobe);
        for (auto &p : scan)
            p.guard_pass = p.main_lobe >= guard.value * peak;
        break;
    }
    }
}

ClosedFormMethod closed_form_for(Method m)
{
    switch (m)
    {
    case Method::kScb:
        return ClosedFormMethod::kScb;
    case Method::kDl:
    case Method::kDlApals:
        return ClosedFormMethod::kDl;
    case Method::kSmfApals:
        return ClosedFormMethod::kSmf;
    default:
        throw ContractError("method has no closed-form solver");
    }
}

void finish(HybridSolution &s, const Scenario &scenario)
{
    s.achieved_cost = cost_function(s.analog, s.digital, scenario);
    s.achieved_sinr = output_sinr(s.analog, s.digital, scenario);
}

} // namespace


namespace
{

struct AnalogSearch
{
    std::vector<ScanPoint> scan;
    std::size_t best = 0;
};

AnalogSearch analog_search(const Scenario &scenario, const BlockSource &source, const ApalsOptions &options,
                           double look)
{
    const AnalogOptions analog{scenario.element_spacing, 0};
    const AnalogBeamformer f0 = analog_from_angle(look, scenario.n_antennas, scenario.n_subarrays, analog);
    const DigitalWeights f_init =
        solve_digital(scenario, f0, source(f0), ClosedFormMethod::kDl, look, options.dl_level);

    AnalogSearch out;
    out.scan = scan_grid(scenario, options.grid, f_init, look, options.n_threads);
    apply_guard(out.scan, options.guard);

    out.best = out.scan.size();
    for (std::size_t i = 0; i < out.scan.size(); ++i)
        if (out.scan[i].guard_pass && (out.best == out.scan.size() || out.scan[i].cost < out.scan[out.best].cost))
            out.best = i;
    if (out.best == out.scan.size())
        throw SearchFailure("every grid point was rejected by the guard");
    return out;
}

HybridSolution finalize(const Scenario &scenario, Method method, const BlockSource &source,
                        const ApalsOptions &options, const AnalogSearch &search, double look,
                        std::uint64_t optimizer_seed)
{
    HybridSolution s;
    s.method = method;
    s.presumed_theta = look;
    s.optimized_angle = search.scan[search.best].theta;
    s.analog = analog_from_angle(*s.optimized_angle, scenario.n_antennas, scenario.n_subarrays,
                                 AnalogOptions{scenario.element_spacing, 0});

    if (!is_swarm(method))
    {
        s.digital = solve_digital(scenario, s.analog, source(s.analog), closed_form_for(method), look, options.dl_level);
    }
    else
    {
        const OptimizerSettings &opt = options.optimizer;
        PhaseObjectiveOptions phase = opt.phase;
        phase.presumed_theta = look;
        const ObjectiveAdapter objective = phase_only_objective(scenario, s.analog, phase);
        RunControl control;
        // co-phased start
        control.incumbent.assign(objective.dimension, phase.phase_lower);
        OptimizationResult r;
        if (method == Method::kIbaApals)
            r = iba_optimize(objective, opt.population, opt.iterations, optimizer_seed, opt.iba, control);
        else if (method == Method::kBaApals)
            r = ba_optimize(objective, opt.population, opt.iterations, optimizer_seed, opt.ba, control);
        else
            r = pso_optimize(objective, opt.population, opt.iterations, optimizer_seed, opt.pso, control);
        s.digital = phase_only_weights(scenario, s.analog, r.best_position, phase);
        s.cost_trace = std::move(r.trace);
    }
    finish(s, scenario);
    return s;
}

HybridSolution fully_digital(const Scenario &scenario, Method method, const BlockSource &source,
                             const ApalsOptions &options, double look)
{
    HybridSolution s;
    s.method = method;
    s.presumed_theta = look;
    s.analog = AnalogBeamformer::identity(scenario.n_antennas);
    s.digital = solve_digital(scenario, s.analog, source(s.analog), closed_form_for(method), look, options.dl_level);
    finish(s, scenario);
    return s;
}

double presumed_look(const Scenario &scenario, std::uint64_t seed)
{
    double look = scenario.theta_desired;
    if (scenario.doa_mismatch_max > 0.0)
    {
        Rng rng = make_rng(seed, {tag(Stream::kMismatch)});
        look += uniform(rng, -scenario.doa_mismatch_max, scenario.doa_mismatch_max);
    }
    return look;
}

// Every analog matrix sees the same source and noise draws.
BlockSource seeded_source(const Scenario &scenario, std::uint64_t seed)
{
    return [&scenario, seed](const AnalogBeamformer &f) {
        Rng rng = make_rng(seed, {tag(Stream::kSnapshots)});
        return generate_snapshots(scenario, f, rng);
    };
}

} // namespace

ApalsResult apals_search(const Scenario &scenario, Method method, const BlockSource &source,
                         const ApalsOptions &options, std::optional<double> presumed_theta,
                         std::uint64_t optimizer_seed)
{
    scenario.validate();
    if (!is_hybrid(method))
        throw ContractError("apals_search needs a hybrid method, got " + std::string(method_name(method)));
    if (!source)
        throw ContractError("apals_search needs a snapshot source");
    const double look = presumed_theta.value_or(scenario.theta_desired);
    AnalogSearch search = analog_search(scenario, source, options, look);
    ApalsResult result;
    result.solution = finalize(scenario, method, source, options, search, look, optimizer_seed);
    if (options.keep_scan)
        result.scan = std::move(search.scan);
    return result;
}

std::vector<HybridSolution> run_pipelines(const Scenario &scenario, const std::vector<Method> &methods,
                                          std::uint64_t seed, const ApalsOptions &options)
{
    scenario.validate();
    const double look = presumed_look(scenario, seed);
    const BlockSource source = seeded_source(scenario, seed);
    const std::uint64_t opt_seed = derive_seed(seed, {tag(Stream::kOptimizer)});
    std::optional<AnalogSearch> search;
    std::vector<HybridSolution> out;
    out.reserve(methods.size());
    for (Method m : methods)
    {
        if (!is_hybrid(m))
        {
            out.push_back(fully_digital(scenario, m, source, options, look));
            continue;
        }
        if (!search)
            search = analog_search(scenario, source, options, look);
        out.push_back(finalize(scenario, m, source, options, *search, look, opt_seed));
    }
    return out;
}

ApalsResult run_pipeline_with_scan(const Scenario &scenario, Method method, std::uint64_t seed,
                                   const ApalsOptions &options)
{
    scenario.validate();
    const double look = presumed_look(scenario, seed);
    const BlockSource source = seeded_source(scenario, seed);
    if (is_hybrid(method))
        return apals_search(scenario, method, source, options, look, derive_seed(seed, {tag(Stream::kOptimizer)}));
    ApalsResult result;
    result.solution = fully_digital(scenario, method, source, options, look);
    return result;
}

HybridSolution run_pipeline(const Scenario &scenario, Method method, std::uint64_t seed, const ApalsOptions &options)
{
    return run_pipeline_with_scan(scenario, method, seed, options).solution;
}

} // namespace hadbf
