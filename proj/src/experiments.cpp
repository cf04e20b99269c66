// SPDX-License-Identifier: Apache-2.0
#include "hadbf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include <Eigen/Cholesky>

#include "hadbf/version.hpp"

namespace hadbf
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

const std::vector<Method> kFig2Methods = {Method::kScb, Method::kDl, Method::kDlApals, Method::kSmfApals,
                                          Method::kIbaApals};
const std::vector<Method> kSnapshotMethods = {Method::kScb, Method::kDl, Method::kIbaApals};
const std::vector<Method> kFig8Methods = {Method::kDl, Method::kSmfApals};
const std::vector<double> kFig8Snr = {-10.0, 0.0, 10.0};

struct Fig7Panel
{
    char label;
    int n_antennas;
    int n_snapshots;
    double snr_desired_db;
    double snr_interferer_db;
};

constexpr Fig7Panel kFig7Panels[] = {
    {'a', 16, 128, 0.0, 15.0},
    {'b', 32, 200, -15.0, 15.0},
    {'c', 16, 128, -15.0, 30.0},
    {'d', 32, 200, 0.0, 30.0},
};

std::vector<double> range(double lo, double hi, double step)
{
    std::vector<double> v;
    for (int i = 0;; ++i)
    {
        const double x = lo + i * step;
        if (x > hi + 1e-9)
            break;
        v.push_back(x);
    }
    return v;
}

bool known_figure(const std::string &id)
{
    const auto &ids = figure_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

void set_interferer_snr(Scenario &s, double db) { s.snr_interferer_db.assign(s.theta_interferers.size(), db); }

void apply_axis(RunConfig &cfg, const std::string &axis, double x)
{
    Scenario &s = cfg.scenario;
    if (axis == "snr_desired_db")
        s.snr_desired_db = x;
    else if (axis == "n_antennas")
        s.n_antennas = static_cast<int>(std::lround(x));
    else if (axis == "n_snapshots")
        s.n_snapshots = static_cast<int>(std::lround(x));
    else if (axis == "snr_interferer_db")
        set_interferer_snr(s, x);
    else if (axis == "doa_mismatch_max_deg")
        s.doa_mismatch_max = deg_to_rad(x);
    else if (axis == "panel")
    {
        const int p = static_cast<int>(std::lround(x));
        if (p < 0 || p > 3)
            throw ContractError("fig7 panel index must be 0..3");
        const Fig7Panel &fp = kFig7Panels[p];
        s.n_antennas = fp.n_antennas;
        s.n_snapshots = fp.n_snapshots;
        s.snr_desired_db = fp.snr_desired_db;
        set_interferer_snr(s, fp.snr_interferer_db);
    }
    else
        throw ContractError("unknown sweep axis '" + axis + "'");
    s.validate();
}

std::string mname(Method m) { return std::string(method_name(m)); }

std::string db_tag(double v)
{
    const long r = std::lround(v);
    return (r < 0 ? "m" : "") + std::to_string(std::labs(r));
}

class Writer
{
public:
    Writer(fs::path dir, std::string figure) : dir_(std::move(dir)), figure_(std::move(figure)) {}

    void text(const std::string &name, const std::string &body)
    {
        const fs::path p = dir_ / (figure_ + "_" + name + ".csv");
        write_text_file(p, body);
        files_.push_back(p);
    }

    void curve(const std::string &name, const std::vector<double> &x, const std::vector<std::vector<double>> &samples)
    {
        CsvWriter csv({"x_value", "mean_metric", "std_metric", "n_trials"});
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const Stats st = describe(samples[i]);
            csv.row(std::vector<std::string>{format_double(x[i]), format_double(st.mean), format_double(st.std),
                                             std::to_string(st.n)});
        }
        text(name, csv.str());
        curves_.push_back(name);
    }

    const std::vector<fs::path> &files() const { return files_; }
    const std::vector<std::string> &curves() const { return curves_; }

private:
    fs::path dir_;
    std::string figure_;
    std::vector<fs::path> files_;
    std::vector<std::string> curves_;
};

// results[x][trial][method]
using Grid3 = std::vector<std::vector<std::vector<HybridSolution>>>;

Grid3 run_grid(const RunConfig &base, const SweepAxis &axis, const std::vector<Method> &methods, int n_trials,
               std::uint64_t master, int n_threads)
{
    const int nx = static_cast<int>(axis.values.size());
    Grid3 out(nx, std::vector<std::vector<HybridSolution>>(n_trials));
    std::vector<RunConfig> cfgs(nx, base);
    for (int i = 0; i < nx; ++i)
    {
        apply_axis(cfgs[i], axis.name, axis.values[i]);
        cfgs[i].options.n_threads = 1;
        cfgs[i].options.keep_scan = false;
    }
    parallel_for(nx * n_trials, n_threads, [&](int k) {
        const int i = k / n_trials;
        const int t = k % n_trials;
        out[i][t] = run_pipelines(cfgs[i].scenario, methods, trial_seed(master, t), cfgs[i].options);
    });
    return out;
}

std::vector<std::vector<double>> sinr_samples(const Grid3 &g, std::size_t method_index)
{
    std::vector<std::vector<double>> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto &trial : g[i])
            s[i].push_back(trial[method_index].achieved_sinr);
    return s;
}

void trace_curve(Writer &w, const std::string &name, const std::vector<std::vector<double>> &traces)
{
    if (traces.empty())
        return;
    const std::size_t n = traces.front().size();
    std::vector<double> x(n);
    std::vector<std::vector<double>> samples(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        x[i] = static_cast<double>(i + 1);
        for (const auto &t : traces)
            samples[i].push_back(t[i]);
    }
    w.curve(name, x, samples);
}

json sweep_json(const SweepAxis &a) { return {{"name", a.name}, {"values", a.values}}; }

void run_sinr_figure(const ExperimentSpec &spec, const RunConfig &cfg, const SweepAxis &axis, Writer &w,
                     json &extra)
{
    const std::string &id = spec.figure_id;
    if (id == "fig2" || id == "fig9")
    {
        const Grid3 g = run_grid(cfg, axis, kFig2Methods, spec.n_trials, spec.seed, spec.n_threads);
        std::vector<std::vector<std::vector<double>>> all;
        for (std::size_t m = 0; m < kFig2Methods.size(); ++m)
        {
            all.push_back(sinr_samples(g, m));
            w.curve(mname(kFig2Methods[m]), axis.values, all.back());
        }
        std::vector<std::vector<double>> opt(axis.values.size());
        for (std::size_t i = 0; i < axis.values.size(); ++i)
        {
            RunConfig c = cfg;
            apply_axis(c, axis.name, axis.values[i]);
            c.scenario.doa_mismatch_max = 0.0;
            opt[i].assign(1, optimal_sinr_db(c.scenario));
        }
        w.curve("optimal", axis.values, opt);

        if (id == "fig9")
        {
            // matched-look reference for the mismatch loss
            RunConfig matched = cfg;
            matched.scenario.doa_mismatch_max = 0.0;
            const Grid3 g0 = run_grid(matched, axis, kFig2Methods, spec.n_trials, spec.seed, spec.n_threads);
            for (std::size_t m = 0; m < kFig2Methods.size(); ++m)
                w.curve(mname(kFig2Methods[m]) + "_matched", axis.values, sinr_samples(g0, m));
        }

        std::vector<std::string> header = {"x_value"};
        for (Method m : kFig2Methods)
            header.push_back(mname(m));
        header.push_back("optimal");
        CsvWriter table(header);
        for (std::size_t i = 0; i < axis.values.size(); ++i)
        {
            std::vector<double> row = {axis.values[i]};
            for (const auto &curve : all)
                row.push_back(describe(curve[i]).mean);
            row.push_back(opt[i][0]);
            table.row(row);
        }
        w.text("sinr", table.str());
        return;
    }

    if (id == "fig3" || id == "fig4")
    {
        const std::vector<int> qs = {32, 128};
        for (int q : qs)
        {
            RunConfig c = cfg;
            c.scenario.n_snapshots = q;
            const Grid3 g = run_grid(c, axis, kSnapshotMethods, spec.n_trials, spec.seed, spec.n_threads);
            for (std::size_t m = 0; m < kSnapshotMethods.size(); ++m)
                w.curve(mname(kSnapshotMethods[m]) + "_q" + std::to_string(q), axis.values, sinr_samples(g, m));
            for (std::size_t i = 0; i < axis.values.size(); ++i)
            {
                if (axis.name != "snr_desired_db" || std::abs(axis.values[i]) > 1e-12)
                    continue;
                std::vector<std::vector<double>> traces;
                for (const auto &trial : g[i])
                    traces.push_back(trial[2].cost_trace);
                trace_curve(w, "convergence_q" + std::to_string(q), traces);
            }
        }
        return;
    }

    if (id == "fig8")
    {
        for (double snr : kFig8Snr)
        {
            RunConfig c = cfg;
            c.scenario.snr_desired_db = snr;
            const Grid3 g = run_grid(c, axis, kFig8Methods, spec.n_trials, spec.seed, spec.n_threads);
            for (std::size_t m = 0; m < kFig8Methods.size(); ++m)
                w.curve(mname(kFig8Methods[m]) + "_snr" + db_tag(snr), axis.values, sinr_samples(g, m));
        }
        extra["fig8_snr_desired_db"] = kFig8Snr;
        return;
    }
}

void run_pattern_figure(const ExperimentSpec &spec, const RunConfig &cfg, const SweepAxis &axis, Writer &w)
{
    if (axis.values.size() != 1)
        throw ContractError(spec.figure_id + " takes a single sweep value");
    const Grid3 g = run_grid(cfg, axis, kFig2Methods, spec.n_trials, spec.seed, spec.n_threads);
    const std::vector<double> grid = angle_grid(1801);
    std::vector<double> deg(grid.size());
    std::transform(grid.begin(), grid.end(), deg.begin(), rad_to_deg);
    for (std::size_t m = 0; m < kFig2Methods.size(); ++m)
    {
        std::vector<std::vector<double>> samples(grid.size());
        for (const auto &trial : g[0])
        {
            const auto p = beampattern(trial[m].analog, trial[m].digital, grid, cfg.scenario.element_spacing);
            for (std::size_t i = 0; i < grid.size(); ++i)
                samples[i].push_back(p[i]);
        }
        w.curve(mname(kFig2Methods[m]), deg, samples);
        const HybridSolution &first = g[0][0][m];
        w.text(mname(kFig2Methods[m]) + "_pattern",
               beampattern_csv(first.analog, first.digital, grid, cfg.scenario.element_spacing));
    }
}

void run_table(const ExperimentSpec &spec, const RunConfig &cfg, const SweepAxis &axis, Writer &w)
{
    if (axis.values.size() != 1)
        throw ContractError(spec.figure_id + " takes a single sweep value");
    const Grid3 g = run_grid(cfg, axis, kFig2Methods, spec.n_trials, spec.seed, spec.n_threads);
    RunConfig c = cfg;
    apply_axis(c, axis.name, axis.values[0]);

    CsvWriter trials({"trial", "seed", "method", "null_m30_tabulated_db", "null_60_tabulated_db",
                      "null_m30_power_db", "null_60_power_db", "optimized_angle_rad", "sinr_db"});
    CsvWriter summary({"method", "mean_m30_db", "mean_60_db", "reference_m30_db", "reference_60_db", "delta_m30_db",
                       "delta_60_db", "fraction_both_le_m30", "mean_optimized_angle_rad"});
    const auto &refs = table_reference(spec.figure_id);
    const std::vector<double> angles = {-30.0, 60.0};
    for (std::size_t m = 0; m < kFig2Methods.size(); ++m)
    {
        std::vector<double> m30, p60, m30p, p60p, theta;
        int both = 0;
        for (int t = 0; t < spec.n_trials; ++t)
        {
            const HybridSolution &s = g[0][t][m];
            const NullDepths nd = null_depths(s, c.scenario);
            m30.push_back(nd.at_m30_tabulated);
            p60.push_back(nd.at_60_tabulated);
            m30p.push_back(nd.at_m30_power);
            p60p.push_back(nd.at_60_power);
            both += nd.at_m30_tabulated <= -30.0 && nd.at_60_tabulated <= -30.0;
            const double th = s.optimized_angle.value_or(std::nan(""));
            if (s.optimized_angle)
                theta.push_back(th);
            trials.row(std::vector<std::string>{std::to_string(t), std::to_string(trial_seed(spec.seed, t)),
                                                mname(kFig2Methods[m]), format_double(nd.at_m30_tabulated),
                                                format_double(nd.at_60_tabulated), format_double(nd.at_m30_power),
                                                format_double(nd.at_60_power), format_double(th),
                                                format_double(s.achieved_sinr)});
        }
        w.curve(mname(kFig2Methods[m]), angles, {m30, p60});
        w.curve(mname(kFig2Methods[m]) + "_power", angles, {m30p, p60p});

        double r30 = std::nan(""), r60 = std::nan("");
        for (const auto &r : refs)
            if (r.method == kFig2Methods[m])
            {
                r30 = r.at_m30;
                r60 = r.at_60;
            }
        const double a = describe(m30).mean, b = describe(p60).mean;
        summary.row(std::vector<std::string>{
            mname(kFig2Methods[m]), format_double(a), format_double(b), format_double(r30), format_double(r60),
            format_double(a - r30), format_double(b - r60), format_double(static_cast<double>(both) / spec.n_trials),
            format_double(theta.empty() ? std::nan("") : describe(theta).mean)});
    }
    w.text("trials", trials.str());
    w.text("summary", summary.str());
}

void run_convergence(const ExperimentSpec &spec, const RunConfig &cfg, const SweepAxis &axis, Writer &w)
{
    for (double p : axis.values)
    {
        RunConfig c = cfg;
        apply_axis(c, "panel", p);
        c.options.n_threads = 1;
        const char label = kFig7Panels[static_cast<int>(std::lround(p))].label;
        const std::string tag(1, label);
        std::vector<ConvergenceTrial> runs(spec.n_trials);
        parallel_for(spec.n_trials, spec.n_threads,
                     [&](int t) { runs[t] = convergence_trial(c, trial_seed(spec.seed, t)); });
        std::vector<std::vector<double>> iba, ba, pso;
        CsvWriter fin({"trial", "seed", "iba", "ba", "pso"});
        for (int t = 0; t < spec.n_trials; ++t)
        {
            iba.push_back(runs[t].iba);
            ba.push_back(runs[t].ba);
            pso.push_back(runs[t].pso);
            fin.row(std::vector<std::string>{std::to_string(t), std::to_string(trial_seed(spec.seed, t)),
                                             format_double(runs[t].iba.back()), format_double(runs[t].ba.back()),
                                             format_double(runs[t].pso.back())});
        }
        trace_curve(w, std::string(1, label) + "_iba", iba);
        trace_curve(w, std::string(1, label) + "_ba", ba);
        trace_curve(w, std::string(1, label) + "_pso", pso);
        w.text(tag + "_final_cf", fin.str());
    }
}

} // namespace

const std::vector<std::string> &figure_ids()
{
    static const std::vector<std::string> ids = {"fig2", "fig3", "fig4", "fig5",  "fig6",
                                                 "fig7", "fig8", "fig9", "table2", "table3"};
    return ids;
}

void ExperimentSpec::validate() const
{
    if (!known_figure(figure_id))
        throw ContractError("unknown figure id '" + figure_id + "'");
    if (n_trials < 1)
        throw ContractError("n_trials must be >= 1");
    if (sweep && sweep->values.empty())
        throw ContractError("sweep axis '" + sweep->name + "' has no values");
    if (output_dir.empty())
        throw ContractError("output directory is required");
}

RunConfig figure_config(const std::string &id, const RunConfig &base)
{
    if (!known_figure(id))
        throw ContractError("unknown figure id '" + id + "'");
    RunConfig c = base;
    Scenario &s = c.scenario;
    auto pin = [&](int n, int q) {
        s.n_antennas = n;
        s.n_snapshots = q;
    };
    if (id == "fig2" || id == "fig4" || id == "fig6" || id == "table3")
        pin(32, 128);
    else if (id == "fig3" || id == "fig5" || id == "table2")
        pin(16, 128);
    else if (id == "fig8")
        s.n_snapshots = 128;
    else if (id == "fig9")
    {
        pin(16, 200);
        if (s.doa_mismatch_max == 0.0)
            s.doa_mismatch_max = deg_to_rad(3.0);
    }
    if (id != "fig9")
        s.doa_mismatch_max = 0.0;
    s.validate();
    return c;
}

SweepAxis default_sweep(const std::string &id)
{
    if (id == "fig5" || id == "fig6" || id == "table2" || id == "table3")
        return {"snr_desired_db", {-5.0}};
    if (id == "fig7")
        return {"panel", {0.0, 1.0, 2.0, 3.0}};
    if (id == "fig8")
        return {"n_antennas", {8.0, 16.0, 32.0, 64.0, 128.0}};
    if (known_figure(id))
        return {"snr_desired_db", range(-30.0, 20.0, 5.0)};
    throw ContractError("unknown figure id '" + id + "'");
}

Stats describe(const std::vector<double> &values)
{
    Stats s;
    s.n = static_cast<int>(values.size());
    if (s.n == 0)
        return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
    if (s.n > 1)
    {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

std::uint64_t trial_seed(std::uint64_t master, int trial)
{
    return derive_seed(master, {tag(Stream::kTrial), static_cast<std::uint64_t>(trial)});
}

double optimal_sinr_db(const Scenario &scenario)
{
    scenario.validate();
    const AnalogBeamformer id = AnalogBeamformer::identity(scenario.n_antennas);
    const CMatrix r = true_reduced_covariance(scenario, id).matrix;
    const CVector a = steering_vector(scenario.theta_desired, scenario.n_antennas, scenario.element_spacing);
    const CVector y = r.llt().solve(a);
    return 10.0 * std::log10(scenario.desired_power() * std::real(a.dot(y)));
}

void parallel_for(int n, int n_threads, const std::function<void(int)> &body)
{
    int nt = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
    nt = std::clamp(nt, 1, std::max(1, n));
    if (nt == 1)
    {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

RunConfig figure_config(const std::string &id)
{
    return figure_config(id, RunConfig{reference_scenario(16, 128, 0.0), {}});
}

ConvergenceTrial convergence_trial(const RunConfig &config, std::uint64_t seed)
{
    const Scenario &sc = config.scenario;
    const ApalsResult r = run_pipeline_with_scan(sc, Method::kDlApals, seed, config.options);
    const OptimizerSettings &opt = config.options.optimizer;
    PhaseObjectiveOptions phase = opt.phase;
    phase.presumed_theta = r.solution.presumed_theta;
    const ObjectiveAdapter obj = phase_only_objective(sc, r.solution.analog, phase);
    RunControl control;
    control.incumbent.assign(obj.dimension, phase.phase_lower);
    const std::uint64_t s = derive_seed(seed, {tag(Stream::kOptimizer)});
    ConvergenceTrial out;
    out.iba = iba_optimize(obj, opt.population, opt.iterations, s, opt.iba, control).trace;
    out.ba = ba_optimize(obj, opt.population, opt.iterations, s, opt.ba, control).trace;
    out.pso = pso_optimize(obj, opt.population, opt.iterations, s, opt.pso, control).trace;
    return out;
}

NullDepths null_depths(const HybridSolution &s, const Scenario &scenario)
{
    const double m30 = deg_to_rad(-30.0), p60 = deg_to_rad(60.0);
    const double d = scenario.element_spacing;
    NullDepths n;
    n.at_m30_tabulated = null_depth(s.analog, s.digital, m30, DbScale::kTabulated, d);
    n.at_60_tabulated = null_depth(s.analog, s.digital, p60, DbScale::kTabulated, d);
    n.at_m30_power = null_depth(s.analog, s.digital, m30, DbScale::kPower, d);
    n.at_60_power = null_depth(s.analog, s.digital, p60, DbScale::kPower, d);
    return n;
}

const std::vector<TableReference> &table_reference(const std::string &id)
{
    static const std::vector<TableReference> t2 = {
        {Method::kScb, -18.2325, -19.1922},     {Method::kDl, -23.2880, -21.2294},
        {Method::kDlApals, -36.3780, -19.9926}, {Method::kSmfApals, -36.3803, -21.9080},
        {Method::kIbaApals, -36.3947, -37.8852},
    };
    static const std::vector<TableReference> t3 = {
        {Method::kScb, -19.3760, -24.7878},     {Method::kDl, -26.2609, -22.0527},
        {Method::kDlApals, -36.3777, -20.0879}, {Method::kSmfApals, -36.3835, -24.0793},
        {Method::kIbaApals, -36.3789, -37.9193},
    };
    static const std::vector<TableReference> none;
    if (id == "table2" || id == "fig5")
        return t2;
    if (id == "table3" || id == "fig6")
        return t3;
    return none;
}

ExperimentOutput run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    const RunConfig cfg = figure_config(spec.figure_id, spec.base);
    const SweepAxis axis = spec.sweep.value_or(default_sweep(spec.figure_id));
    fs::create_directories(spec.output_dir);

    Writer w(spec.output_dir, spec.figure_id);
    json extra = json::object();
    json notes = json::array();
    const std::string &id = spec.figure_id;
    std::string metric = "sinr_db";
    if (id == "fig2" || id == "fig3" || id == "fig4" || id == "fig8" || id == "fig9")
        run_sinr_figure(spec, cfg, axis, w, extra);
    else if (id == "fig5" || id == "fig6")
    {
        run_pattern_figure(spec, cfg, axis, w);
        metric = "gain_db";
    }
    else if (id == "table2" || id == "table3")
    {
        run_table(spec, cfg, axis, w);
        metric = "null_depth_db_tabulated";
    }
    else if (id == "fig7")
    {
        run_convergence(spec, cfg, axis, w);
        metric = "best_cost";
        notes.push_back("panels c and d use SNR_i = 30 dB as their captions state; panels a and b use 15 dB");
    }
    if (id.rfind("table", 0) == 0 || id == "fig5" || id == "fig6")
        notes.push_back("null depths on the tabulated scale are 10 log10 of the normalized response magnitude; "
                        "*_power curves use 20 log10");

    json seeds = json::array();
    for (int t = 0; t < spec.n_trials; ++t)
        seeds.push_back(trial_seed(spec.seed, t));
    json files = json::array();
    for (const auto &p : w.files())
        files.push_back({{"name", p.filename().string()}, {"fnv1a64", file_hash(p)}});

    json m;
    m["figure"] = id;
    m["version"] = library_version();
    m["master_seed"] = spec.seed;
    m["n_trials"] = spec.n_trials;
    m["trial_seeds"] = seeds;
    m["sweep"] = sweep_json(axis);
    m["metric"] = metric;
    m["config"] = to_json(cfg);
    m["config_hash"] = scenario_hash(cfg);
    m["curves"] = w.curves();
    m["files"] = files;
    m["notes"] = notes;
    if (!extra.empty())
        m["extra"] = extra;

    ExperimentOutput out;
    out.files = w.files();
    const fs::path mp = spec.output_dir / (id + "_manifest.json");
    write_text_file(mp, m.dump(2) + "\n");
    out.files.push_back(mp);
    out.manifest = std::move(m);
    return out;
}

} // namespace hadbf
