// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hadbf/apals.hpp"
#include "hadbf/experiments.hpp"
#include "hadbf/io.hpp"
#include "hadbf/summarize.hpp"
#include "hadbf/version.hpp"

namespace fs = std::filesystem;
using namespace hadbf;

namespace
{

RunConfig base_config(const std::string &scenario_path)
{
    if (scenario_path.empty())
    {
        RunConfig c;
        c.scenario = reference_scenario(16, 128, 0.0);
        return c;
    }
    return load_run_config(scenario_path);
}

int cmd_run(const std::string &figure, const std::string &scenario, int trials, std::uint64_t seed,
            const std::string &out, int threads, const std::string &axis, const std::vector<double> &values)
{
    ExperimentSpec spec;
    spec.figure_id = figure;
    spec.base = base_config(scenario);
    spec.n_trials = trials;
    spec.seed = seed;
    spec.output_dir = out;
    spec.n_threads = threads;
    if (!values.empty())
        spec.sweep = SweepAxis{axis.empty() ? default_sweep(figure).name : axis, values};
    const ExperimentOutput r = run_experiment(spec);
    for (const auto &f : r.files)
        std::cout << f.string() << "\n";
    return 0;
}

int cmd_pattern(const std::string &method, const std::string &scenario, std::uint64_t seed, const std::string &out,
                int points)
{
    RunConfig cfg = base_config(scenario);
    cfg.options.keep_scan = true;
    const Method m = parse_method(method);
    const ApalsResult r = run_pipeline_with_scan(cfg.scenario, m, seed, cfg.options);
    const fs::path dir(out);
    const std::vector<double> grid = angle_grid(points);
    write_text_file(dir / "pattern.csv",
                    beampattern_csv(r.solution.analog, r.solution.digital, grid, cfg.scenario.element_spacing));
    write_text_file(dir / "weights.json", weights_json(r.solution, cfg, seed).dump(2) + "\n");
    if (!r.scan.empty())
        write_text_file(dir / "scan.csv", scan_trace_csv(r.scan));
    if (!r.solution.cost_trace.empty())
        write_text_file(dir / "cost_trace.csv", cost_trace_csv(r.solution.cost_trace));

    const NullDepths nd = null_depths(r.solution, cfg.scenario);
    std::cout << "method " << method_name(m) << "\n"
              << "sinr_db " << format_double(r.solution.achieved_sinr) << "\n"
              << "cost " << format_double(r.solution.achieved_cost) << "\n";
    if (r.solution.optimized_angle)
        std::cout << "optimized_angle_rad " << format_double(*r.solution.optimized_angle) << "\n";
    std::cout << "null_m30_db " << format_double(nd.at_m30_tabulated) << " (20log10: " << format_double(nd.at_m30_power)
              << ")\n"
              << "null_60_db " << format_double(nd.at_60_tabulated) << " (20log10: " << format_double(nd.at_60_power)
              << ")\n";
    return 0;
}

int cmd_summarize(const std::string &in)
{
    const SummaryReport rep = summarize_directory(in);
    write_report(in, rep);
    std::cout << rep.markdown;
    return rep.acceptance_failed() ? 2 : 0;
}

int cmd_scenario(const std::string &figure, const std::string &out)
{
    RunConfig c;
    c.scenario = reference_scenario(16, 128, 0.0);
    if (!figure.empty())
        c = figure_config(figure, c);
    const std::string text = to_json(c).dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid analog/digital beamforming simulator"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    std::string figure, scenario, out, in, method, axis;
    int trials = 20, threads = 0, points = 1801;
    std::uint64_t seed = 42;
    std::vector<double> values;

    auto *run = app.add_subcommand("run", "Run a figure or table experiment");
    run->add_option("--figure", figure, "fig2..fig9, table2, table3")->required();
    run->add_option("--scenario", scenario, "Scenario JSON (angles in degrees)")->check(CLI::ExistingFile);
    run->add_option("--trials", trials, "Ensemble size")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--threads", threads, "Worker threads, 0 for all cores");
    run->add_option("--sweep-axis", axis, "Override the sweep axis name");
    run->add_option("--sweep", values, "Override the sweep values")->delimiter(',');

    auto *pattern = app.add_subcommand("pattern", "Solve one scenario and write its beampattern");
    pattern->add_option("--method", method, "scb, dl, dl_apals, smf_apals, ba_apals, pso_apals, iba_apals")
        ->required();
    pattern->add_option("--scenario", scenario, "Scenario JSON")->check(CLI::ExistingFile);
    pattern->add_option("--seed", seed, "Seed");
    pattern->add_option("--out", out, "Output directory")->required();
    pattern->add_option("--points", points, "Pattern grid points over [-90, 90] deg")->check(CLI::Range(2, 1000000));

    auto *summarize = app.add_subcommand("summarize", "Check a results directory against the thresholds");
    summarize->add_option("--in", in, "Results directory")->required();

    auto *scen = app.add_subcommand("scenario", "Print the default scenario JSON");
    scen->add_option("--figure", figure, "Apply a figure's protocol");
    scen->add_option("--out", out, "Write to a file instead of stdout");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 1;
    }

    try
    {
        if (*run)
            return cmd_run(figure, scenario, trials, seed, out, threads, axis, values);
        if (*pattern)
            return cmd_pattern(method, scenario, seed, out, points);
        if (*summarize)
            return cmd_summarize(in);
        if (*scen)
            return cmd_scenario(figure, out);
    }
    catch (const std::exception &e)
    {
        std::cerr << "beamsim: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
