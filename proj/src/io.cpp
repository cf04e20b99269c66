// SPDX-License-Identifier: Apache-2.0
#include "hadbf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hadbf
{

using nlohmann::json;

namespace
{

json degrees(const std::vector<double> &rad)
{
    json out = json::array();
    for (double r : rad)
        out.push_back(rad_to_deg(r));
    return out;
}

template <class T> void read_opt(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

json pso_json(const PsoConfig &c)
{
    return {{"c1", c.c1},
            {"c2", c.c2},
            {"inertia_max", c.inertia_max},
            {"inertia_min", c.inertia_min},
            {"velocity_fraction", c.velocity_fraction}};
}

void pso_from(const json &j, PsoConfig &c)
{
    read_opt(j, "c1", c.c1);
    read_opt(j, "c2", c.c2);
    read_opt(j, "inertia_max", c.inertia_max);
    read_opt(j, "inertia_min", c.inertia_min);
    read_opt(j, "velocity_fraction", c.velocity_fraction);
}

json ba_json(const BatConfig &c)
{
    return {{"alpha", c.alpha},
            {"gamma", c.gamma},
            {"f_min", c.f_min},
            {"f_max", c.f_max},
            {"loudness_min", c.loudness_min},
            {"loudness_max", c.loudness_max},
            {"pulse_min", c.pulse_min},
            {"pulse_max", c.pulse_max},
            {"attract_to_best", c.attract_to_best}};
}

void ba_from(const json &j, BatConfig &c)
{
    read_opt(j, "alpha", c.alpha);
    read_opt(j, "gamma", c.gamma);
    read_opt(j, "f_min", c.f_min);
    read_opt(j, "f_max", c.f_max);
    read_opt(j, "loudness_min", c.loudness_min);
    read_opt(j, "loudness_max", c.loudness_max);
    read_opt(j, "pulse_min", c.pulse_min);
    read_opt(j, "pulse_max", c.pulse_max);
    read_opt(j, "attract_to_best", c.attract_to_best);
}

json iba_json(const ImprovedBatConfig &c)
{
    return {{"alpha", c.alpha},
            {"gamma", c.gamma},
            {"f_min", c.f_min},
            {"f_max", c.f_max},
            {"loudness_min", c.loudness_min},
            {"loudness_max", c.loudness_max},
            {"pulse_min", c.pulse_min},
            {"pulse_max", c.pulse_max},
            {"habitat_min", c.habitat_min},
            {"habitat_max", c.habitat_max},
            {"compensation_min", c.compensation_min},
            {"compensation_max", c.compensation_max},
            {"contraction_min", c.contraction_min},
            {"contraction_max", c.contraction_max},
            {"stagnation_window", c.stagnation_window},
            {"inertia_min", c.inertia_min},
            {"inertia_max", c.inertia_max},
            {"inertia_sigma", c.inertia_sigma},
            {"sound_speed", c.sound_speed},
            {"reset_pulse_min", c.reset_pulse_min},
            {"reset_pulse_max", c.reset_pulse_max},
            {"doppler_velocity_ratio", c.doppler_velocity_ratio}};
}

void iba_from(const json &j, ImprovedBatConfig &c)
{
    read_opt(j, "alpha", c.alpha);
    read_opt(j, "gamma", c.gamma);
    read_opt(j, "f_min", c.f_min);
    read_opt(j, "f_max", c.f_max);
    read_opt(j, "loudness_min", c.loudness_min);
    read_opt(j, "loudness_max", c.loudness_max);
    read_opt(j, "pulse_min", c.pulse_min);
    read_opt(j, "pulse_max", c.pulse_max);
    read_opt(j, "habitat_min", c.habitat_min);
    read_opt(j, "habitat_max", c.habitat_max);
    read_opt(j, "compensation_min", c.compensation_min);
    read_opt(j, "compensation_max", c.compensation_max);
    read_opt(j, "contraction_min", c.contraction_min);
    read_opt(j, "contraction_max", c.contraction_max);
    read_opt(j, "stagnation_window", c.stagnation_window);
    read_opt(j, "inertia_min", c.inertia_min);
    read_opt(j, "inertia_max", c.inertia_max);
    read_opt(j, "inertia_sigma", c.inertia_sigma);
    read_opt(j, "sound_speed", c.sound_speed);
    read_opt(j, "reset_pulse_min", c.reset_pulse_min);
    read_opt(j, "reset_pulse_max", c.reset_pulse_max);
    read_opt(j, "doppler_velocity_ratio", c.doppler_velocity_ratio);
}

std::string guard_name(GuardPolicy::Kind k)
{
    switch (k)
    {
    case GuardPolicy::Kind::kGridResolution:
        return "grid_resolution";
    case GuardPolicy::Kind::kTolerance:
        return "tolerance";
    case GuardPolicy::Kind::kMainLobe:
        return "main_lobe";
    }
    return "grid_resolution";
}

GuardPolicy guard_from(const json &j)
{
    const std::string kind = j.value("kind", std::string("grid_resolution"));
    if (kind == "grid_resolution")
        return GuardPolicy::grid_resolution();
    if (kind == "tolerance")
        return GuardPolicy::tolerance(j.value("value", 0.01));
    if (kind == "main_lobe")
        return GuardPolicy::main_lobe(j.value("value", 0.5));
    throw ContractError("unknown guard kind '" + kind + "'");
}

} // namespace

json to_json(const RunConfig &config)
{
    const Scenario &s = config.scenario;
    const ApalsOptions &o = config.options;
    json j;
    j["n_antennas"] = s.n_antennas;
    j["n_subarrays"] = s.n_subarrays;
    j["elements_per_subarray"] = s.elements_per_subarray();
    j["element_spacing"] = s.element_spacing;
    j["theta_desired"] = rad_to_deg(s.theta_desired);
    j["theta_interferers"] = degrees(s.theta_interferers);
    j["snr_desired_db"] = s.snr_desired_db;
    j["snr_interferer_db"] = s.snr_interferer_db;
    j["noise_power"] = s.noise_power;
    j["n_snapshots"] = s.n_snapshots;
    j["seed"] = s.seed;
    j["doa_mismatch_max"] = rad_to_deg(s.doa_mismatch_max);

    const OptimizerSettings &opt = o.optimizer;
    j["optimizer"] = {{"population", opt.population},
                      {"iterations", opt.iterations},
                      {"phase_lower", opt.phase.phase_lower},
                      {"phase_upper", opt.phase.phase_upper},
                      {"distortionless", opt.phase.distortionless},
                      {"pso", pso_json(opt.pso)},
                      {"ba", ba_json(opt.ba)},
                      {"iba", iba_json(opt.iba)}};
    json apals = {{"grid_points", o.grid.n_points()},
                  {"guard", {{"kind", guard_name(o.guard.kind)}, {"value", o.guard.value}}},
                  {"dl_level", o.dl_level}};
    if (o.grid.spacing() == 0.0)
        apals["grid_points_deg"] = degrees(o.grid.points());
    j["apals"] = apals;
    return j;
}

RunConfig run_config_from_json(const json &doc)
{
    if (!doc.is_object())
        throw ContractError("scenario document must be a JSON object");
    RunConfig c;
    Scenario &s = c.scenario;
    s.theta_interferers.clear();
    s.snr_interferer_db.clear();
    read_opt(doc, "n_antennas", s.n_antennas);
    read_opt(doc, "n_subarrays", s.n_subarrays);
    read_opt(doc, "element_spacing", s.element_spacing);
    if (doc.contains("theta_desired"))
        s.theta_desired = deg_to_rad(doc.at("theta_desired").get<double>());
    if (doc.contains("theta_interferers"))
        for (double d : doc.at("theta_interferers").get<std::vector<double>>())
            s.theta_interferers.push_back(deg_to_rad(d));
    read_opt(doc, "snr_desired_db", s.snr_desired_db);
    if (doc.contains("snr_interferer_db"))
    {
        const json &p = doc.at("snr_interferer_db");
        if (p.is_number())
            s.snr_interferer_db.assign(s.theta_interferers.size(), p.get<double>());
        else
            s.snr_interferer_db = p.get<std::vector<double>>();
    }
    read_opt(doc, "noise_power", s.noise_power);
    read_opt(doc, "n_snapshots", s.n_snapshots);
    read_opt(doc, "seed", s.seed);
    if (doc.contains("doa_mismatch_max"))
        s.doa_mismatch_max = deg_to_rad(doc.at("doa_mismatch_max").get<double>());
    if (doc.contains("elements_per_subarray") && s.n_subarrays > 0 &&
        doc.at("elements_per_subarray").get<int>() * s.n_subarrays != s.n_antennas)
        throw ContractError("elements_per_subarray disagrees with n_antennas / n_subarrays");
    s.validate();

    if (doc.contains("optimizer"))
    {
        const json &j = doc.at("optimizer");
        OptimizerSettings &opt = c.options.optimizer;
        read_opt(j, "population", opt.population);
        read_opt(j, "iterations", opt.iterations);
        read_opt(j, "phase_lower", opt.phase.phase_lower);
        read_opt(j, "phase_upper", opt.phase.phase_upper);
        read_opt(j, "distortionless", opt.phase.distortionless);
        if (j.contains("pso"))
            pso_from(j.at("pso"), opt.pso);
        if (j.contains("ba"))
            ba_from(j.at("ba"), opt.ba);
        if (j.contains("iba"))
            iba_from(j.at("iba"), opt.iba);
    }
    if (doc.contains("apals"))
    {
        const json &j = doc.at("apals");
        if (j.contains("grid_points_deg"))
        {
            std::vector<double> pts;
            for (double d : j.at("grid_points_deg").get<std::vector<double>>())
                pts.push_back(deg_to_rad(d));
            c.options.grid = SearchGrid::from_points(std::move(pts));
        }
        else if (j.contains("grid_points"))
            c.options.grid = SearchGrid::uniform(j.at("grid_points").get<int>());
        if (j.contains("guard"))
            c.options.guard = guard_from(j.at("guard"));
        read_opt(j, "dl_level", c.options.dl_level);
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file " + path.string());
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::parse_error &e)
    {
        throw ContractError("malformed scenario file " + path.string() + ": " + e.what());
    }
    return run_config_from_json(doc);
}

void save_run_config(const std::filesystem::path &path, const RunConfig &config)
{
    write_text_file(path, to_json(config).dump(2) + "\n");
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string scenario_hash(const RunConfig &config) { return fnv1a_hex(to_json(config).dump()); }

std::string file_hash(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size())
{
    row(header);
}

void CsvWriter::row(const std::vector<std::string> &cells)
{
    if (cells.size() != columns_)
        throw ContractError("csv row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<double> &values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_double(v));
    row(cells);
}

void CsvWriter::save(const std::filesystem::path &path) const { write_text_file(path, text_); }

void write_text_file(const std::filesystem::path &path, const std::string &text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

std::string beampattern_csv(const AnalogBeamformer &f_rf, const DigitalWeights &f_d, const std::vector<double> &grid,
                            double element_spacing)
{
    const std::vector<double> gain = beampattern(f_rf, f_d, grid, element_spacing);
    CsvWriter csv({"theta_deg", "gain_db"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row(std::vector<double>{rad_to_deg(grid[i]), gain[i]});
    return csv.str();
}

std::string cost_trace_csv(const std::vector<double> &trace)
{
    CsvWriter csv({"iteration", "best_cost"});
    for (std::size_t i = 0; i < trace.size(); ++i)
        csv.row(std::vector<std::string>{std::to_string(i + 1), format_double(trace[i])});
    return csv.str();
}

std::string scan_trace_csv(const std::vector<ScanPoint> &scan)
{
    CsvWriter csv({"theta_rad", "cf_value", "guard_pass"});
    for (const auto &p : scan)
        csv.row(std::vector<std::string>{format_double(p.theta), format_double(p.cost), p.guard_pass ? "1" : "0"});
    return csv.str();
}

json weights_json(const HybridSolution &solution, const RunConfig &config, std::uint64_t seed)
{
    json w = json::array();
    const CVector &v = solution.digital.vector();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        w.push_back({{"real", v(i).real()}, {"imag", v(i).imag()}});
    json j;
    j["algorithm"] = std::string(method_name(solution.method));
    j["seed"] = seed;
    j["scenario_hash"] = scenario_hash(config);
    j["weights"] = w;
    j["phases_rad"] = solution.digital.phases();
    j["optimized_angle_rad"] = solution.optimized_angle ? json(*solution.optimized_angle) : json(nullptr);
    j["achieved_cost"] = solution.achieved_cost;
    j["achieved_sinr_db"] = solution.achieved_sinr;
    return j;
}

} // namespace hadbf
