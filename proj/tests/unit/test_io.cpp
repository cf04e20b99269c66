#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hadbf/io.hpp"

using namespace hadbf;
namespace fs = std::filesystem;

namespace
{

std::string read_file(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("hadbf_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("run config survives a JSON round trip")
{
    RunConfig c;
    c.scenario = reference_scenario(32, 200, -15.0);
    c.scenario.snr_interferer_db = {30.0, 20.0};
    c.scenario.doa_mismatch_max = deg_to_rad(3.0);
    c.scenario.seed = 99;
    c.options.optimizer.population = 25;
    c.options.optimizer.iterations = 70;
    c.options.optimizer.phase.phase_upper = 1.0;
    c.options.optimizer.iba.stagnation_window = 3;
    c.options.optimizer.ba.attract_to_best = true;
    c.options.optimizer.pso.c1 = 0.7;
    c.options.guard = GuardPolicy::tolerance(1e-4);
    c.options.grid = SearchGrid::uniform(1001);
    c.options.dl_level = 12.0;

    const nlohmann::json j = to_json(c);
    CHECK(j["theta_desired"] == 0.0);
    CHECK(j["theta_interferers"][0] == doctest::Approx(60.0));
    CHECK(j.contains("optimizer"));
    const RunConfig back = run_config_from_json(j);
    CHECK(back.scenario.n_antennas == 32);
    CHECK(back.scenario.n_snapshots == 200);
    CHECK(back.scenario.theta_interferers[1] == doctest::Approx(deg_to_rad(-30.0)));
    CHECK(back.scenario.snr_interferer_db == c.scenario.snr_interferer_db);
    CHECK(back.scenario.doa_mismatch_max == doctest::Approx(deg_to_rad(3.0)));
    CHECK(back.scenario.seed == 99);
    CHECK(back.options.optimizer.population == 25);
    CHECK(back.options.optimizer.iterations == 70);
    CHECK(back.options.optimizer.phase.phase_upper == 1.0);
    CHECK(back.options.optimizer.iba.stagnation_window == 3);
    CHECK(back.options.optimizer.ba.attract_to_best);
    CHECK(back.options.optimizer.pso.c1 == 0.7);
    CHECK(back.options.guard.kind == GuardPolicy::Kind::kTolerance);
    CHECK(back.options.guard.value == 1e-4);
    CHECK(back.options.grid.n_points() == 1001);
    CHECK(back.options.dl_level == 12.0);
    CHECK(to_json(back) == j);
    CHECK(scenario_hash(back) == scenario_hash(c));
}

TEST_CASE("malformed configs are rejected")
{
    nlohmann::json j = to_json(RunConfig{reference_scenario(16, 128, 0.0), {}});
    j["n_antennas"] = 18;
    CHECK_THROWS(run_config_from_json(j));
    j = to_json(RunConfig{reference_scenario(16, 128, 0.0), {}});
    j["snr_interferer_db"] = nlohmann::json::array({1.0, 2.0, 3.0});
    CHECK_THROWS(run_config_from_json(j));
}

TEST_CASE("scalar interferer SNR is broadcast")
{
    nlohmann::json j = to_json(RunConfig{reference_scenario(16, 128, 0.0), {}});
    j["snr_interferer_db"] = 20.0;
    const RunConfig c = run_config_from_json(j);
    CHECK(c.scenario.snr_interferer_db == std::vector<double>{20.0, 20.0});
}

TEST_CASE("config files round trip on disk")
{
    const fs::path dir = scratch_dir("config");
    RunConfig c;
    c.scenario = reference_scenario(16, 64, 3.0);
    save_run_config(dir / "a" / "s.json", c);
    const RunConfig back = load_run_config(dir / "a" / "s.json");
    CHECK(scenario_hash(back) == scenario_hash(c));
    CHECK_THROWS(load_run_config(dir / "missing.json"));
    fs::remove_all(dir);
}

TEST_CASE("doubles print with full precision and a dot")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    const char *old = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = old ? old : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8"))
    {
        CHECK(format_double(1.5) == "1.5");
        std::setlocale(LC_NUMERIC, saved.c_str());
    }
}

TEST_CASE("FNV-1a reference values")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("CSV writers")
{
    CsvWriter w({"a", "b"});
    w.row(std::vector<double>{1.0, 0.25});
    CHECK(w.str() == "a,b\n1,0.25\n");
    CHECK_THROWS_AS(w.row(std::vector<double>{1.0}), ContractError);

    CHECK(cost_trace_csv({3.0, 2.0}) == "iteration,best_cost\n1,3\n2,2\n");

    std::vector<ScanPoint> scan(2);
    scan[0].theta = -0.5;
    scan[0].cost = 0.125;
    scan[0].guard_pass = true;
    scan[1].theta = 0.5;
    scan[1].cost = 2.0;
    CHECK(scan_trace_csv(scan) == "theta_rad,cf_value,guard_pass\n-0.5,0.125,1\n0.5,2,0\n");

    const AnalogBeamformer f = analog_from_angle(0.0, 8, 2);
    const std::string bp = beampattern_csv(f, DigitalWeights::from_phases(std::vector<double>{0.0, 0.0}),
                                           {deg_to_rad(-10.0), 0.0});
    CHECK(bp.rfind("theta_deg,gain_db\n", 0) == 0);
    CHECK(bp.find("\n0,0\n") != std::string::npos);
}

TEST_CASE("weights document carries provenance")
{
    RunConfig c;
    c.scenario = reference_scenario(16, 128, 0.0);
    c.options.n_threads = 1;
    c.options.grid = SearchGrid::uniform(401);
    const HybridSolution sol = run_pipeline(c.scenario, Method::kDlApals, 4, c.options);
    const nlohmann::json j = weights_json(sol, c, 4);
    CHECK(j["algorithm"] == "dl_apals");
    CHECK(j["seed"] == 4);
    CHECK(j["scenario_hash"] == scenario_hash(c));
    REQUIRE(j["weights"].size() == 4);
    CHECK(j["weights"][0].contains("real"));
    CHECK(j["weights"][0].contains("imag"));
}
