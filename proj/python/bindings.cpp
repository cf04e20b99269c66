// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hadbf/apals.hpp"
#include "hadbf/closed_form.hpp"
#include "hadbf/experiments.hpp"
#include "hadbf/io.hpp"
#include "hadbf/summarize.hpp"
#include "hadbf/version.hpp"

namespace py = pybind11;
using namespace hadbf;

namespace
{

ObjectiveAdapter py_objective(std::function<double(std::vector<double>)> fn, std::vector<double> lower,
                              std::vector<double> upper)
{
    ObjectiveAdapter o;
    o.dimension = static_cast<int>(lower.size());
    o.lower_bounds = std::move(lower);
    o.upper_bounds = std::move(upper);
    o.evaluate = [fn = std::move(fn)](std::span<const double> x) {
        py::gil_scoped_acquire gil;
        return fn(std::vector<double>(x.begin(), x.end()));
    };
    return o;
}

py::dict result_dict(const OptimizationResult &r)
{
    py::dict d;
    d["best_position"] = r.best_position;
    d["best_cost"] = r.best_cost;
    d["trace"] = r.trace;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Hybrid analog/digital receive beamforming";
    m.attr("__version__") = library_version();

    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<SearchFailure>(m, "SearchFailure", PyExc_RuntimeError);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("n_antennas", &Scenario::n_antennas)
        .def_readwrite("n_subarrays", &Scenario::n_subarrays)
        .def_readwrite("element_spacing", &Scenario::element_spacing)
        .def_readwrite("theta_desired", &Scenario::theta_desired)
        .def_readwrite("theta_interferers", &Scenario::theta_interferers)
        .def_readwrite("snr_desired_db", &Scenario::snr_desired_db)
        .def_readwrite("snr_interferer_db", &Scenario::snr_interferer_db)
        .def_readwrite("noise_power", &Scenario::noise_power)
        .def_readwrite("n_snapshots", &Scenario::n_snapshots)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("doa_mismatch_max", &Scenario::doa_mismatch_max)
        .def_property_readonly("elements_per_subarray", &Scenario::elements_per_subarray)
        .def("validate", &Scenario::validate);

    m.def("reference_scenario", &reference_scenario, py::arg("n_antennas") = 16, py::arg("n_snapshots") = 128,
          py::arg("snr_desired_db") = 0.0);
    m.def("steering_vector", &steering_vector, py::arg("theta"), py::arg("n_antennas"),
          py::arg("element_spacing") = 0.5);

    py::class_<AnalogOptions>(m, "AnalogOptions")
        .def(py::init<>())
        .def_readwrite("element_spacing", &AnalogOptions::element_spacing)
        .def_readwrite("index_offset", &AnalogOptions::index_offset);

    py::class_<AnalogBeamformer>(m, "AnalogBeamformer")
        .def_static("from_angle", &AnalogBeamformer::from_angle, py::arg("theta"), py::arg("n_antennas"),
                    py::arg("n_subarrays"), py::arg("options") = AnalogOptions{})
        .def_static("identity", &AnalogBeamformer::identity)
        .def_static("from_matrix", &AnalogBeamformer::from_matrix)
        .def_property_readonly("matrix", &AnalogBeamformer::matrix)
        .def_property_readonly("steer_angle", &AnalogBeamformer::steer_angle)
        .def_property_readonly("n_antennas", &AnalogBeamformer::n_antennas)
        .def_property_readonly("n_subarrays", &AnalogBeamformer::n_subarrays);

    py::class_<DigitalWeights>(m, "DigitalWeights")
        .def_static("complex", &DigitalWeights::complex)
        .def_static("from_phases", [](std::vector<double> p) { return DigitalWeights::from_phases(p); })
        .def_property_readonly("vector", &DigitalWeights::vector)
        .def_property_readonly("phases", &DigitalWeights::phases)
        .def("distortionless", &DigitalWeights::distortionless);

    m.def("output_sinr", &output_sinr, "Output SINR in dB");
    m.def("cost_function", &cost_function);
    m.def(
        "beampattern",
        [](const AnalogBeamformer &f, const DigitalWeights &w, std::vector<double> grid, double d) {
            return beampattern(f, w, grid, d);
        },
        py::arg("f_rf"), py::arg("f_d"), py::arg("grid"), py::arg("element_spacing") = 0.5);
    m.def(
        "null_depth",
        [](const AnalogBeamformer &f, const DigitalWeights &w, double theta, bool tabulated) {
            return null_depth(f, w, theta, tabulated ? DbScale::kTabulated : DbScale::kPower);
        },
        py::arg("f_rf"), py::arg("f_d"), py::arg("theta"), py::arg("tabulated") = true);
    m.def("angle_grid", &angle_grid);

    py::class_<HybridSolution>(m, "HybridSolution")
        .def_readonly("analog", &HybridSolution::analog)
        .def_readonly("digital", &HybridSolution::digital)
        .def_readonly("optimized_angle", &HybridSolution::optimized_angle)
        .def_readonly("presumed_theta", &HybridSolution::presumed_theta)
        .def_readonly("achieved_cost", &HybridSolution::achieved_cost)
        .def_readonly("achieved_sinr", &HybridSolution::achieved_sinr)
        .def_readonly("cost_trace", &HybridSolution::cost_trace)
        .def_property_readonly("method", [](const HybridSolution &s) { return std::string(method_name(s.method)); });

    m.def(
        "run_pipeline",
        [](const Scenario &s, const std::string &method, std::uint64_t seed, int grid_points) {
            ApalsOptions o;
            o.grid = SearchGrid::uniform(grid_points);
            py::gil_scoped_release nogil;
            return run_pipeline(s, parse_method(method), seed, o);
        },
        py::arg("scenario"), py::arg("method"), py::arg("seed") = 0, py::arg("grid_points") = kDefaultGridPoints);
    m.def("methods", [] {
        std::vector<std::string> v;
        for (Method x : all_methods())
            v.emplace_back(method_name(x));
        return v;
    });

    m.def(
        "pso_optimize",
        [](std::function<double(std::vector<double>)> f, std::vector<double> lo, std::vector<double> hi, int n,
           int iters, std::uint64_t seed) {
            return result_dict(pso_optimize(py_objective(std::move(f), std::move(lo), std::move(hi)), n, iters, seed));
        },
        py::arg("objective"), py::arg("lower"), py::arg("upper"), py::arg("n_particles") = 40,
        py::arg("n_iterations") = 100, py::arg("seed") = 0);
    m.def(
        "ba_optimize",
        [](std::function<double(std::vector<double>)> f, std::vector<double> lo, std::vector<double> hi, int n,
           int iters, std::uint64_t seed) {
            return result_dict(ba_optimize(py_objective(std::move(f), std::move(lo), std::move(hi)), n, iters, seed));
        },
        py::arg("objective"), py::arg("lower"), py::arg("upper"), py::arg("n_bats") = 40,
        py::arg("n_iterations") = 100, py::arg("seed") = 0);
    m.def(
        "iba_optimize",
        [](std::function<double(std::vector<double>)> f, std::vector<double> lo, std::vector<double> hi, int n,
           int iters, std::uint64_t seed) {
            return result_dict(iba_optimize(py_objective(std::move(f), std::move(lo), std::move(hi)), n, iters, seed));
        },
        py::arg("objective"), py::arg("lower"), py::arg("upper"), py::arg("n_bats") = 40,
        py::arg("n_iterations") = 100, py::arg("seed") = 0);

    m.def(
        "run_experiment",
        [](const std::string &figure, const std::filesystem::path &out, int n_trials, std::uint64_t seed,
           std::optional<std::vector<double>> sweep, std::optional<std::filesystem::path> scenario) {
            ExperimentSpec spec;
            spec.figure_id = figure;
            spec.output_dir = out;
            spec.n_trials = n_trials;
            spec.seed = seed;
            if (scenario)
                spec.base = load_run_config(*scenario);
            else
                spec.base.scenario = reference_scenario(16, 128, 0.0);
            if (sweep)
                spec.sweep = SweepAxis{default_sweep(figure).name, *sweep};
            py::gil_scoped_release nogil;
            std::vector<std::string> files;
            for (const auto &p : run_experiment(spec).files)
                files.push_back(p.string());
            return files;
        },
        py::arg("figure"), py::arg("out"), py::arg("n_trials") = 20, py::arg("seed") = 42, py::arg("sweep") = py::none(),
        py::arg("scenario") = py::none());
    m.def(
        "summarize",
        [](const std::filesystem::path &dir) {
            const SummaryReport r = summarize_directory(dir);
            write_report(dir, r);
            return py::module_::import("json").attr("loads")(r.json.dump());
        },
        py::arg("directory"));
}
