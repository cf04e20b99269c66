"""Hybrid analog/digital receive beamforming simulator."""

from ._core import (  # noqa: F401
    AnalogBeamformer,
    AnalogOptions,
    ContractError,
    DigitalWeights,
    DomainError,
    HybridSolution,
    NumericalError,
    Scenario,
    SearchFailure,
    __version__,
    angle_grid,
    ba_optimize,
    beampattern,
    cost_function,
    iba_optimize,
    methods,
    null_depth,
    output_sinr,
    pso_optimize,
    reference_scenario,
    run_experiment,
    run_pipeline,
    steering_vector,
    summarize,
)
