"""Semiclassical spin-flip resonance in an intense elliptically polarized
plane wave: exact Jacobi-elliptic orbits, the effective magnetic field with
the Thomas correction, norm-exact two-level propagation, and the resonance
scan machinery.
"""

__version__ = "0.1.0"

from .config import (RunConfig, ScanSection, SimSection, apply_overrides,
                     config_to_dict, parse_config, serialize_config)
from .effective_field import (FieldSample, RotatingConeField,
                              circular_closed_form, display_component_field,
                              effective_field)
from .elliptic import (JacobiTriple, ReductionPlan, classify_modulus,
                       complete_k, jacobi_eval, reduce_modulus)
from .errors import (ConfigError, DegenerateGyromagneticError,
                     DegenerateOrbitError, FrameUnreachableError,
                     NoResonanceError, RegimeError, SpinflipError,
                     StepSizeError)
from .params import (DerivedParams, FrameConfig, Model, ParticleConfig,
                     WaveConfig, build_model, derive_params, flip_amplitude,
                     rabi_frequency, solve_average_rest_frame)
from .scans import (ConvergenceCase, ConvergenceResult, ResonanceResult,
                    ScanRecord, ScanSettings, convergence_study,
                    find_resonance, scan_eta)
from .spin import (PropagationResult, RabiSolution, SpinState, hamiltonian,
                   propagate, rabi_analytic, rabi_solution,
                   rotating_frame_check, step)
from .trajectory import (LabFields, TrajectorySample, acceleration,
                         fields_at_particle, position, trajectory_sample,
                         transverse_position_closed_form, velocity,
                         wave_phase)

__all__ = [
    "__version__",
    # configuration
    "RunConfig", "SimSection", "ScanSection", "parse_config",
    "serialize_config", "config_to_dict", "apply_overrides",
    # parameters
    "WaveConfig", "ParticleConfig", "FrameConfig", "DerivedParams", "Model",
    "build_model", "derive_params", "flip_amplitude", "rabi_frequency",
    "solve_average_rest_frame",
    # elliptic kernel
    "JacobiTriple", "ReductionPlan", "classify_modulus", "complete_k",
    "jacobi_eval", "reduce_modulus",
    # trajectory
    "TrajectorySample", "LabFields", "velocity", "acceleration", "position",
    "wave_phase", "fields_at_particle", "trajectory_sample",
    "transverse_position_closed_form",
    # effective field
    "FieldSample", "RotatingConeField", "effective_field",
    "circular_closed_form", "display_component_field",
    # spin dynamics
    "SpinState", "RabiSolution", "PropagationResult", "hamiltonian", "step",
    "propagate", "rabi_solution", "rabi_analytic", "rotating_frame_check",
    # scans
    "ScanSettings", "ScanRecord", "ResonanceResult", "ConvergenceCase",
    "ConvergenceResult", "scan_eta", "find_resonance", "convergence_study",
    # errors
    "SpinflipError", "ConfigError", "RegimeError",
    "DegenerateGyromagneticError", "FrameUnreachableError",
    "DegenerateOrbitError", "StepSizeError", "NoResonanceError",
]
