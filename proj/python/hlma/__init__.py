"""Hybrid levitation micro-actuator: inductance kernels, eddy currents and pull-in models."""

from ._core import (
    DomainError,
    GeometryError,
    InputError,
    ModelValidityError,
    NoPullInError,
    Scenario,
    SingularGeometryError,
    __version__,
    beta_analytical,
    beta_simplified,
    complete_elliptic,
    dmutual_kz_dx3,
    experiment_records,
    experiment_scenario,
    load_scenario,
    mutual_kz,
    mutual_maxwell_coaxial,
    parse_scenario,
    phi_bracket,
    preliminary_design,
    psi_kernel,
    pullin,
    self_inductance_ring_normalized,
    validate,
)
