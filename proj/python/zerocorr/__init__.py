"""Correlation functions of zeros of random polynomials."""

from ._zerocorr import (
    BackendUnavailableError,
    Configuration,
    ConsistencyError,
    Density,
    DiagnosticsError,
    DimensionError,
    DomainError,
    Error,
    GeometryError,
    InputError,
    Model,
    ModelMismatchError,
    UnsupportedError,
    closed_form_family,
    complex_density,
    draw_sample,
    elementary_symmetric,
    find_roots,
    integrate_correlation,
    joint_density,
    prob_real_count,
    real_count_pmf,
    real_density,
    real_vandermonde,
    rho_kl,
    rho_m,
    run_cli,
    run_scenario,
    scenario_names,
)

__version__ = "0.1.0"
