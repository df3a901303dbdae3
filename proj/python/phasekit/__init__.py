"""Harmonic phase-space wavefunctions: basis states, overlap kernel, transforms."""

import json as _json

from ._core import (
    CapExceeded,
    ConfigError,
    Error,
    GridTooSmall,
    InvalidArgument,
    NonConvergence,
    OutOfDomain,
    PhaseIndex,
    ScaleParam,
    Spectrum,
    State,
    TailTooHeavy,
    WindowSensitive,
    ZeroField,
    __version__,
    chi,
    chi_closed,
    chi_quadrature,
    hermite,
    hermite_sequence,
    kernel_transport,
    matrix_dispersion,
    matrix_p,
    matrix_reduced_dispersion,
    matrix_x,
    norm_integral,
    phi,
    phi_tilde,
    project,
    project_spectrum,
    reconstruct_integral_XP,
    reconstruct_sum,
    run_cli,
)
from ._core import _verify


def verify(config_file=None, overrides=None, workers=0):
    """Run the invariant suite. `overrides` maps dotted keys to values."""
    pairs = [
        (k, v if isinstance(v, str) else _json.dumps(v))
        for k, v in (overrides or {}).items()
    ]
    return _json.loads(_verify(config_file, pairs, workers))


def state_from_dict(description, base_dir="."):
    return State.from_json(_json.dumps(description), base_dir)
