"""Definitions for data structures."""

import datetime as dt
import logging
import math
import os
from typing import TypedDict

import numpy as np
import voluptuous as vol

from . import const

_LOGGER = logging.getLogger(__name__)


def default_max_iter() -> int:
    """Iteration budget, honouring the DPISTAB_MAX_ITER override."""
    value = os.getenv(const.ENV_MAX_ITER)
    if value is None:
        return const.DEFAULT_MAX_ITER
    try:
        budget = int(value)
    except ValueError:
        _LOGGER.warning(
            "ignoring %s=%r, not an integer", const.ENV_MAX_ITER, value
        )
        return const.DEFAULT_MAX_ITER
    if budget < 1:
        _LOGGER.warning("ignoring %s=%r, must be >= 1", const.ENV_MAX_ITER, value)
        return const.DEFAULT_MAX_ITER
    return budget


def Finite(value):
    """Voluptuous validator for finite reals."""
    value = float(value)
    if not math.isfinite(value):
        raise vol.Invalid(f"expected a finite number, got {value!r}")
    return value


Degree = vol.All(vol.Coerce(int), vol.Range(min=1))


class StabilityPoint(TypedDict):
    """A point of the (r, eps_hat) plane for a degree-Z nonlinearity."""

    r: float
    eps_hat: float
    Z: int


StabilityPointSchema = vol.Schema(
    {
        vol.Required("r"): Finite,
        vol.Required("eps_hat"): Finite,
        vol.Optional("Z", default=1): Degree,
    }
)


class BorderVerdict(TypedDict):
    """Explicit stability border at a given eps_hat."""

    r_max: float
    theta_at_border: float


class IterationLimits(TypedDict):
    """Stopping rules shared by every brute-force iterator."""

    max_iter: int
    blowup: float
    tolerance: float


IterationLimitsSchema = vol.Schema(
    {
        vol.Optional("max_iter", default=default_max_iter): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional("blowup", default=const.DEFAULT_BLOWUP): vol.All(
            Finite, vol.Range(min=0, min_included=False)
        ),
        vol.Optional("tolerance", default=const.DEFAULT_TOLERANCE): vol.All(
            Finite, vol.Range(min=0, min_included=False)
        ),
    }
)


def default_limits(**overrides) -> IterationLimits:
    """Build validated iteration limits from defaults plus overrides."""
    return IterationLimitsSchema(overrides)


class IterationOutcome(TypedDict):
    """Classification of a single trajectory."""

    status: str
    final_value: float
    iterations_used: int


class AmplitudeTable(TypedDict):
    """Perturbation amplitudes u[i][n], column 0 is the initial condition."""

    amplitudes: np.ndarray
    order: int
    iterations: int
    r: float
    u0: float
    Z: int
    converged_at: list[int | None]
    diverged: list[bool]


class RegionGrid(TypedDict):
    """Analytic vs empirical verdicts over an (eps_hat, r) grid, row-major."""

    r_axis: np.ndarray
    eps_hat_axis: np.ndarray
    Z: int
    scheme: str
    u0: float
    analytic: np.ndarray
    empirical: np.ndarray
    iterations: np.ndarray
    final_values: np.ndarray


class RegionSummary(TypedDict):
    """Tallies of a RegionGrid."""

    cells: int
    analytic_stable: int
    analytic_unstable: int
    converged: int
    diverged: int
    maxiter: int
    singular: int
    disagreements: int


def _coefficients_fit_dimension(data):
    for dim, _, _ in data["coefficients"]:
        if dim > data["d"]:
            raise vol.Invalid(
                f"coefficient refers to dimension {dim} but d={data['d']}"
            )
    return data


class FourierSymbol(TypedDict):
    """Linear operator sum(a_lm d^m/dx_l^m) described by its coefficients."""

    d: int
    coefficients: list[tuple[int, int, float]]


FourierSymbolSchema = vol.All(
    vol.Schema(
        {
            vol.Required("d"): Degree,
            vol.Required("coefficients"): vol.All(
                [
                    vol.All(
                        vol.ExactSequence([Degree, Degree, Finite]),
                        vol.Coerce(tuple),
                    )
                ],
                vol.Length(min=1),
            ),
        }
    ),
    _coefficients_fit_dimension,
)


class FourierVerdict(TypedDict):
    """Outcome of the Fourier-symbol stability test."""

    r: float
    theta: float | None
    stable: bool | None
    samples: list[tuple] | None


class PoissonSpectrum(TypedDict):
    """Spectral estimates of the discrete nonlinear Poisson operator."""

    r: float
    V0: float
    epsilon: float
    eps_hat: float
    product_radius: float


class PoissonRun(TypedDict):
    """Configuration of a nonlinear Poisson run."""

    M: int
    beta: float
    max_iter: int
    residual: str
    scheme: str
    seed: float


PoissonRunSchema = vol.Schema(
    {
        vol.Required("M"): vol.All(vol.Coerce(int), vol.Range(min=2)),
        vol.Required("beta"): vol.All(Finite, vol.Range(min=0, min_included=False)),
        vol.Optional("max_iter", default=default_max_iter): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional(
            "residual", default=const.DEFAULT_POISSON_RESIDUAL_FORMULA
        ): vol.All(str, vol.Length(min=1)),
        vol.Optional("scheme", default=const.PDE_SCHEME_PICARD): vol.In(
            const.PDE_SCHEMES
        ),
        vol.Optional("seed", default=const.POISSON_SEED): vol.All(
            Finite, vol.Range(min=0)
        ),
    }
)


class AmplitudeRow(TypedDict):
    """A line of amplitudes.csv."""

    i: int
    n_used: int
    recursive: float
    closed_form: float
    rel_err: float


class BorderRow(TypedDict):
    """A line of border.csv."""

    eps_hat: float
    r_border: float
    r_low: float | None
    r_high: float | None


class RunManifest(TypedDict):
    """Metadata written next to every set of CLI outputs."""

    command: str
    parameters: dict
    tool_version: str
    created: dt.datetime
    outputs: list[str]


RunManifestSchema = vol.Schema(
    {
        vol.Required("command"): str,
        vol.Required("parameters"): dict,
        vol.Required("tool_version"): str,
        vol.Required("created"): dt.datetime,
        vol.Required("outputs"): [str],
    }
)
