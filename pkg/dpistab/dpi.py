"""Brute-force discrete Picard iteration.

Scalar iterators classify single trajectories, ``scan_region`` runs the same
rules vectorised over a whole (eps_hat, r) grid and compares them with the
analytic verdicts of :mod:`dpistab.series`.
"""

import logging
import math
from collections.abc import Callable

import numpy as np

from . import const
from .definitions import (
    IterationLimits,
    IterationLimitsSchema,
    IterationOutcome,
    RegionGrid,
)
from .exceptions import DomainError, ScanRangeError, SingularStepError
from .series import stable_mask

_LOGGER = logging.getLogger(__name__)


def _check_finite(**values) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


def _outcome(status: str, value: float, u0: float, iterations: int) -> IterationOutcome:
    return IterationOutcome(
        status=status,
        final_value=value / u0 if u0 != 0 else value,
        iterations_used=iterations,
    )


def _iterate(
    step: Callable[[float, int], float], u0: float, limits: IterationLimits
) -> IterationOutcome:
    current = u0
    for n in range(1, limits["max_iter"] + 1):
        try:
            new = step(current, n)
        except OverflowError:
            return _outcome(const.STATUS_DIVERGED, math.inf, u0, n)
        if not math.isfinite(new) or abs(new) > limits["blowup"]:
            return _outcome(const.STATUS_DIVERGED, new, u0, n)
        if abs(new - current) < limits["tolerance"] * max(1.0, abs(current)):
            return _outcome(const.STATUS_CONVERGED, new, u0, n)
        current = new
    return _outcome(const.STATUS_MAXITER, current, u0, limits["max_iter"])


def iterate_explicit(
    r: float,
    epsilon: float,
    u0: float = 1.0,
    Z: int = 1,
    limits: IterationLimits | None = None,
) -> IterationOutcome:
    """Iterate U_{n+1} = u0 + r (1 + eps U_n^Z) U_n from U_0 = u0."""
    _check_finite(r=r, epsilon=epsilon, u0=u0)
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")
    limits = IterationLimitsSchema(limits or {})
    return _iterate(
        lambda u, _: u0 + r * (1 + epsilon * u**Z) * u, u0, limits
    )


def iterate_implicit(
    r: float,
    epsilon: float,
    u0: float = 1.0,
    limits: IterationLimits | None = None,
) -> IterationOutcome:
    """Iterate (1 - r (1 + 2 eps U_n)) U_{n+1} = u0 - r eps U_n^2.

    Each step is the exact solve of the linearised update; a pivot within
    1e-14 of zero raises :class:`SingularStepError`.
    """
    _check_finite(r=r, epsilon=epsilon, u0=u0)
    limits = IterationLimitsSchema(limits or {})

    def step(u: float, n: int) -> float:
        pivot = 1 - r * (1 + 2 * epsilon * u)
        if abs(pivot) < const.PIVOT_EPS:
            raise SingularStepError(pivot, n)
        return (u0 - r * epsilon * u**2) / pivot

    return _iterate(step, u0, limits)


def converges(
    iterate: Callable[[IterationLimits], IterationOutcome],
    limits: IterationLimits,
) -> bool:
    """Stability oracle: MaxIterations is retried once with a 10x budget."""
    outcome = iterate(limits)
    if outcome["status"] == const.STATUS_MAXITER:
        retry = dict(limits, max_iter=limits["max_iter"] * const.RETRY_BUDGET_FACTOR)
        _LOGGER.debug(
            "retrying undecided trajectory with %s iterations", retry["max_iter"]
        )
        outcome = iterate(retry)
        if outcome["status"] == const.STATUS_MAXITER:
            _LOGGER.warning(
                "trajectory undecided after %s iterations, counted as unstable",
                retry["max_iter"],
            )
    return outcome["status"] == const.STATUS_CONVERGED


def bisect_stability_edge(
    is_stable: Callable[[float], bool],
    low: float,
    high: float,
    resolution: float,
) -> float:
    """Locate the stable/unstable edge between ``low`` (stable) and ``high``."""
    if not low < high:
        raise ScanRangeError(f"empty bracket [{low}, {high}]")
    if not is_stable(low):
        raise ScanRangeError(f"lower end {low} of the bracket is already unstable")
    if is_stable(high):
        raise ScanRangeError(f"upper end {high} of the bracket is still stable")
    while high - low > resolution:
        middle = 0.5 * (low + high)
        if is_stable(middle):
            low = middle
        else:
            high = middle
        _LOGGER.debug("edge bracket [%s, %s]", low, high)
    return 0.5 * (low + high)


def empirical_border_r(
    eps_hat: float,
    Z: int = 1,
    resolution: float = const.BORDER_RESOLUTION,
    limits: IterationLimits | None = None,
    u0: float = 1.0,
) -> float:
    """Explicit stability border in r found by bisection on brute-force runs."""
    _check_finite(eps_hat=eps_hat, u0=u0)
    if u0 == 0:
        raise DomainError("u0 must be nonzero")
    limits = IterationLimitsSchema(limits or {})
    epsilon = eps_hat / u0**Z

    def stable(r: float) -> bool:
        return converges(
            lambda lim: iterate_explicit(r, epsilon, u0, Z, lim), limits
        )

    edge = bisect_stability_edge(stable, 0.0, 1.0, resolution)
    _LOGGER.info(
        "empirical explicit border at eps_hat=%s, Z=%s: r=%s", eps_hat, Z, edge
    )
    return edge


def _check_axis(name: str, axis) -> np.ndarray:
    values = np.asarray(axis, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DomainError(f"{name} must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{name} must be finite")
    if np.any(np.diff(values) < 0):
        raise DomainError(f"{name} must be sorted")
    return values


def iterate_batch(
    r: np.ndarray,
    epsilon: np.ndarray,
    u0: float,
    Z: int,
    scheme: str,
    limits: IterationLimits,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised brute-force iteration of many independent cells.

    Finished cells are dropped from the working set at every step, so the
    cost is driven by the slow cells near the borders. Returns the status,
    iterations used and final U/u0 per cell.
    """
    size = r.size
    status = np.full(size, const.STATUS_MAXITER, dtype=object)
    used = np.full(size, limits["max_iter"], dtype=int)
    final = np.full(size, np.nan)

    active = np.arange(size)
    current = np.full(size, float(u0))
    r_a, eps_a = r.copy(), epsilon.copy()

    with np.errstate(all="ignore"):
        for n in range(1, limits["max_iter"] + 1):
            if active.size == 0:
                break
            singular = np.zeros(active.size, dtype=bool)
            if scheme == const.SCHEME_EXPLICIT:
                new = u0 + r_a * (1 + eps_a * current**Z) * current
            else:
                pivot = 1 - r_a * (1 + 2 * eps_a * current)
                singular = np.abs(pivot) < const.PIVOT_EPS
                new = (u0 - r_a * eps_a * current**2) / np.where(singular, 1.0, pivot)

            diverged = ~singular & (
                ~np.isfinite(new) | (np.abs(new) > limits["blowup"])
            )
            converged = (
                ~singular
                & ~diverged
                & (
                    np.abs(new - current)
                    < limits["tolerance"] * np.maximum(1.0, np.abs(current))
                )
            )
            done = singular | diverged | converged
            if np.any(done):
                cells = active[done]
                status[active[singular]] = const.STATUS_SINGULAR
                status[active[diverged]] = const.STATUS_DIVERGED
                status[active[converged]] = const.STATUS_CONVERGED
                used[cells] = n
                final[cells] = np.where(singular[done], current[done], new[done])

            keep = ~done
            active = active[keep]
            current = new[keep]
            r_a, eps_a = r_a[keep], eps_a[keep]

        final[active] = current

    if u0 != 0:
        final = final / u0
    return status, used, final


def scan_region(
    r_axis,
    eps_hat_axis,
    Z: int = 1,
    scheme: str = const.SCHEME_EXPLICIT,
    limits: IterationLimits | None = None,
    u0: float = 1.0,
) -> RegionGrid:
    """Analytic and empirical verdicts on the grid, row-major in (eps_hat, r)."""
    r_axis = _check_axis("r_axis", r_axis)
    eps_hat_axis = _check_axis("eps_hat_axis", eps_hat_axis)
    if scheme not in const.SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}")
    if scheme == const.SCHEME_IMPLICIT and Z != 1:
        raise DomainError("the implicit iteration is defined for Z == 1 only")
    _check_finite(u0=u0)
    if u0 == 0:
        raise DomainError("u0 must be nonzero")
    limits = IterationLimitsSchema(limits or {})

    analytic = np.vstack(
        [stable_mask(r_axis, eps_hat, Z, scheme) for eps_hat in eps_hat_axis]
    )
    eps_grid, r_grid = np.meshgrid(eps_hat_axis, r_axis, indexing="ij")
    _LOGGER.info(
        "scanning %s x %s %s grid (Z=%s)",
        eps_hat_axis.size,
        r_axis.size,
        scheme,
        Z,
    )
    status, used, final = iterate_batch(
        r_grid.ravel(), eps_grid.ravel() / u0**Z, u0, Z, scheme, limits
    )
    shape = analytic.shape
    return RegionGrid(
        r_axis=r_axis,
        eps_hat_axis=eps_hat_axis,
        Z=Z,
        scheme=scheme,
        u0=u0,
        analytic=analytic,
        empirical=status.reshape(shape),
        iterations=used.reshape(shape),
        final_values=final.reshape(shape),
    )


def disagreements(grid: RegionGrid) -> np.ndarray:
    """Cells whose decided empirical status contradicts the analytic verdict.

    MaxIterations and singular cells are undecided and never disagree.
    """
    analytic = grid["analytic"]
    empirical = grid["empirical"]
    return (analytic & (empirical == const.STATUS_DIVERGED)) | (
        ~analytic & (empirical == const.STATUS_CONVERGED)
    )
