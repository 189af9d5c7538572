"""Nonlinear stability numbers, shifts and borders.

Everything here is a closed-form (or series) evaluation; the brute-force
counterparts live in :mod:`dpistab.dpi`.
"""

import itertools
import logging
import math
from fractions import Fraction

import numpy as np
from scipy import optimize

from . import const
from .combinatorics import iter_fuss_catalan
from .definitions import BorderVerdict, StabilityPoint, StabilityPointSchema
from .exceptions import DivergenceError, DomainError, SingularityError

_LOGGER = logging.getLogger(__name__)

# above this degree Z**Z stops being a reasonable integer to build
_EXACT_THETA_MAX_DEGREE = 256


def _check_degree(Z: int) -> None:
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")


def theta(r: float, eps_hat: float, Z: int = 1) -> float:
    """Nonlinear stability number r*eps_hat/(1-r)^(Z+1)."""
    _check_degree(Z)
    if r == 1:
        raise SingularityError("theta has a pole at r == 1")
    return r * eps_hat / (1 - r) ** (Z + 1)


def theta_max_exact(Z: int) -> Fraction:
    """Convergence radius Z^Z/(Z+1)^(Z+1) as an exact rational."""
    _check_degree(Z)
    return Fraction(Z**Z, (Z + 1) ** (Z + 1))


def theta_max(Z: int) -> float:
    """Convergence radius of sum C(i, Z) theta^i."""
    _check_degree(Z)
    if Z <= _EXACT_THETA_MAX_DEGREE:
        return float(theta_max_exact(Z))
    return math.exp(Z * math.log(Z) - (Z + 1) * math.log(Z + 1))


def _series_term(coefficient: int, i: int, value: float) -> float:
    """coefficient * value**i without overflowing on huge coefficients."""
    if value == 0:
        return 0.0
    try:
        return float(coefficient) * value**i
    except OverflowError:
        magnitude = math.exp(math.log(coefficient) + i * math.log(abs(value)))
        return -magnitude if value < 0 and i % 2 else magnitude


def shift_partial_sum(theta_value: float, Z: int, terms: int) -> float:
    """Return sum_{i=1}^{terms} C(i, Z) theta^i with exact coefficients."""
    _check_degree(Z)
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    coefficients = itertools.islice(iter_fuss_catalan(Z), 1, terms + 1)
    return math.fsum(
        _series_term(c, i, theta_value) for i, c in enumerate(coefficients, start=1)
    )


def shift_series(theta_value: float, Z: int = 1) -> float:
    """Adaptive sum_{i>=1} C(i, Z) theta^i.

    Stops once the next term falls below 1e-15 of the running sum or after
    10000 terms.
    """
    _check_degree(Z)
    if abs(theta_value) > theta_max(Z):
        raise DivergenceError(
            f"|theta|={abs(theta_value)!r} beyond the radius {theta_max(Z)!r}"
        )
    terms = []
    total = 0.0
    coefficients = iter_fuss_catalan(Z)
    next(coefficients)
    for i, c in enumerate(coefficients, start=1):
        term = _series_term(c, i, theta_value)
        if abs(term) <= const.SERIES_REL_TOL * abs(total):
            break
        terms.append(term)
        total += term
        if i >= const.SERIES_MAX_TERMS:
            _LOGGER.warning(
                "shift series truncated at %s terms (theta=%s, Z=%s)",
                i,
                theta_value,
                Z,
            )
            break
    return math.fsum(terms)


def _closed_form_shift_factor(theta_value: float) -> float:
    if theta_value > 0.25:
        raise DivergenceError(f"theta={theta_value!r} exceeds 1/4")
    return 4 * theta_value / (1 + math.sqrt(1 - 4 * theta_value)) ** 2


def nonlinear_shift(r: float, eps_hat: float) -> float:
    """Shift of the quadratic (Z=1) solution away from the linear 1/(1-r)."""
    return _closed_form_shift_factor(theta(r, eps_hat)) / (1 - r)


def converged_solution(r: float, eps_hat: float) -> float:
    """U/u0 of the quadratic (Z=1) explicit iteration at its fixed point."""
    return (1 + _closed_form_shift_factor(theta(r, eps_hat))) / (1 - r)


def series_solution(r: float, eps_hat: float, Z: int = 1) -> float:
    """U/u0 = (1 + sum C(i, Z) theta^i)/(1 - r) for any degree Z."""
    return (1 + shift_series(theta(r, eps_hat, Z), Z)) / (1 - r)


def explicit_border_r(eps_hat: float, Z: int = 1) -> BorderVerdict:
    """Largest r for which the explicit iteration stays stable."""
    _check_degree(Z)
    if not math.isfinite(eps_hat) or eps_hat < 0:
        raise DomainError(f"eps_hat must be finite and >= 0, got {eps_hat!r}")
    if eps_hat == 0:
        return BorderVerdict(r_max=1.0, theta_at_border=0.0)

    if Z == 1:
        # reciprocal of 1+2e+2sqrt(e+e^2), free of cancellation for large e
        r_max = 1 / (1 + 2 * eps_hat + 2 * math.sqrt(eps_hat + eps_hat**2))
    else:
        b = eps_hat / theta_max(Z)
        r_tilde = optimize.bisect(
            lambda x: x ** (Z + 1) + b * x - b,
            0.0,
            1.0,
            xtol=const.BISECT_XTOL,
            maxiter=const.BISECT_MAXITER,
        )
        r_max = 1 - r_tilde
    return BorderVerdict(r_max=r_max, theta_at_border=theta(r_max, eps_hat, Z))


def implicit_gap(eps_hat: float, Z: int = 1) -> tuple[float, float]:
    """Open interval (r_low, r_high) where implicit iteration cannot converge.

    The roots of r*eps_hat/(1-r)^2 = theta_max(Z); r_low * r_high == 1.
    """
    _check_degree(Z)
    if not math.isfinite(eps_hat) or eps_hat < 0:
        raise DomainError(f"eps_hat must be finite and >= 0, got {eps_hat!r}")
    q = eps_hat / (2 * theta_max(Z))
    r_high = 1 + q + math.sqrt(2 * q + q**2)
    return 1 / r_high, r_high


def stable_mask(
    r_values, eps_hat: float, Z: int = 1, scheme: str = const.SCHEME_EXPLICIT
) -> np.ndarray:
    """Analytic verdicts for many r at a fixed eps_hat; borders count as stable."""
    _check_degree(Z)
    if scheme not in const.SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}")
    r = np.asarray(r_values, dtype=float)

    # signed nonlinearity: only the magnitude of theta is bounded
    with np.errstate(divide="ignore", invalid="ignore"):
        theta_values = r * eps_hat / (1 - r) ** (Z + 1)
    signed = (r != 1) & (np.abs(theta_values) <= theta_max(Z))
    if scheme == const.SCHEME_EXPLICIT:
        signed &= np.abs(r) < 1

    if eps_hat < 0:
        return signed
    if scheme == const.SCHEME_EXPLICIT:
        r_max = explicit_border_r(eps_hat, Z)["r_max"]
        return np.where(r >= 0, r <= r_max, signed)
    r_low, r_high = implicit_gap(eps_hat, Z)
    return ~((r > r_low) & (r < r_high))


def is_stable(point: StabilityPoint, scheme: str = const.SCHEME_EXPLICIT) -> bool:
    """Analytic verdict for a single point."""
    point = StabilityPointSchema(point)
    return bool(stable_mask([point["r"]], point["eps_hat"], point["Z"], scheme)[0])
