"""Perturbation amplitude cascades.

The iterate is expanded as U_n = sum_i u[i][n] eps^i and the coefficients of
every power of eps are tracked separately. Column 0 of every table is the
initial condition (u0, 0, 0, ...).
"""

import logging
import math

import numpy as np

from . import const
from .combinatorics import fuss_catalan
from .definitions import AmplitudeTable
from .exceptions import ConvergenceDomainError, DomainError, SingularityError

_LOGGER = logging.getLogger(__name__)


def _check_cascade_args(r: float, u0: float, order: int, iterations: int) -> None:
    if not (math.isfinite(r) and math.isfinite(u0)):
        raise DomainError(f"r and u0 must be finite, got r={r!r}, u0={u0!r}")
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    if iterations < 1:
        raise DomainError(f"iterations must be >= 1, got {iterations}")


def _initial_table(u0: float, order: int, iterations: int) -> np.ndarray:
    amplitudes = np.zeros((order + 1, iterations + 1))
    amplitudes[0, 0] = u0
    return amplitudes


def _truncated_power(column: np.ndarray, exponent: int) -> np.ndarray:
    """eps-expansion of (sum_i column[i] eps^i)**exponent, truncated."""
    size = len(column)
    power = column
    for _ in range(exponent - 1):
        power = np.convolve(power, column)[:size]
    return power


class _ConvergenceTracker:
    """Per-order streaks of relative changes below AMPLITUDE_RTOL.

    Order i is still identically zero up to column i - 1, so its streak only
    starts counting after column i.
    """

    def __init__(self, orders: int):
        self.orders = np.arange(orders)
        self.streak = np.zeros(orders, dtype=int)
        self.converged_at: list[int | None] = [None] * orders

    def update(self, old: np.ndarray, new: np.ndarray, column: int) -> None:
        settled = (np.abs(new - old) <= const.AMPLITUDE_RTOL * np.abs(new)) & (
            column > self.orders
        )
        self.streak = np.where(settled, self.streak + 1, 0)
        for i in np.flatnonzero(self.streak >= const.AMPLITUDE_STREAK):
            if self.converged_at[i] is None:
                self.converged_at[i] = column

    @property
    def all_converged(self) -> bool:
        return all(x is not None for x in self.converged_at)


def _divergence_flags(amplitudes: np.ndarray, converged_at: list) -> list[bool]:
    last = amplitudes[:, -1]
    return [
        converged_at[i] is None
        and (not math.isfinite(last[i]) or abs(last[i]) > const.AMPLITUDE_BLOWUP)
        for i in range(len(last))
    ]


def explicit_cascade(
    r: float,
    u0: float = 1.0,
    Z: int = 1,
    order: int = 4,
    iterations: int = 1000,
    stop_when_converged: bool = False,
) -> AmplitudeTable:
    """Amplitudes of the explicit iteration U_{n+1} = u0 + r U_n + r eps U_n^(Z+1).

    The eps-expansion of U_n^(Z+1) is built from Z truncated convolutions of
    the amplitude column. With ``stop_when_converged`` the sweep ends as soon
    as every order has settled and the table is cut at that column.
    """
    _check_cascade_args(r, u0, order, iterations)
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")

    amplitudes = _initial_table(u0, order, iterations)
    tracker = _ConvergenceTracker(order + 1)
    last_column = iterations

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(iterations):
            column = amplitudes[:, n]
            source = _truncated_power(column, Z + 1)
            new = r * column
            new[0] += u0
            new[1:] += r * source[:-1]
            amplitudes[:, n + 1] = new

            if not np.all(np.isfinite(new)):
                _LOGGER.info("cascade left the floating point range at n=%s", n + 1)
                last_column = n + 1
                break
            tracker.update(column, new, n + 1)
            if stop_when_converged and tracker.all_converged:
                last_column = n + 1
                break

    amplitudes = amplitudes[:, : last_column + 1]
    return AmplitudeTable(
        amplitudes=amplitudes,
        order=order,
        iterations=last_column,
        r=r,
        u0=u0,
        Z=Z,
        converged_at=tracker.converged_at,
        diverged=_divergence_flags(amplitudes, tracker.converged_at),
    )


def hand_cascade(r: float, u0: float = 1.0, iterations: int = 1000) -> AmplitudeTable:
    """Orders 0 to 4 of the quadratic cascade with hand-expanded sources."""
    _check_cascade_args(r, u0, 4, iterations)
    u = _initial_table(u0, 4, iterations)
    for n in range(iterations):
        a0, a1, a2, a3, a4 = u[:, n]
        u[0, n + 1] = u0 + r * a0
        u[1, n + 1] = r * a1 + r * a0**2
        u[2, n + 1] = r * a2 + 2 * r * a0 * a1
        u[3, n + 1] = r * a3 + 2 * r * a0 * a2 + r * a1**2
        u[4, n + 1] = r * a4 + 2 * r * (a2 * a1 + a0 * a3)
    return AmplitudeTable(
        amplitudes=u,
        order=4,
        iterations=iterations,
        r=r,
        u0=u0,
        Z=1,
        converged_at=[None] * 5,
        diverged=_divergence_flags(u, [None] * 5),
    )


def normalized_amplitudes(table: AmplitudeTable) -> np.ndarray:
    """u[i][n] / u0^(Z i + 1)."""
    u0, Z = table["u0"], table["Z"]
    if u0 == 0:
        raise DomainError("amplitudes cannot be normalised when u0 == 0")
    scale = np.array([u0 ** (Z * i + 1) for i in range(table["order"] + 1)])
    return table["amplitudes"] / scale[:, np.newaxis]


def reconstruct_solution(
    table: AmplitudeTable, eps_hat: float, column: int = -1
) -> float:
    """U/u0 = sum_i (normalised amplitude) eps_hat^i at a given column."""
    values = normalized_amplitudes(table)[:, column]
    return math.fsum(value * eps_hat**i for i, value in enumerate(values))


def _geometric_sum(q: float, n: int) -> float:
    """1 + q + ... + q^(n-1)."""
    if q == 1:
        return float(n)
    return (1 - q**n) / (1 - q)


def partial_amplitude(
    i: int, n: int, r: float, u0: float = 1.0, Z: int = 1, normalized: bool = True
) -> float:
    """Closed form of the explicit amplitude u[i][n] for orders 0 and 1.

    u[0][n]/u0 = (r^(n+1) - 1)/(r - 1) and
    u[1][n]/u0^(Z+1) = sum_{k<n} r^(n-k) (u[0][k]/u0)^(Z+1), summed over the
    binomial expansion of (1 - r^(k+1))^(Z+1). Valid for every finite r,
    including |r| >= 1 where the amplitudes grow without limit.
    """
    if i not in (0, 1):
        raise DomainError(f"closed-form partial sums exist for orders 0 and 1, got {i}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")
    if not (math.isfinite(r) and math.isfinite(u0)):
        raise DomainError(f"r and u0 must be finite, got r={r!r}, u0={u0!r}")

    if i == 0:
        value = _geometric_sum(r, n + 1)
    elif r == 1:
        value = math.fsum(float(m) ** (Z + 1) for m in range(1, n + 1))
    else:
        # sum_k r^(n-k) r^(j(k+1)) is r G(r, n) for j = 0, r^(n+j) G(r^(j-1), n) else
        terms = [r * _geometric_sum(r, n)]
        terms += [
            r ** (n + j) * _geometric_sum(r ** (j - 1), n) for j in range(1, Z + 2)
        ]
        value = math.fsum(
            math.comb(Z + 1, j) * (-1) ** j * term for j, term in enumerate(terms)
        ) / (1 - r) ** (Z + 1)
    return value if normalized else value * u0 ** (Z * i + 1)


def implicit_amplitude(i: int, r: float, Z: int = 1) -> float:
    """C(i, Z) r^i / (1-r)^((Z+1) i + 1), for any r != 1."""
    if r == 1:
        raise SingularityError("amplitudes have a pole at r == 1")
    return fuss_catalan(i, Z) * r**i / (1 - r) ** ((Z + 1) * i + 1)


def converged_amplitude(
    i: int, r: float, u0: float = 1.0, Z: int = 1, normalized: bool = True
) -> float:
    """Limit of the explicit amplitude u[i][n].

    Normalised by u0^(Z i + 1) unless ``normalized`` is False. Only
    meaningful for abs(r) < 1, where the explicit cascade converges.
    """
    if abs(r) >= 1:
        raise ConvergenceDomainError(
            f"explicit amplitudes converge only for |r| < 1, got r={r!r}"
        )
    value = implicit_amplitude(i, r, Z)
    return value if normalized else value * u0 ** (Z * i + 1)


def _implicit_column(
    r: float, u0: float, previous: np.ndarray, settled: bool
) -> np.ndarray:
    """One implicit step, solving the eps-expanded linear update order by order.

    (1-r) u[i] = 2r sum_{j+k=i-1} u_old[j] u[k] - r sum_{j+k=i-1} u_old[j] u_old[k]
    With ``settled`` the lower orders enter at their current values in both
    slots.
    """
    new = np.zeros_like(previous)
    new[0] = u0 / (1 - r)
    for i in range(1, len(new)):
        old = new if settled else previous
        lower = new[:i]
        mixed = np.dot(old[:i][::-1], lower)
        squared = np.dot(old[:i][::-1], old[:i])
        new[i] = (2 * r * mixed - r * squared) / (1 - r)
    return new


def implicit_cascade(
    r: float,
    u0: float = 1.0,
    order: int = 4,
    iterations: int = 1,
    settled: bool = True,
) -> AmplitudeTable:
    """Amplitudes of the implicit (linearised) iteration.

    By default every column is the settled fixed point, identical for all
    n >= 1. ``settled=False`` returns the literal transient started from
    U_0 = u0, in which order i reaches that same value from column i+1 on.
    """
    if r == 1:
        raise SingularityError("implicit update is singular at r == 1")
    _check_cascade_args(r, u0, order, iterations)

    amplitudes = _initial_table(u0, order, iterations)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(iterations):
            amplitudes[:, n + 1] = _implicit_column(
                r, u0, amplitudes[:, n], settled
            )
        target = _implicit_column(r, u0, amplitudes[:, 0], True)

    converged_at: list[int | None] = []
    for i in range(order + 1):
        matches = amplitudes[i, 1:] == target[i]
        if not matches[-1]:
            converged_at.append(None)
            continue
        # first column of the trailing run of exact matches
        misses = np.flatnonzero(~matches)
        converged_at.append(int(misses[-1]) + 2 if len(misses) else 1)

    return AmplitudeTable(
        amplitudes=amplitudes,
        order=order,
        iterations=iterations,
        r=r,
        u0=u0,
        Z=1,
        converged_at=converged_at,
        diverged=_divergence_flags(amplitudes, converged_at),
    )
