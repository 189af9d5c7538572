"""Stability of discretised PDEs.

Two pieces: the Fourier-symbol test for constant-coefficient operators and
the 1-D nonlinear Poisson example, d2(v + v^2)/dx2 on [-1, 1] with
Dirichlet zeros, discretised with the (1, -2, 1) stencil.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from jinja2 import Environment, TemplateSyntaxError
from scipy import linalg, optimize

from . import const
from .definitions import (
    FourierSymbol,
    FourierSymbolSchema,
    FourierVerdict,
    IterationLimits,
    IterationLimitsSchema,
    IterationOutcome,
    PoissonRun,
    PoissonRunSchema,
    PoissonSpectrum,
)
from .dpi import bisect_stability_edge, converges
from .exceptions import DomainError
from .series import theta, theta_max

_LOGGER = logging.getLogger(__name__)

# i**m for m modulo 4, keeps (i eta)^m exact
_I_POWERS = (1, 1j, -1, -1j)


def _symbol_values(symbol: FourierSymbol, etas: np.ndarray) -> np.ndarray:
    values = np.zeros(etas.shape[0], dtype=complex)
    for dim, order, coefficient in symbol["coefficients"]:
        values += coefficient * _I_POWERS[order % 4] * etas[:, dim - 1] ** order
    return values


def fourier_eigenvalue(symbol: FourierSymbol, eta) -> complex:
    """lambda(eta) = sum a_lm (i eta_l)^m."""
    symbol = FourierSymbolSchema(symbol)
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if eta.ndim != 1 or eta.size != symbol["d"]:
        raise DomainError(f"eta must have {symbol['d']} components, got {eta.size}")
    return complex(_symbol_values(symbol, eta[np.newaxis, :])[0])


def _verdict_label(stable: bool | None) -> str:
    if stable is None:
        return const.VERDICT_UNDECIDED
    return const.VERDICT_STABLE if stable else const.VERDICT_UNSTABLE


def _theta_verdict(
    r: float, eps_hat: float, Z: int
) -> tuple[float | None, bool | None]:
    if r == 1:
        return None, None
    value = theta(r, eps_hat, Z)
    return value, abs(value) <= theta_max(Z)


def fourier_stability(
    symbol: FourierSymbol,
    eta_grid,
    eps_hat: float,
    Z: int = 1,
    samples: bool = False,
) -> FourierVerdict:
    """Stability of the operator for a nonlinearity of strength eps_hat.

    r is the largest |lambda| over the frequency grid; at r == 1 the verdict
    is undecided. With ``samples`` the per-frequency (eta..., theta, verdict)
    tuples are returned as well.
    """
    symbol = FourierSymbolSchema(symbol)
    etas = np.asarray(eta_grid, dtype=float)
    if etas.ndim == 1 and symbol["d"] == 1:
        etas = etas[:, np.newaxis]
    if etas.ndim != 2 or etas.shape[0] == 0 or etas.shape[1] != symbol["d"]:
        raise DomainError(
            f"eta_grid must be a nonempty list of {symbol['d']}-component vectors"
        )

    magnitudes = np.abs(_symbol_values(symbol, etas))
    r = float(magnitudes.max())
    theta_value, stable = _theta_verdict(r, eps_hat, Z)
    if stable is None:
        _LOGGER.warning("spectral radius is exactly 1, verdict undecided")

    rows = None
    if samples:
        rows = []
        for eta, magnitude in zip(etas, magnitudes):
            sample_theta, sample_stable = _theta_verdict(float(magnitude), eps_hat, Z)
            rows.append(
                (*map(float, eta), sample_theta, _verdict_label(sample_stable))
            )
    return FourierVerdict(r=r, theta=theta_value, stable=stable, samples=rows)


def tridiagonal_eigenvalues(M: int) -> np.ndarray:
    """Eigenvalues 2(cos(k pi/(M+1)) - 1) of tridiag(1, -2, 1), ascending."""
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    k = np.arange(1, M + 1)
    return np.sort(2 * (np.cos(k * np.pi / (M + 1)) - 1))


def tridiagonal_eigenvalues_numeric(M: int) -> np.ndarray:
    """Same spectrum through a symmetric tridiagonal eigensolver."""
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    return linalg.eigh_tridiagonal(
        np.full(M, -2.0), np.ones(M - 1), eigvals_only=True
    )


def _check_grid(M: int, beta: float) -> None:
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    if not (math.isfinite(beta) and beta > 0):
        raise DomainError(f"beta must be positive, got {beta!r}")


def _radius_profile(gamma):
    return 2 * np.abs(np.cos(gamma * np.pi) - 1) * (1 + 8 * gamma * (1 - gamma))


def _source_profile(gamma):
    u0 = 4 * gamma * (1 - gamma)
    return 2 * np.abs((np.cos(gamma * np.pi) - 1) * (u0 + u0**2))


def _estimates(M: int, beta: float) -> tuple[float, float, float]:
    gamma = np.arange(1, M + 1) / (M + 1)
    r = float(np.max(beta * _radius_profile(gamma)))
    v0 = float(np.max(beta * _source_profile(gamma)))
    epsilon = 2 * beta * (1 - math.cos(M * math.pi / (M + 1))) / r
    return r, v0, epsilon


def poisson_spectrum(M: int, beta: float) -> PoissonSpectrum:
    """Spectral estimates r, V0, eps, eps_hat of the discrete Poisson example.

    Maximises over the actual grid modes k = 1..M, gamma = k/(M+1). The
    exact radius of the product matrix is returned next to the estimate.
    """
    _check_grid(M, beta)
    r, v0, epsilon = _estimates(M, beta)
    return PoissonSpectrum(
        r=r,
        V0=v0,
        epsilon=epsilon,
        eps_hat=epsilon * v0,
        product_radius=product_spectral_radius(M, beta),
    )


def continuous_spectrum_estimates() -> dict[str, float]:
    """Per-unit-beta maxima of the same profiles over continuous gamma."""
    estimates = {}
    for key, profile in (("r", _radius_profile), ("V0", _source_profile)):
        result = optimize.minimize_scalar(
            lambda g: -profile(g),
            bounds=(0.0, 1.0),
            method="bounded",
            options={"xatol": 1e-12},
        )
        estimates[key] = float(-result.fun)
    return estimates


def _initial_profile(M: int) -> np.ndarray:
    dx = 2 / (M + 1)
    x = -1 + dx * np.arange(1, M + 1)
    return (1 - x) * (1 + x)


def product_spectral_radius(M: int, beta: float) -> float:
    """Spectral radius of beta * tridiag(1, -2, 1) * diag(1 + 2 u0(x_i)).

    The estimator in :func:`poisson_spectrum` pairs modes and grid points;
    this is the exact value of the (non-normal) product, for diagnostics.
    """
    _check_grid(M, beta)
    laplacian = (
        np.diag(np.full(M, -2.0))
        + np.diag(np.ones(M - 1), 1)
        + np.diag(np.ones(M - 1), -1)
    )
    jacobian = beta * laplacian @ np.diag(1 + 2 * _initial_profile(M))
    return float(np.max(np.abs(np.linalg.eigvals(jacobian))))


def analytic_cfl_bound(M: int) -> float:
    """Largest beta with theta(beta) <= 1/4 for the Poisson example."""
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    slope = _estimates(M, 1.0)[0]

    def excess(beta: float) -> float:
        r, v0, epsilon = _estimates(M, beta)
        return theta(r, epsilon * v0) - theta_max(1)

    upper = (1 - 1e-9) / slope
    bound = optimize.bisect(
        excess,
        upper * 1e-9,
        upper,
        xtol=const.BISECT_XTOL,
        maxiter=const.BISECT_MAXITER,
    )
    _LOGGER.info("analytic CFL bound for M=%s: %s", M, bound)
    return bound


def compile_residual(formula: str) -> Callable[[np.ndarray], np.ndarray]:
    """Compile a residual expression in ``v`` for elementwise evaluation."""
    env = Environment()
    try:
        expression = env.compile_expression(formula)
    except TemplateSyntaxError as err:
        raise DomainError(f"invalid residual formula {formula!r}: {err}") from err

    def residual(v: np.ndarray) -> np.ndarray:
        values = expression(v=v)
        if values is None:
            raise DomainError(f"residual formula {formula!r} evaluated to nothing")
        return np.broadcast_to(np.asarray(values, dtype=float), v.shape)

    return residual


def simulate_poisson(
    run: PoissonRun, limits: IterationLimits | None = None
) -> tuple[IterationOutcome, list[float]]:
    """Iterate the discrete Poisson example and classify the run.

    scheme "picard": u_{n+1} = u_0 + beta T R(u_n), the fixed-point iteration.
    scheme "march":  u_{n+1} = u_n + beta T R(u_n), forward Euler in time.
    T is the (1, -2, 1) stencil with zero boundary values. The starting
    parabola carries an alternating mode of amplitude ``seed``, so every grid
    mode is excited from the first step instead of from round-off. Returns the
    outcome (final_value is the max-norm of the last iterate) and the max-norm
    history starting with the initial profile.
    """
    run = PoissonRunSchema(run)
    limits = IterationLimitsSchema(dict(limits or {}, max_iter=run["max_iter"]))
    residual = compile_residual(run["residual"])
    beta = run["beta"]
    marching = run["scheme"] == const.PDE_SCHEME_MARCH

    start = _initial_profile(run["M"])
    start += run["seed"] * (-1.0) ** np.arange(run["M"])
    padded = np.zeros(run["M"] + 2)
    current = start.copy()
    current_norm = float(np.max(np.abs(current)))
    history = [current_norm]

    with np.errstate(all="ignore"):
        for n in range(1, limits["max_iter"] + 1):
            padded[1:-1] = current
            w = residual(padded)
            update = beta * (w[:-2] - 2 * w[1:-1] + w[2:])
            new = (current if marching else start) + update
            norm = float(np.max(np.abs(new)))
            history.append(norm)

            if not math.isfinite(norm) or norm > limits["blowup"]:
                _LOGGER.debug("beta=%s diverged after %s steps", beta, n)
                return IterationOutcome(
                    status=const.STATUS_DIVERGED, final_value=norm, iterations_used=n
                ), history
            change = float(np.max(np.abs(new - current)))
            if change < limits["tolerance"] * max(1.0, current_norm):
                _LOGGER.debug("beta=%s converged after %s steps", beta, n)
                return IterationOutcome(
                    status=const.STATUS_CONVERGED, final_value=norm, iterations_used=n
                ), history
            current, current_norm = new, norm

    return IterationOutcome(
        status=const.STATUS_MAXITER,
        final_value=current_norm,
        iterations_used=limits["max_iter"],
    ), history


def experimental_cfl_bound(
    M: int,
    limits: IterationLimits | None = None,
    residual: str = const.DEFAULT_POISSON_RESIDUAL_FORMULA,
    scheme: str = const.PDE_SCHEME_PICARD,
    beta_low: float | None = None,
    beta_high: float | None = None,
    resolution: float = const.POISSON_RESOLUTION,
) -> float:
    """Empirical stability edge in beta, bisected with simulate_poisson.

    Without ``limits`` every bisection run gets POISSON_MAX_ITER steps
    (and the usual tenfold retry).
    """
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    if scheme not in const.PDE_SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}")
    limits = IterationLimitsSchema(limits or {"max_iter": const.POISSON_MAX_ITER})
    default_low, default_high = const.POISSON_BRACKETS[scheme]
    low = default_low if beta_low is None else beta_low
    high = default_high if beta_high is None else beta_high

    def stable(beta: float) -> bool:
        def run(lim: IterationLimits) -> IterationOutcome:
            config = {
                "M": M,
                "beta": beta,
                "max_iter": lim["max_iter"],
                "residual": residual,
                "scheme": scheme,
            }
            return simulate_poisson(config, lim)[0]

        return converges(run, limits)

    edge = bisect_stability_edge(stable, low, high, resolution)
    _LOGGER.info(
        "experimental CFL bound for M=%s (%s, %s): %s", M, scheme, residual, edge
    )
    return edge
