"""Exact Catalan and Fuss-Catalan numbers."""

import logging
import math
from collections.abc import Iterator
from fractions import Fraction

from . import const
from .exceptions import CapacityError, DomainError

_LOGGER = logging.getLogger(__name__)


def _check_order(i: int, max_order: int) -> None:
    if i < 0:
        raise DomainError(f"order must be >= 0, got {i}")
    if i > max_order:
        raise CapacityError(f"order {i} exceeds the configured maximum {max_order}")


def catalan(i: int, max_order: int = const.DEFAULT_MAX_ORDER) -> int:
    """Return the i-th Catalan number (2i)!/(i!(i+1)!)."""
    _check_order(i, max_order)
    return math.comb(2 * i, i) // (i + 1)


def fuss_catalan(i: int, Z: int, max_order: int = const.DEFAULT_MAX_ORDER) -> int:
    """Return the Fuss-Catalan number ((Z+1)i)!/(i!(Zi+1)!).

    These are the coefficients of the perturbation series of a degree Z+1
    nonlinearity; Z=1 gives the Catalan numbers.
    """
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")
    _check_order(i, max_order)
    binomial = math.comb((Z + 1) * i, i)
    value, remainder = divmod(binomial, Z * i + 1)
    if remainder:
        raise ArithmeticError(
            f"binomial({(Z + 1) * i}, {i}) not divisible by {Z * i + 1}"
        )
    return value


def fuss_catalan_ratio(i: int, Z: int) -> Fraction:
    """Exact ratio C(i+1, Z) / C(i, Z)."""
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")
    if i < 0:
        raise DomainError(f"order must be >= 0, got {i}")
    numerator = math.prod((Z + 1) * i + k for k in range(1, Z + 2))
    denominator = (i + 1) * math.prod(Z * i + k for k in range(2, Z + 2))
    return Fraction(numerator, denominator)


def iter_fuss_catalan(Z: int) -> Iterator[int]:
    """Yield C(0, Z), C(1, Z), ... without an order cap."""
    if Z < 1:
        raise DomainError(f"degree Z must be >= 1, got {Z}")
    value = 1
    i = 0
    while True:
        yield value
        ratio = fuss_catalan_ratio(i, Z)
        value, remainder = divmod(value * ratio.numerator, ratio.denominator)
        if remainder:
            raise ArithmeticError(f"non-integral Fuss-Catalan term at order {i + 1}")
        i += 1


def catalan_by_convolution(i: int) -> int:
    """Catalan numbers through C(n+1) = sum C(k) C(n-k), used as an oracle."""
    if i < 0:
        raise DomainError(f"order must be >= 0, got {i}")
    values = [1]
    for n in range(i):
        values.append(sum(values[k] * values[n - k] for k in range(n + 1)))
    return values[i]
