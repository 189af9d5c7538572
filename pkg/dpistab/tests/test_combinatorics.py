"""Tests for Catalan and Fuss-Catalan numbers"""

import math
from fractions import Fraction
from itertools import islice

import pytest

from ..combinatorics import (
    catalan,
    catalan_by_convolution,
    fuss_catalan,
    fuss_catalan_ratio,
    iter_fuss_catalan,
)
from ..exceptions import CapacityError, DomainError


@pytest.mark.parametrize("i, expected", [(0, 1), (1, 1), (3, 5), (10, 16796)])
def test_catalan(i: int, expected: int) -> None:
    """Tests known Catalan numbers"""
    assert catalan(i) == expected


@pytest.mark.parametrize(
    "i, Z, expected", [(3, 1, 5), (0, 5, 1), (2, 2, 3), (5, 2, 273), (4, 3, 140)]
)
def test_fuss_catalan(i: int, Z: int, expected: int) -> None:
    """Tests known Fuss-Catalan numbers"""
    assert fuss_catalan(i, Z) == expected


def test_fuss_catalan_reduces_to_catalan() -> None:
    """Tests that Z=1 gives back the Catalan numbers"""
    for i in range(31):
        assert fuss_catalan(i, 1) == catalan(i)


def test_convolution_recurrence() -> None:
    """Tests C(n+1) = sum C(k) C(n-k) against the direct formula"""
    for i in range(21):
        assert catalan_by_convolution(i) == catalan(i)


@pytest.mark.parametrize("Z", [1, 2, 3, 4, 5])
def test_divisibility(Z: int) -> None:
    """Tests that Zi+1 divides binomial((Z+1)i, i)"""
    for i in range(21):
        assert math.comb((Z + 1) * i, i) % (Z * i + 1) == 0


@pytest.mark.parametrize("Z", [1, 2, 3, 4])
def test_generator_matches_direct_formula(Z: int) -> None:
    """Tests the incremental generator against fuss_catalan"""
    assert list(islice(iter_fuss_catalan(Z), 41)) == [
        fuss_catalan(i, Z) for i in range(41)
    ]


def test_generator_goes_beyond_order_cap() -> None:
    """Tests that the generator is not limited by the configured max order"""
    values = list(islice(iter_fuss_catalan(1), 101))
    assert values[100] == catalan(100, max_order=100)


def test_ratio() -> None:
    """Tests the exact ratio of consecutive terms"""
    assert fuss_catalan_ratio(1, 1) == Fraction(2)
    assert fuss_catalan_ratio(4, 2) == Fraction(fuss_catalan(5, 2), fuss_catalan(4, 2))


def test_errors() -> None:
    """Tests domain and capacity errors"""
    with pytest.raises(DomainError):
        catalan(-1)
    with pytest.raises(CapacityError):
        catalan(65)
    with pytest.raises(CapacityError):
        fuss_catalan(11, 2, max_order=10)
    with pytest.raises(DomainError):
        fuss_catalan(1, 0)
    with pytest.raises(DomainError):
        next(iter_fuss_catalan(0))
