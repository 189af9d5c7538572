"""Nonlinear stability of discrete Picard iteration."""

from .const import VERSION as __version__
