"""Stability border processors."""

import logging

import voluptuous

from .. import const
from ..definitions import BorderRow, Degree, Finite
from ..series import explicit_border_r, implicit_gap
from .base import Processor

_LOGGER = logging.getLogger(__name__)


class BorderProcessor(Processor):
    """Tabulates the analytic border over a list of eps_hat values.

    Explicit rows carry r_max. Implicit rows carry the gap; r_border is its
    lower end, the first unstable r met when increasing r from 0.
    """

    _LABEL = "BorderProcessor"
    _SCHEMA = voluptuous.Schema(
        {
            voluptuous.Required("eps_hat"): voluptuous.All(
                [Finite], voluptuous.Length(min=1)
            ),
            voluptuous.Optional("Z", default=1): Degree,
            voluptuous.Optional("scheme", default=const.SCHEME_EXPLICIT): voluptuous.In(
                const.SCHEMES
            ),
        }
    )

    def do_process(self):
        """Evaluate the border at every eps_hat."""
        Z = self._input["Z"]
        rows = []
        for eps_hat in self._input["eps_hat"]:
            if self._input["scheme"] == const.SCHEME_EXPLICIT:
                border = explicit_border_r(eps_hat, Z)
                rows.append(
                    BorderRow(
                        eps_hat=eps_hat,
                        r_border=border["r_max"],
                        r_low=None,
                        r_high=None,
                    )
                )
            else:
                r_low, r_high = implicit_gap(eps_hat, Z)
                rows.append(
                    BorderRow(
                        eps_hat=eps_hat, r_border=r_low, r_low=r_low, r_high=r_high
                    )
                )
        _LOGGER.info("computed %s %s border rows", len(rows), self._input["scheme"])
        self._output = rows
