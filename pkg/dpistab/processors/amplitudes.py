"""Amplitude processors."""

import logging
import math

import voluptuous

from .. import const
from ..definitions import AmplitudeRow, Degree, Finite, default_max_iter
from ..exceptions import ConvergenceDomainError, DomainError
from ..perturbation import (
    converged_amplitude,
    explicit_cascade,
    implicit_amplitude,
    implicit_cascade,
    normalized_amplitudes,
)
from . import utils
from .base import Processor

_LOGGER = logging.getLogger(__name__)


class AmplitudesProcessor(Processor):
    """Compares recursively generated amplitudes with their closed forms."""

    _LABEL = "AmplitudesProcessor"
    _SCHEMA = voluptuous.Schema(
        {
            voluptuous.Required("r"): Finite,
            voluptuous.Optional("u0", default=1.0): Finite,
            voluptuous.Optional("Z", default=1): Degree,
            voluptuous.Optional("order", default=8): voluptuous.All(
                voluptuous.Coerce(int), voluptuous.Range(min=0)
            ),
            voluptuous.Optional("iterations", default=None): voluptuous.Any(
                None, voluptuous.All(voluptuous.Coerce(int), voluptuous.Range(min=1))
            ),
            voluptuous.Optional("scheme", default=const.SCHEME_EXPLICIT): voluptuous.In(
                const.SCHEMES
            ),
            voluptuous.Optional("settled", default=True): bool,
        }
    )

    def do_process(self):
        """Build one row per order: i, n_used, recursive, closed_form, rel_err."""
        r = self._input["r"]
        u0 = self._input["u0"]
        Z = self._input["Z"]
        order = self._input["order"]
        iterations = self._input["iterations"]

        if self._input["scheme"] == const.SCHEME_EXPLICIT:
            if abs(r) >= 1:
                raise ConvergenceDomainError(
                    f"explicit amplitudes converge only for |r| < 1 (got r={r}); "
                    "use the implicit scheme for |r| >= 1"
                )
            table = explicit_cascade(
                r,
                u0,
                Z,
                order,
                iterations or default_max_iter(),
                stop_when_converged=True,
            )

            def closed_form(i):
                return converged_amplitude(i, r, u0, Z)

        else:
            if Z != 1:
                raise DomainError("implicit amplitudes are defined for Z == 1 only")
            table = implicit_cascade(
                r, u0, order, iterations or 1, settled=self._input["settled"]
            )

            def closed_form(i):
                return implicit_amplitude(i, r)

        normalized = normalized_amplitudes(table)
        rows = []
        for i in range(order + 1):
            n_used = table["converged_at"][i] or table["iterations"]
            recursive = float(normalized[i, n_used])
            reference = closed_form(i)
            rows.append(
                AmplitudeRow(
                    i=i,
                    n_used=n_used,
                    recursive=recursive,
                    closed_form=reference,
                    rel_err=utils.relative_error(recursive, reference)
                    if math.isfinite(recursive)
                    else math.inf,
                )
            )
            if table["diverged"][i]:
                _LOGGER.warning("order %s diverged (r=%s)", i, r)
        self._output = rows
