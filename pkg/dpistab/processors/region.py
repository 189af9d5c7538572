"""Region scan processors."""

import logging
from collections.abc import Iterator
from typing import TypedDict

import numpy as np
import voluptuous

from .. import const
from ..definitions import (
    Degree,
    Finite,
    IterationLimitsSchema,
    RegionGrid,
    RegionSummary,
)
from ..dpi import disagreements, scan_region
from .base import Processor

_LOGGER = logging.getLogger(__name__)


class RegionOutput(TypedDict):
    """A dict holding RegionProcessor output property."""

    grid: RegionGrid
    summary: RegionSummary


def summarize(grid: RegionGrid) -> RegionSummary:
    """Tally analytic verdicts, empirical statuses and disagreements."""
    analytic = grid["analytic"]
    empirical = grid["empirical"]
    return RegionSummary(
        cells=int(analytic.size),
        analytic_stable=int(np.count_nonzero(analytic)),
        analytic_unstable=int(np.count_nonzero(~analytic)),
        converged=int(np.count_nonzero(empirical == const.STATUS_CONVERGED)),
        diverged=int(np.count_nonzero(empirical == const.STATUS_DIVERGED)),
        maxiter=int(np.count_nonzero(empirical == const.STATUS_MAXITER)),
        singular=int(np.count_nonzero(empirical == const.STATUS_SINGULAR)),
        disagreements=int(np.count_nonzero(disagreements(grid))),
    )


def iter_rows(grid: RegionGrid) -> Iterator[tuple]:
    """(eps_hat, r, analytic, empirical, iterations), row-major."""
    for i, eps_hat in enumerate(grid["eps_hat_axis"]):
        for j, r in enumerate(grid["r_axis"]):
            yield (
                float(eps_hat),
                float(r),
                const.VERDICT_STABLE
                if grid["analytic"][i, j]
                else const.VERDICT_UNSTABLE,
                grid["empirical"][i, j],
                int(grid["iterations"][i, j]),
            )


class RegionProcessor(Processor):
    """Scans a grid and summarises agreement between theory and iteration."""

    _LABEL = "RegionProcessor"
    _SCHEMA = voluptuous.Schema(
        {
            voluptuous.Required("r_axis"): [Finite],
            voluptuous.Required("eps_hat_axis"): [Finite],
            voluptuous.Optional("Z", default=1): Degree,
            voluptuous.Optional("scheme", default=const.SCHEME_EXPLICIT): voluptuous.In(
                const.SCHEMES
            ),
            voluptuous.Optional("u0", default=1.0): Finite,
            voluptuous.Optional("limits", default=dict): IterationLimitsSchema,
        }
    )

    def do_process(self):
        """Run the scan and tally it."""
        grid = scan_region(
            self._input["r_axis"],
            self._input["eps_hat_axis"],
            self._input["Z"],
            self._input["scheme"],
            self._input["limits"],
            self._input["u0"],
        )
        summary = summarize(grid)
        _LOGGER.info(
            "%s cells, %s disagreements, %s undecided",
            summary["cells"],
            summary["disagreements"],
            summary["maxiter"] + summary["singular"],
        )
        self._output = RegionOutput(grid=grid, summary=summary)
