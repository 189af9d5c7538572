"""Command line interface."""

import argparse
import itertools
import logging
import sys

import voluptuous

from . import const, pde, storage
from .definitions import default_limits
from .exceptions import DomainError, DPIStabError
from .processors.amplitudes import AmplitudesProcessor
from .processors.border import BorderProcessor
from .processors.region import RegionProcessor, iter_rows
from .processors.utils import parse_range

_LOGGER = logging.getLogger(__name__)


def _range_arg(text: str):
    try:
        return parse_range(text)
    except DomainError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def _coefficient_arg(text: str) -> tuple[int, int, float]:
    try:
        dim, order, value = text.split(",")
        return int(dim), int(order), float(value)
    except ValueError as err:
        raise argparse.ArgumentTypeError(
            f"expected l,m,value for a coefficient, got {text!r}"
        ) from err


def cmd_border(args) -> list[str]:
    """Border (explicit) or gap (implicit) over an eps_hat range."""
    rows = BorderProcessor(
        {"eps_hat": args.eps_hat.tolist(), "Z": args.z, "scheme": args.scheme}
    ).output
    if args.scheme == const.SCHEME_EXPLICIT:
        header = ["eps_hat", "r_border"]
        table = ((x["eps_hat"], x["r_border"]) for x in rows)
    else:
        header = ["eps_hat", "r_border", "r_low", "r_high"]
        table = ((x["eps_hat"], x["r_border"], x["r_low"], x["r_high"]) for x in rows)
    return [storage.write_csv("border.csv", header, table, args.output_dir)]


def cmd_scan(args) -> list[str]:
    """Analytic vs brute-force verdicts over an (eps_hat, r) grid."""
    limits = {} if args.max_iter is None else {"max_iter": args.max_iter}
    result = RegionProcessor(
        {
            "r_axis": args.r.tolist(),
            "eps_hat_axis": args.eps_hat.tolist(),
            "Z": args.z,
            "scheme": args.scheme,
            "u0": args.u0,
            "limits": limits,
        }
    ).output
    return [
        storage.write_csv(
            "region.csv",
            ["eps_hat", "r", "analytic", "empirical", "iterations"],
            iter_rows(result["grid"]),
            args.output_dir,
        ),
        storage.dump_json("summary.json", result["summary"], args.output_dir),
    ]


def cmd_amplitudes(args) -> list[str]:
    """Recursive amplitudes next to their closed forms."""
    rows = AmplitudesProcessor(
        {
            "r": args.r,
            "u0": args.u0,
            "Z": args.z,
            "order": args.order,
            "iterations": args.iterations,
            "scheme": args.scheme,
            "settled": not args.transient,
        }
    ).output
    header = ["i", "n_used", "recursive", "closed_form", "rel_err"]
    return [
        storage.write_csv(
            "amplitudes.csv",
            header,
            ([x[key] for key in header] for x in rows),
            args.output_dir,
        )
    ]


def cmd_poisson(args) -> list[str]:
    """Single Poisson run, or analytic and experimental CFL bounds."""
    if args.sweep:
        limits = None
        if args.max_iter is not None:
            limits = default_limits(max_iter=args.max_iter)
        experimental = pde.experimental_cfl_bound(
            args.m, limits, args.residual, args.pde_scheme
        )
        bounds = {
            "M": args.m,
            "residual": args.residual,
            "scheme": args.pde_scheme,
            "experimental_bound": experimental,
            "product_radius_at_experimental_bound": pde.product_spectral_radius(
                args.m, experimental
            ),
            "analytic_bound": None,
            "analytic_spectrum": None,
        }
        # the theta bound only covers the quadratic residual under Picard
        if (
            args.residual == const.DEFAULT_POISSON_RESIDUAL_FORMULA
            and args.pde_scheme == const.PDE_SCHEME_PICARD
        ):
            analytic = pde.analytic_cfl_bound(args.m)
            bounds["analytic_bound"] = analytic
            bounds["analytic_spectrum"] = pde.poisson_spectrum(args.m, analytic)
        return [storage.dump_json("bounds.json", bounds, args.output_dir)]

    if args.config is not None:
        run = storage.load_poisson_config(args.config)
    else:
        run = {
            "M": args.m,
            "beta": args.beta,
            "residual": args.residual,
            "scheme": args.pde_scheme,
        }
        if args.max_iter is not None:
            run["max_iter"] = args.max_iter
        if args.seed is not None:
            run["seed"] = args.seed
    outcome, history = pde.simulate_poisson(run)
    _LOGGER.info(
        "poisson run %s after %s steps", outcome["status"], outcome["iterations_used"]
    )
    return [
        storage.write_csv(
            "norm_history.csv",
            ["step", "max_norm"],
            enumerate(history),
            args.output_dir,
        ),
        storage.dump_json("outcome.json", outcome, args.output_dir),
    ]


def cmd_fourier(args) -> list[str]:
    """Fourier-symbol stability test over a tensor grid of frequencies."""
    d = len(args.eta)
    symbol = {"d": d, "coefficients": args.coeff}
    grid = [list(eta) for eta in itertools.product(*args.eta)]
    verdict = pde.fourier_stability(symbol, grid, args.eps_hat, args.z, samples=True)
    header = [f"eta_{k}" for k in range(1, d + 1)] + ["theta", "verdict"]
    return [
        storage.write_csv("fourier.csv", header, verdict["samples"], args.output_dir),
        storage.dump_json(
            "verdict.json",
            {"r": verdict["r"], "theta": verdict["theta"], "stable": verdict["stable"]},
            args.output_dir,
        ),
    ]


def build_parser() -> argparse.ArgumentParser:
    """The dpistab argument parser."""
    parser = argparse.ArgumentParser(
        prog=const.PROG_NAME,
        description="Nonlinear stability of discrete Picard iteration.",
    )
    parser.add_argument("--version", action="version", version=const.VERSION)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output-dir", default=".", help="directory for data files and manifest"
    )
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    border = sub.add_parser(
        "border", parents=[common], help="analytic stability border"
    )
    border.add_argument("--z", type=int, default=1)
    border.add_argument("--eps-hat", type=_range_arg, required=True)
    border.add_argument(
        "--scheme", choices=const.SCHEMES, default=const.SCHEME_EXPLICIT
    )
    border.set_defaults(func=cmd_border)

    scan = sub.add_parser(
        "scan", parents=[common], help="analytic vs brute-force region scan"
    )
    scan.add_argument("--z", type=int, default=1)
    scan.add_argument("--r", type=_range_arg, required=True)
    scan.add_argument("--eps-hat", type=_range_arg, required=True)
    scan.add_argument("--scheme", choices=const.SCHEMES, default=const.SCHEME_EXPLICIT)
    scan.add_argument("--u0", type=float, default=1.0)
    scan.add_argument("--max-iter", type=int)
    scan.set_defaults(func=cmd_scan)

    amplitudes = sub.add_parser(
        "amplitudes", parents=[common], help="perturbation amplitudes"
    )
    amplitudes.add_argument("--r", type=float, required=True)
    amplitudes.add_argument("--u0", type=float, default=1.0)
    amplitudes.add_argument("--z", type=int, default=1)
    amplitudes.add_argument("--order", type=int, default=8)
    amplitudes.add_argument("--iterations", type=int)
    amplitudes.add_argument(
        "--scheme", choices=const.SCHEMES, default=const.SCHEME_EXPLICIT
    )
    amplitudes.add_argument(
        "--transient",
        action="store_true",
        help="implicit scheme: iterate from U_0 = u0 instead of settled orders",
    )
    amplitudes.set_defaults(func=cmd_amplitudes)

    poisson = sub.add_parser(
        "poisson", parents=[common], help="nonlinear Poisson example"
    )
    poisson.add_argument("--m", type=int)
    mode = poisson.add_mutually_exclusive_group(required=True)
    mode.add_argument("--beta", type=float)
    mode.add_argument("--sweep", action="store_true")
    mode.add_argument("--config", help="JSON file {M, beta, max_iter}")
    poisson.add_argument(
        "--residual", default=const.DEFAULT_POISSON_RESIDUAL_FORMULA
    )
    poisson.add_argument(
        "--pde-scheme", choices=const.PDE_SCHEMES, default=const.PDE_SCHEME_PICARD
    )
    poisson.add_argument("--max-iter", type=int)
    poisson.add_argument(
        "--seed", type=float, help="amplitude of the alternating start perturbation"
    )
    poisson.set_defaults(func=cmd_poisson)

    fourier = sub.add_parser(
        "fourier", parents=[common], help="Fourier-symbol stability test"
    )
    fourier.add_argument(
        "--coeff", type=_coefficient_arg, action="append", required=True
    )
    fourier.add_argument("--eta", type=_range_arg, action="append", required=True)
    fourier.add_argument("--eps-hat", type=float, required=True)
    fourier.add_argument("--z", type=int, default=1)
    fourier.set_defaults(func=cmd_fourier)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "poisson" and args.config is None and args.m is None:
        parser.error("poisson needs --m unless --config is given")

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )

    parameters = {
        key: value
        for key, value in vars(args).items()
        if key not in ("func", "command", "verbose", "output_dir")
    }
    try:
        outputs = args.func(args)
    except (DomainError, voluptuous.Invalid, OSError) as err:
        _LOGGER.error("%s: %s", args.command, err)
        return const.EXIT_USAGE
    except (DPIStabError, ArithmeticError) as err:
        _LOGGER.error("%s failed: %s", args.command, err)
        return const.EXIT_NUMERIC
    except Exception:  # pylint: disable=broad-except
        _LOGGER.exception("unexpected failure in %s", args.command)
        return const.EXIT_NUMERIC

    outputs.append(
        storage.dump_manifest(args.command, parameters, outputs, args.output_dir)
    )
    return const.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
