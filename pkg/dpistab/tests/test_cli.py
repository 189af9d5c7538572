"""Tests for the command line interface and run storage"""

import csv
import datetime as dt
import json
import pathlib

import pytest
import voluptuous
from freezegun import freeze_time

from .. import __version__, const, storage
from ..cli import main
from ..definitions import default_limits, default_max_iter
from ..series import explicit_border_r

TESTS_DIR = str(pathlib.Path(__file__).parent.resolve())
TEST_POISSON_CONFIG = TESTS_DIR + "/assets/poisson/run.json"
AT_TIME = "2024-03-01 12:00:00"


def _read_csv(path: pathlib.Path) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def _read_json(path: pathlib.Path) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_border(tmp_path: pathlib.Path) -> None:
    """Tests border.csv over eps_hat in [0, 1]"""
    args = ["border", "--z", "1", "--eps-hat", "0:1:0.1"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    rows = _read_csv(tmp_path / "border.csv")
    assert rows[0] == ["eps_hat", "r_border"]
    assert len(rows) == 12
    assert rows[1] == ["0", "1"]
    assert float(rows[-1][1]) == explicit_border_r(1.0)["r_max"]


def test_border_higher_degree(tmp_path: pathlib.Path) -> None:
    """Tests that 17 significant digits round-trip the border"""
    args = ["border", "--z", "2", "--eps-hat", "0.1"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    rows = _read_csv(tmp_path / "border.csv")
    assert float(rows[1][1]) == explicit_border_r(0.1, 2)["r_max"]


def test_border_implicit(tmp_path: pathlib.Path) -> None:
    """Tests the gap columns of the implicit border"""
    args = ["border", "--scheme", "implicit", "--eps-hat", "1"]
    args += ["--output-dir", str(tmp_path)]
    assert main(args) == 0
    header, row = _read_csv(tmp_path / "border.csv")
    assert header == ["eps_hat", "r_border", "r_low", "r_high"]
    assert float(row[2]) == pytest.approx(0.1716, abs=1e-4)
    assert float(row[3]) == pytest.approx(5.8284, abs=1e-4)


def test_usage_errors(tmp_path: pathlib.Path) -> None:
    """Tests exit code 2 for invalid arguments and empty ranges"""
    out = str(tmp_path)
    assert main(["border", "--z", "0", "--eps-hat", "0.1", "--output-dir", out]) == 2
    assert main(["amplitudes", "--r", "1.5", "--output-dir", out]) == 2
    with pytest.raises(SystemExit) as err:
        main(["scan", "--r", "1:0:0.1", "--eps-hat", "0", "--output-dir", out])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["poisson", "--beta", "0.1", "--output-dir", out])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["fourier", "--coeff", "1;2;0.5", "--eta", "0", "--eps-hat", "0.1"])
    assert err.value.code == 2


def test_version(capsys) -> None:
    """Tests --version"""
    with pytest.raises(SystemExit) as err:
        main(["--version"])
    assert err.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_amplitudes(tmp_path: pathlib.Path) -> None:
    """Tests amplitudes.csv at r=0.5"""
    args = ["amplitudes", "--r", "0.5", "--order", "8", "--output-dir", str(tmp_path)]
    assert main(args) == 0
    header, *rows = _read_csv(tmp_path / "amplitudes.csv")
    assert header == ["i", "n_used", "recursive", "closed_form", "rel_err"]
    assert len(rows) == 9
    assert all(float(x[4]) < 1e-8 for x in rows)
    assert float(rows[5][3]) == 2688.0


def test_amplitudes_implicit(tmp_path: pathlib.Path) -> None:
    """Tests implicit amplitudes at r=2"""
    args = ["amplitudes", "--r", "2", "--scheme", "implicit", "--order", "3"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    _, *rows = _read_csv(tmp_path / "amplitudes.csv")
    assert float(rows[0][2]) == -1.0


@freeze_time(AT_TIME)
def test_scan_and_manifest(tmp_path: pathlib.Path) -> None:
    """Tests region.csv, summary.json and the run manifest"""
    args = ["scan", "--r", "0:0.9:0.3", "--eps-hat", "0:1:0.5", "--max-iter", "5000"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0

    header, *rows = _read_csv(tmp_path / "region.csv")
    assert header == ["eps_hat", "r", "analytic", "empirical", "iterations"]
    assert len(rows) == 12
    assert rows[0] == ["0", "0", "stable", "converged", "1"]

    summary = _read_json(tmp_path / "summary.json")
    assert summary["cells"] == 12
    assert summary["disagreements"] == 0

    manifest = storage.load_manifest(str(tmp_path))
    assert manifest["command"] == "scan"
    assert manifest["tool_version"] == __version__
    assert manifest["created"] == dt.datetime(2024, 3, 1, 12, tzinfo=dt.timezone.utc)
    assert manifest["parameters"]["max_iter"] == 5000
    assert manifest["parameters"]["r"] == pytest.approx([0.0, 0.3, 0.6, 0.9])
    assert [pathlib.Path(x).name for x in manifest["outputs"]] == [
        "region.csv",
        "summary.json",
    ]
    assert (tmp_path / const.MANIFEST_FILENAME).is_file()


def test_outputs_are_deterministic(tmp_path: pathlib.Path) -> None:
    """Tests byte-identical data files for identical invocations"""
    for name in ("first", "second"):
        args = ["scan", "--r", "0:1:0.1", "--eps-hat", "0:0.5:0.1"]
        args += ["--max-iter", "5000"]
        assert main(args + ["--output-dir", str(tmp_path / name)]) == 0
        args = ["border", "--z", "3", "--eps-hat", "0:2:0.25"]
        assert main(args + ["--output-dir", str(tmp_path / name)]) == 0
    for filename in ("region.csv", "summary.json", "border.csv"):
        assert (tmp_path / "first" / filename).read_bytes() == (
            tmp_path / "second" / filename
        ).read_bytes()


def test_poisson_single_run(tmp_path: pathlib.Path) -> None:
    """Tests norm_history.csv and outcome.json"""
    args = ["poisson", "--m", "100", "--beta", "0.03", "--output-dir", str(tmp_path)]
    assert main(args) == 0
    outcome = _read_json(tmp_path / "outcome.json")
    assert outcome["status"] == "converged"
    header, *rows = _read_csv(tmp_path / "norm_history.csv")
    assert header == ["step", "max_norm"]
    assert len(rows) == outcome["iterations_used"] + 1
    assert rows[0][0] == "0"


def test_poisson_divergent_run(tmp_path: pathlib.Path) -> None:
    """Tests that an unstable run still exits cleanly"""
    args = ["poisson", "--m", "100", "--beta", "0.2", "--output-dir", str(tmp_path)]
    assert main(args) == 0
    assert _read_json(tmp_path / "outcome.json")["status"] == "diverged"


def test_poisson_config(tmp_path: pathlib.Path) -> None:
    """Tests a run described by a JSON configuration"""
    args = ["poisson", "--config", TEST_POISSON_CONFIG]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    assert _read_json(tmp_path / "outcome.json")["status"] == "converged"
    assert storage.load_poisson_config(TEST_POISSON_CONFIG)["M"] == 50


def test_poisson_bad_config(tmp_path: pathlib.Path) -> None:
    """Tests exit code 2 for an invalid or missing configuration"""
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"M": 1, "beta": 0.1}), encoding="utf-8")
    out = str(tmp_path / "out")
    assert main(["poisson", "--config", str(config), "--output-dir", out]) == 2
    missing = str(tmp_path / "missing.json")
    assert main(["poisson", "--config", missing, "--output-dir", out]) == 2


@pytest.mark.order(10003)
def test_poisson_sweep(tmp_path: pathlib.Path) -> None:
    """Tests bounds.json for M=100"""
    args = ["poisson", "--m", "100", "--sweep"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    bounds = _read_json(tmp_path / "bounds.json")
    assert 0.056 <= bounds["analytic_bound"] <= 0.058
    assert 0.083 <= bounds["experimental_bound"] <= 0.094
    assert bounds["residual"] == const.DEFAULT_POISSON_RESIDUAL_FORMULA
    assert bounds["scheme"] == const.PDE_SCHEME_PICARD
    radius = bounds["product_radius_at_experimental_bound"]
    assert radius == pytest.approx(1.0, abs=0.05)
    assert bounds["analytic_spectrum"]["eps_hat"] > 0
    assert bounds["analytic_spectrum"]["product_radius"] > 0


@pytest.mark.order(10003)
def test_poisson_sweep_linear(tmp_path: pathlib.Path) -> None:
    """Tests that a linear residual gets no analytic bound"""
    args = ["poisson", "--m", "25", "--sweep", "--residual", "v"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    bounds = _read_json(tmp_path / "bounds.json")
    assert bounds["residual"] == "v"
    assert bounds["analytic_bound"] is None
    assert bounds["analytic_spectrum"] is None
    assert bounds["experimental_bound"] == pytest.approx(0.25, abs=0.01)


@pytest.mark.order(10004)
def test_poisson_outputs_are_deterministic(tmp_path: pathlib.Path) -> None:
    """Tests byte-identical bounds and norm histories for identical invocations"""
    for name in ("first", "second"):
        out = ["--output-dir", str(tmp_path / name)]
        assert main(["poisson", "--m", "25", "--sweep"] + out) == 0
        assert main(["poisson", "--m", "25", "--beta", "0.05"] + out) == 0
    for filename in ("bounds.json", "norm_history.csv", "outcome.json"):
        assert (tmp_path / "first" / filename).read_bytes() == (
            tmp_path / "second" / filename
        ).read_bytes()


def test_fourier(tmp_path: pathlib.Path) -> None:
    """Tests fourier.csv and verdict.json for a stable diffusion step"""
    args = ["fourier", "--coeff", "1,2,-0.05", "--eta", "0:2:0.5", "--eps-hat", "0.1"]
    assert main(args + ["--output-dir", str(tmp_path)]) == 0
    verdict = _read_json(tmp_path / "verdict.json")
    assert verdict["stable"] is True
    assert verdict["theta"] == pytest.approx(0.03125)
    header, *rows = _read_csv(tmp_path / "fourier.csv")
    assert header == ["eta_1", "theta", "verdict"]
    assert len(rows) == 5


def test_fourier_two_dimensions(tmp_path: pathlib.Path) -> None:
    """Tests a tensor grid from repeated --eta"""
    args = [
        "fourier",
        "--coeff", "1,2,-0.1",
        "--coeff", "2,2,-0.1",
        "--eta", "0:2:1",
        "--eta", "0:1:1",
        "--eps-hat", "0.5",
        "--output-dir", str(tmp_path),
    ]
    assert main(args) == 0
    header, *rows = _read_csv(tmp_path / "fourier.csv")
    assert header == ["eta_1", "eta_2", "theta", "verdict"]
    assert len(rows) == 6
    assert _read_json(tmp_path / "verdict.json")["stable"] is False


def test_max_iter_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Tests the DPISTAB_MAX_ITER override"""
    monkeypatch.setenv(const.ENV_MAX_ITER, "50")
    assert default_max_iter() == 50
    assert default_limits()["max_iter"] == 50
    monkeypatch.setenv(const.ENV_MAX_ITER, "lots")
    assert default_max_iter() == const.DEFAULT_MAX_ITER
    monkeypatch.setenv(const.ENV_MAX_ITER, "-3")
    assert default_max_iter() == const.DEFAULT_MAX_ITER
    monkeypatch.delenv(const.ENV_MAX_ITER)
    assert default_limits(max_iter=7)["max_iter"] == 7


def test_manifest_integrity() -> None:
    """Tests the manifest schema"""
    with pytest.raises(voluptuous.Invalid):
        storage.check_manifest_integrity(
            {
                "command": "scan",
                "parameters": {},
                "tool_version": __version__,
                "created": "yesterday",
                "outputs": [],
            }
        )


def test_default_output_dir(
    tmp_path: pathlib.Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    """Tests that files without an output directory land in the current one"""
    monkeypatch.chdir(tmp_path)
    path = storage.write_csv("rows.csv", ["a", "b"], [(1, 0.5)])
    assert pathlib.Path(path) == tmp_path / "rows.csv"
    assert _read_csv(tmp_path / "rows.csv") == [["a", "b"], ["1", "0.5"]]
    path = storage.dump_json("data.json", {"x": 1.0})
    assert _read_json(pathlib.Path(path)) == {"x": 1.0}
