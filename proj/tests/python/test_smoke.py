import csv
import json
import os
import pathlib
import subprocess

import jsonschema
import numpy as np
import pytest

import gsbps

ROOT = pathlib.Path(__file__).resolve().parents[2]
DATA = pathlib.Path(os.environ.get("GSBPS_TEST_DATA", ROOT / "tests" / "data"))
SCHEMA = json.loads((ROOT / "schemas" / "summary.schema.json").read_text())


def faithful_histogram(width=0.1):
    x = np.loadtxt(DATA / "faithful.csv", skiprows=1)
    edges = np.arange(x.min(), x.max() + width, width)
    counts, edges = np.histogram(x, bins=edges)
    return 0.5 * (edges[:-1] + edges[1:]), counts


def test_penalty_and_basis():
    P = gsbps.penalty_matrix(10, 2, 1e-6)
    assert np.allclose(np.diag(P)[:3], [1 + 1e-6, 5 + 1e-6, 6 + 1e-6])
    B = gsbps.design_matrix(np.linspace(0, 1, 25), 0.0, 1.0, 10)
    assert B.shape == (25, 10)
    assert np.allclose(B.sum(axis=1), 1.0)


def test_density_fit_is_normalized():
    mids, counts = faithful_histogram()
    res = gsbps.fit_density(mids, counts, K=20, M=1500, burnin=500, seed=3)
    assert res["draws"].shape == (1500, 22)
    assert res["columns"][-2:] == ["lambda", "delta"]
    x, f = np.asarray(res["x"]), np.asarray(res["estimate"])
    assert np.all(np.diff(x) > 0)
    assert np.all(np.asarray(res["lo95"]) <= f) and np.all(f <= np.asarray(res["hi95"]))
    assert abs(np.trapezoid(f, x) - 1.0) < 1e-2


def test_binomial_and_negbin():
    rows = list(csv.DictReader(open(DATA / "trypanosome.csv")))
    x = [float(r["x"]) for r in rows]
    y = [int(r["y"]) for r in rows]
    m = [int(r["m"]) for r in rows]
    res = gsbps.fit_binomial(x, y, m, K=8, M=600, burnin=200)
    p = np.asarray(res["estimate"])
    assert np.all((p > 0) & (p < 1))

    nb = gsbps.fit_negbin([0, 1, 3, 2, 5, 4, 6, 3, 2, 1, 0, 0], K=6, M=400, burnin=100)
    assert nb["columns"][-1] == "rho"
    assert np.all(nb["draws"][:, -1] > 0)


def test_seed_reproducibility_and_errors():
    mids, counts = faithful_histogram()
    a = gsbps.fit_density(mids, counts, K=10, M=300, burnin=100, seed=9)
    b = gsbps.fit_density(mids, counts, K=10, M=300, burnin=100, seed=9)
    assert np.array_equal(a["draws"], b["draws"])
    with pytest.raises(gsbps.GsbpsError, match="config-error"):
        gsbps.fit_density(mids, counts, K=10, M=100, burnin=100)
    with pytest.raises(KeyError):
        gsbps.fit_density(mids, counts, bogus=1)
    assert gsbps.geweke_z([2.0] * 200) == 0.0


@pytest.mark.skipif("GSBPS_CLI" not in os.environ, reason="command-line tool path not given")
def test_cli_summary_validates(tmp_path):
    cli = os.environ["GSBPS_CLI"]
    for cmd, data, extra in [
        ("density", "faithful.csv", ["--binwidth", "0.1", "--K", "12"]),
        ("binom", "hepatitis_b.csv", ["--K", "10"]),
        ("negbin", "zika.csv", ["--K", "10"]),
    ]:
        out = tmp_path / cmd
        subprocess.run([cli, cmd, str(DATA / data), *extra, "--M", "600", "--burnin", "200", "--out", str(out)],
                       check=True)
        summary = json.loads((out / "summary.json").read_text())
        jsonschema.validate(summary, SCHEMA)
        assert summary["config"]["seed"] == summary["seed"]
