import csv
import json

import numpy as np
import pytest

from wcqpen.cli import main


@pytest.fixture
def dataset(tmp_path):
    out = tmp_path / "data"
    rc = main(
        [
            "datagen",
            "--n", "25", "--p", "8", "--rho", "0.3", "--s", "4",
            "--seed", "3", "--out", str(out),
        ]
    )
    assert rc == 0
    return out


def test_datagen_outputs(dataset, tmp_path):
    meta = json.loads((dataset.parent / "data_meta.json").read_text())
    assert meta["n"] == 25 and meta["p"] == 8
    assert meta["sigma"] > 0
    with open(f"{dataset}_train.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "y" and len(rows) == 26 and len(rows[0]) == 9
    with open(f"{dataset}_beta_star.csv") as fh:
        beta = [float(r[0]) for r in list(csv.reader(fh))[1:]]
    assert beta[:4] == [2.0, 2.0, -2.0, -2.0]


def test_solve_json(dataset, tmp_path):
    out = tmp_path / "sol.json"
    rc = main(
        [
            "solve",
            "--input", f"{dataset}_train.csv",
            "--lambda1", "2.0", "--lambda2", "1.0",
            "--tau", "1e-10",
            "--certify", "final",
            "--output", str(out),
        ]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["status"] == "converged"
    assert payload["kkt_residual"] <= 1e-10
    assert len(payload["beta"]) == 8
    assert payload["objective"]["user_value"] > 0
    methods = {c["method"] for c in payload["certificates"]}
    assert methods == {"wcq-main", "wcq-tight", "fenchel"}
    for cert in payload["certificates"]:
        assert cert["gap"] <= 1e-6 * (1 + abs(payload["objective"]["minimax_value"]))


def test_solve_group_penalty(dataset, tmp_path):
    groups = tmp_path / "groups.json"
    groups.write_text("[[1,2,3,4],[5,6],[7,8]]\n")
    out = tmp_path / "sol.json"
    rc = main(
        [
            "solve",
            "--input", f"{dataset}_train.csv",
            "--groups", str(groups),
            "--penalty", "grpinf",
            "--lambda1", "1.5", "--lambda2", "0.8",
            "--tau", "1e-10",
            "--output", str(out),
        ]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["status"] == "converged"
    assert payload["kkt_residual"] <= 1e-10


@pytest.mark.parametrize("method", ["quadratic", "coordinate", "proximal"])
def test_path_csv(dataset, tmp_path, method):
    out = tmp_path / f"path_{method}.csv"
    rc = main(
        [
            "path",
            "--input", f"{dataset}_train.csv",
            "--method", method,
            "--lambda1-grid", "auto:6",
            "--lambda2-grid", "0.5,2.0",
            "--tau", "1e-8",
            "--output-csv", str(out),
        ]
    )
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 12
    assert set(rows[0]) == {
        "lambda1", "lambda2", "objective", "n_active", "kkt_residual", "n_outer", "wall_time_s",
    }
    for row in rows:
        assert float(row["kkt_residual"]) <= 1e-8
    # first cell of each lambda2 row is the null model
    by_l2 = {}
    for row in rows:
        by_l2.setdefault(row["lambda2"], []).append(row)
    for cells in by_l2.values():
        top = max(cells, key=lambda r: float(r["lambda1"]))
        assert int(top["n_active"]) == 0


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    rc = main(
        [
            "bench",
            "--scenario", "fig2",
            "--methods", "quadratic",
            "--reps", "1",
            "--out", str(out),
        ]
    )
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert all(float(r["objective_gap"]) >= -1e-9 for r in rows)
