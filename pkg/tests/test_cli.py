import json

import numpy as np
import pytest

from genspear.cli import demo_data, main
from genspear.copulas import GaussianCopula
from genspear.population import basis_corr_matrix


def run(*argv):
    return main(list(argv))


def write_csv(path, data, header="x,y"):
    lines = [header] + [f"{a},{b}" for a, b in data]
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# bounds / support


def test_bounds_command(tmp_path):
    out = tmp_path / "b.json"
    assert run("bounds", "--basis", "legendre", "--j", "2", "--k", "2",
               "--output", str(out)) == 0
    d = json.loads(out.read_text())
    assert abs(d["min"] + 0.875) < 1e-6
    assert abs(d["max"] - 1.0) < 1e-6
    assert d["attains_plus_one"]


def test_support_command(tmp_path):
    out = tmp_path / "s.csv"
    assert run("support", "--j", "4", "--k", "4", "--n", "60",
               "--output", str(out), "--svg") == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "u,v"
    pts = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    circ = np.abs((pts[:, 0] - 0.5) ** 2 + (pts[:, 1] - 0.5) ** 2 - 3.0 / 14.0)
    diag = np.minimum(np.abs(pts[:, 0] - pts[:, 1]),
                      np.abs(pts[:, 0] + pts[:, 1] - 1.0))
    assert np.max(np.minimum(circ, diag)) < 1e-8
    assert (tmp_path / "s.svg").exists()


# ---------------------------------------------------------------------------
# estimate


def test_estimate_comonotone(tmp_path):
    x = np.linspace(0.0, 1.0, 300)
    write_csv(tmp_path / "d.csv", np.column_stack([x, x**3]))
    out = tmp_path / "m.json"
    assert run("estimate", "--input", str(tmp_path / "d.csv"), "--order", "4",
               "--type", "t3", "--output", str(out), "--svg") == 0
    d = json.loads(out.read_text())
    vals = np.array(d["values"])
    assert np.max(np.abs(vals - np.eye(4))) < 0.05
    assert (tmp_path / "m.csv").exists()
    assert (tmp_path / "m.svg").exists()


def test_estimate_bad_input(tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    assert run("estimate", "--input", str(empty),
               "--output", str(tmp_path / "o.json")) == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1.0,2.0\noops,3.0\n")
    assert run("estimate", "--input", str(bad),
               "--output", str(tmp_path / "o.json")) == 3
    missing = tmp_path / "nope.csv"
    assert run("estimate", "--input", str(missing),
               "--output", str(tmp_path / "o.json")) == 3


def test_estimate_tie_reject(tmp_path):
    write_csv(tmp_path / "t.csv", [(1.0, 2.0), (1.0, 3.0), (2.0, 1.0)])
    assert run("estimate", "--input", str(tmp_path / "t.csv"),
               "--tie-policy", "reject",
               "--output", str(tmp_path / "o.json")) == 3


# ---------------------------------------------------------------------------
# matrix / sample round trip


def test_matrix_command_and_overwrite_guard(tmp_path):
    spec = tmp_path / "cop.json"
    spec.write_text(json.dumps({"family": "gaussian", "theta": 0.5}))
    out = tmp_path / "p.json"
    assert run("matrix", "--model-spec", str(spec), "--order", "3",
               "--output", str(out)) == 0
    d = json.loads(out.read_text())
    want = 6.0 / np.pi * np.arcsin(0.25)
    assert abs(d["values"][0][0] - want) < 1e-8
    # second run without --force must refuse
    assert run("matrix", "--model-spec", str(spec), "--order", "3",
               "--output", str(out)) == 2
    assert run("matrix", "--model-spec", str(spec), "--order", "3",
               "--output", str(out), "--force") == 0


def test_matrix_mc_requires_seed(tmp_path):
    spec = tmp_path / "cop.json"
    spec.write_text(json.dumps({"family": "gaussian", "theta": 0.5}))
    assert run("matrix", "--model-spec", str(spec), "--method", "mc",
               "--output", str(tmp_path / "p.json")) == 2


def test_sample_deterministic_and_round_trip(tmp_path):
    spec = tmp_path / "model.json"
    spec.write_text(json.dumps({"family": "gaussian", "theta": 0.5}))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run("sample", "--model-spec", str(spec), "--n", "40000",
                   "--seed", "11", "--output", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()

    est = tmp_path / "est.json"
    assert run("estimate", "--input", str(a), "--order", "3",
               "--output", str(est)) == 0
    got = np.array(json.loads(est.read_text())["values"])
    truth = basis_corr_matrix(GaussianCopula(0.5), "legendre", 3).values
    assert np.max(np.abs(got - truth)) < 0.03


def test_sample_named_extremal(tmp_path):
    out = tmp_path / "js.csv"
    assert run("sample", "--model", "jointly_symmetric_44", "--n", "1000",
               "--seed", "7", "--output", str(out)) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "u,v" and len(rows) == 1001
    uv = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    circ = np.abs((uv[:, 0] - 0.5) ** 2 + (uv[:, 1] - 0.5) ** 2 - 3.0 / 14.0)
    diag = np.minimum(np.abs(uv[:, 0] - uv[:, 1]),
                      np.abs(uv[:, 0] + uv[:, 1] - 1.0))
    assert np.max(np.minimum(circ, diag)) < 1e-9


def test_sample_inverted_model_spec(tmp_path):
    spec = tmp_path / "inv.json"
    spec.write_text(json.dumps({
        "kind": "inverted",
        "base": {"family": "frank", "theta": 5.0},
        "t1": {"kind": "basis", "basis": "cosine", "order": 2},
        "t2": {"kind": "basis", "basis": "cosine", "order": 2},
    }))
    out = tmp_path / "inv.csv"
    assert run("sample", "--model-spec", str(spec), "--n", "500",
               "--seed", "3", "--output", str(out)) == 0
    assert len(out.read_text().strip().splitlines()) == 501
    assert run("sample", "--n", "10", "--seed", "1",
               "--output", str(tmp_path / "x.csv")) == 2


# ---------------------------------------------------------------------------
# demo data and maximize


def test_demo_data_model1(tmp_path):
    out = tmp_path / "d1.csv"
    assert run("demo-data", "--model", "1", "--n", "200", "--seed", "2",
               "--output", str(out)) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "x,y" and len(rows) == 201
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    r = np.corrcoef(data[:, 0], data[:, 1])[0, 1]
    assert abs(r) < 0.3

    est = tmp_path / "e.json"
    assert run("estimate", "--input", str(out), "--order", "4",
               "--output", str(est)) == 0
    vals = np.array(json.loads(est.read_text())["values"])
    assert vals[1, 0] > 0.5  # angularity rho_hat_21


def test_demo_data_model3_circle():
    data = demo_data(3, 200, 5)
    radii = np.sqrt(data[:, 0] ** 2 + data[:, 1] ** 2)
    assert np.mean(np.abs(radii - 1.0)) < 0.15


def test_demo_data_empty(tmp_path):
    out = tmp_path / "d2.csv"
    assert run("demo-data", "--model", "2", "--n", "0", "--seed", "1",
               "--output", str(out)) == 0
    assert out.read_text() == "x,y\n"


def test_maximize_on_vshaped_data(tmp_path):
    data = tmp_path / "d2.csv"
    assert run("demo-data", "--model", "2", "--n", "2000", "--seed", "9",
               "--output", str(data)) == 0
    out = tmp_path / "max.json"
    assert run("maximize", "--input", str(data), "--order", "6",
               "--output", str(out)) == 0
    d = json.loads(out.read_text())
    assert 0.0 < d["rho"] <= 1.0
    curves = np.array([
        [float(x) for x in r.split(",")]
        for r in (tmp_path / "max.csv").read_text().strip().splitlines()[1:]
    ])
    u, g, h = curves[:, 0], curves[:, 1], curves[:, 2]
    mid = len(u) // 2
    # both elicited transformations are u-shaped (ends on the same side
    # of the midpoint value)
    assert (g[0] - g[mid]) * (g[-1] - g[mid]) > 0
    assert (h[0] - h[mid]) * (h[-1] - h[mid]) > 0


# ---------------------------------------------------------------------------
# fit and study


def test_fit_command(tmp_path):
    data = tmp_path / "d.csv"
    uv = GaussianCopula(0.6).sample(400, rng=3)
    write_csv(data, uv, header="u,v")
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "base": {"family": "gaussian", "theta": None},
        "t1": {"kind": "identity"},
        "t2": {"kind": "identity"},
    }))
    out = tmp_path / "fit.json"
    assert run("fit", "--input", str(data), "--model-spec", str(spec),
               "--output", str(out)) == 0
    d = json.loads(out.read_text())
    assert d["converged"]
    assert abs(d["base"]["theta"] - 0.6) < 0.1


def test_study_command(tmp_path):
    out = tmp_path / "study.csv"
    assert run("study", "--reps", "2", "--order", "3", "--seed", "1",
               "--output", str(out)) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "copula,target,n,estimator,mean_distance"
    assert len(rows) == 1 + 3 * 2 * 5 * 5
    man = json.loads((tmp_path / "study.json").read_text())
    assert man["reps"] == 2 and man["seed"] == 1


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        run("bounds", "--j", "2")  # missing --k and --output
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        run("frobnicate")
