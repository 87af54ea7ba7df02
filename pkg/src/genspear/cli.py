"""Command-line interface.

Subcommands: estimate, bounds, support, matrix, maximize, sample, fit,
study, demo-data.  Outputs are deterministic given the same flags and
seed; existing files are never overwritten without --force.  Exit codes:
0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .basis import BasisFunction
from .copulas import from_family
from .estimate import (
    ESTIMATOR_TYPES,
    estimate_matrix,
    rank,
    simulation_study,
    study_to_rows,
)
from .population import (
    basis_corr_matrix,
    bounds,
    matrix_to_json,
    maximize_gen_spearman,
    support_set,
)
from .transform import transform_from_spec
from .udpinv import (
    InvertedCopula,
    fit_ml,
    jointly_symmetric_44,
    prohibition_sign,
)

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class UsageError(Exception):
    code = EXIT_USAGE


class DataError(Exception):
    code = EXIT_DATA


class NumericalError(Exception):
    code = EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# i/o helpers


def _read_csv(path):
    """Two numeric comma-separated columns, optional single header line."""
    try:
        lines = Path(path).read_text().strip().splitlines()
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}")
    rows = []
    for i, line in enumerate(lines):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 2:
            raise DataError(f"{path}:{i + 1}: expected two columns")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            if i == 0:
                continue  # header line
            raise DataError(f"{path}:{i + 1}: non-numeric value")
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows")
    return np.array(rows)


def _check_overwrite(path, force):
    if Path(path).exists() and not force:
        raise UsageError(f"{path} exists; use --force to overwrite")


def _write_text(path, text, force):
    _check_overwrite(path, force)
    Path(path).write_text(text)


def _write_json(path, obj, force):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n", force)


def _write_csv(path, header, rows, force):
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    _write_text(path, "\n".join(lines) + "\n", force)


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _load_spec(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON: {e}")


def _heatmap_svg(path, values, force, title=""):
    _check_overwrite(path, force)
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "genspear"
    values = np.asarray(values, dtype=float)
    vmax = max(np.max(np.abs(values)), 1e-9)
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(values, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
    n = values.shape[0]
    ax.set_xticks(range(n), [str(k) for k in range(1, n + 1)])
    ax.set_yticks(range(n), [str(j) for j in range(1, n + 1)])
    ax.set_xlabel("k")
    ax.set_ylabel("j")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _scatter_svg(path, pts, force, title=""):
    _check_overwrite(path, force)
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "genspear"
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(pts[:, 0], pts[:, 1], ".", ms=2)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _sidecar(output, suffix):
    return str(Path(output).with_suffix(suffix))


def _copula_from_spec(spec):
    try:
        return from_family(
            spec["family"],
            spec.get("theta"),
            rotation=spec.get("rotation", 0),
            nu=spec.get("nu"),
        )
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad copula spec: {e}")


def _model_from_spec(spec):
    """Sampling model: a plain copula, an inverted copula, or an extremal
    construction."""
    kind = spec.get("kind", "copula")
    if kind == "copula":
        return _copula_from_spec(spec)
    if kind == "inverted":
        base = _copula_from_spec(spec["base"])
        t1 = transform_from_spec(spec["t1"])
        t2 = transform_from_spec(spec["t2"])
        return InvertedCopula(base, t1, t2, mode=spec.get("mode", "independent"))
    if kind == "extremal":
        return _named_model(spec["name"])
    raise UsageError(f"unknown model kind {kind!r}")


def _named_model(name):
    if name == "jointly_symmetric_44":
        return jointly_symmetric_44()
    if name == "prohibition_sign":
        return prohibition_sign()
    raise UsageError(f"unknown model {name!r}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_estimate(args):
    data = _read_csv(args.input)
    try:
        sample = rank(data, tie_policy=args.tie_policy)
    except ValueError as e:
        raise DataError(str(e))
    m = estimate_matrix(sample, args.basis, args.order, args.type)
    out = {
        "schema_version": 1,
        "basis": m.basis,
        "order": m.order,
        "estimator": m.estimator,
        "n": m.n,
        "values": m.values.tolist(),
    }
    _write_json(args.output, out, args.force)
    header = "j\\k," + ",".join(str(k) for k in range(1, m.order + 1))
    rows = [[j + 1] + list(m.values[j]) for j in range(m.order)]
    _write_csv(_sidecar(args.output, ".csv"), header, rows, args.force)
    if args.svg:
        _heatmap_svg(_sidecar(args.output, ".svg"), m.values, args.force,
                     title=f"estimated {m.basis} correlations ({m.estimator})")
    return 0


def cmd_bounds(args):
    g = BasisFunction(args.basis, args.j)
    h = BasisFunction(args.basis, args.k)
    b = bounds(g, h)
    out = {
        "schema_version": 1,
        "basis": args.basis,
        "j": args.j,
        "k": args.k,
        "min": b.minimum,
        "max": b.maximum,
        "attains_plus_one": b.attains_plus_one,
        "attains_minus_one": b.attains_minus_one,
    }
    _write_json(args.output, out, args.force)
    return 0


def cmd_support(args):
    g = BasisFunction(args.basis, args.j)
    h = BasisFunction(args.basis, args.k)
    pts = support_set(g, h, args.extremum, args.n)
    _write_csv(args.output, "u,v", pts, args.force)
    if args.svg:
        _heatmap = _sidecar(args.output, ".svg")
        _scatter_svg(_heatmap, pts, args.force,
                     title=f"{args.extremum} support, ({args.j},{args.k})")
    return 0


def cmd_matrix(args):
    spec = _load_spec(args.model_spec)
    cop = _copula_from_spec(spec)
    method = {"hk": "hardy_krause", "mc": "monte_carlo"}[args.method]
    if method == "monte_carlo" and args.seed is None:
        raise UsageError("--seed is required with --method mc")
    try:
        P = basis_corr_matrix(cop, args.basis, args.order, method=method,
                              n=args.n, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e))
    out = matrix_to_json(P)
    _write_json(args.output, out, args.force)
    _write_csv(
        _sidecar(args.output, ".csv"),
        "j\\k," + ",".join(str(k) for k in range(1, args.order + 1)),
        [[j + 1] + list(P.values[j]) for j in range(args.order)],
        args.force,
    )
    if args.svg:
        _heatmap_svg(_sidecar(args.output, ".svg"), P.values, args.force,
                     title=f"{args.basis} correlations")
    return 0


def cmd_maximize(args):
    data = _read_csv(args.input)
    try:
        sample = rank(data, tie_policy=args.tie_policy)
    except ValueError as e:
        raise DataError(str(e))
    m = estimate_matrix(sample, args.basis, args.order, args.type)
    ag, ah, rho = maximize_gen_spearman(m.values)
    out = {
        "schema_version": 1,
        "basis": args.basis,
        "order": args.order,
        "estimator": args.type,
        "alpha_g": list(ag),
        "alpha_h": list(ah),
        "rho": rho,
    }
    _write_json(args.output, out, args.force)
    scores = [BasisFunction(args.basis, j) for j in range(1, args.order + 1)]
    u = np.linspace(0.0, 1.0, 201)
    gu = sum(a * np.asarray(b(u)) for a, b in zip(ag, scores))
    hu = sum(a * np.asarray(b(u)) for a, b in zip(ah, scores))
    _write_csv(_sidecar(args.output, ".csv"), "u,g,h",
               np.column_stack([u, gu, hu]), args.force)
    return 0


def cmd_sample(args):
    if args.model:
        model = _named_model(args.model)
    elif args.model_spec:
        model = _model_from_spec(_load_spec(args.model_spec))
    else:
        raise UsageError("sample requires --model or --model-spec")
    try:
        uv = model.sample(args.n, rng=args.seed)
    except (ValueError, FloatingPointError) as e:
        raise NumericalError(str(e))
    _write_csv(args.output, "u,v", uv, args.force)
    return 0


def cmd_fit(args):
    data = _read_csv(args.input)
    spec = _load_spec(args.model_spec)
    try:
        fit = fit_ml(data, spec, seed=args.seed if args.seed is not None else 0)
    except ValueError as e:
        raise DataError(str(e))
    if not fit["converged"]:
        _write_json(args.output, fit, args.force)
        raise NumericalError("fit did not converge (result written)")
    _write_json(args.output, fit, args.force)
    return 0


def cmd_study(args):
    try:
        res = simulation_study(reps=args.reps, N=args.order, seed=args.seed)
    except ValueError as e:
        raise NumericalError(str(e))
    rows = study_to_rows(res)
    _write_csv(
        args.output,
        "copula,target,n,estimator,mean_distance",
        [[r["copula"], r["target"], r["n"], r["estimator"], r["mean_distance"]]
         for r in rows],
        args.force,
    )
    manifest = dict(res["_manifest"])
    manifest["schema_version"] = 1
    _write_json(_sidecar(args.output, ".json"), manifest, args.force)
    return 0


def demo_data(model, n, seed):
    """Draw n pairs from one of three motivating non-monotonic models.

    1: X ~ N(0,1), Y = X^2 + eps, eps ~ N(0,1).
    2: X ~ N(0,1), Y = +-sqrt(X^2 + eps) with eps = |Z|, Z ~ N(0, 1.5),
       sign chosen by fair coin.
    3: Theta ~ U(0, 2pi), X = Z cos(Theta), Y = Z sin(Theta),
       Z ~ N(1, 0.1).
    """
    rng = np.random.default_rng(seed)
    if model == 1:
        x = rng.standard_normal(n)
        y = x**2 + rng.standard_normal(n)
    elif model == 2:
        x = rng.standard_normal(n)
        eps = np.abs(rng.normal(0.0, np.sqrt(1.5), size=n))
        sign = np.where(rng.uniform(size=n) < 0.5, -1.0, 1.0)
        y = sign * np.sqrt(x**2 + eps)
    elif model == 3:
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        z = rng.normal(1.0, 0.1, size=n)
        x = z * np.cos(theta)
        y = z * np.sin(theta)
    else:
        raise UsageError(f"unknown demo model {model}")
    return np.column_stack([x, y])


def cmd_demo_data(args):
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    data = demo_data(args.model, args.n, args.seed)
    _write_csv(args.output, "x,y", data, args.force)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p, output=True):
    if output:
        p.add_argument("--output", required=True, help="output path")
    p.add_argument("--force", action="store_true",
                   help="overwrite existing outputs")


def _add_basis(p, order_default=6):
    p.add_argument("--basis", default="legendre",
                   choices=["legendre", "cosine", "fourier"])
    p.add_argument("--order", type=int, default=order_default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="genspear",
        description="Non-monotonic dependence: generalized Spearman "
                    "correlations, bounds, copula construction and "
                    "rank-based estimation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate a basis-correlation matrix")
    p.add_argument("--input", required=True)
    _add_basis(p)
    p.add_argument("--type", default="t1", choices=list(ESTIMATOR_TYPES))
    p.add_argument("--tie-policy", default="midrank_warn",
                   choices=["midrank_warn", "reject"])
    p.add_argument("--svg", action="store_true", help="emit a heatmap")
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bounds", help="attainable correlation range")
    _add_basis(p)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("support", help="support set of an extremal copula")
    _add_basis(p)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--extremum", default="max", choices=["max", "min"])
    p.add_argument("--n", type=int, default=200, help="grid resolution")
    p.add_argument("--svg", action="store_true", help="emit a scatter plot")
    _add_common(p)
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("matrix", help="population basis-correlation matrix")
    p.add_argument("--model-spec", required=True,
                   help="JSON copula description")
    _add_basis(p)
    p.add_argument("--method", default="hk", choices=["hk", "mc"])
    p.add_argument("--n", type=int, default=10**6, help="MC sample size")
    p.add_argument("--seed", type=int)
    p.add_argument("--svg", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("maximize",
                       help="most correlated transformation pair from data")
    p.add_argument("--input", required=True)
    _add_basis(p)
    p.add_argument("--type", default="t1", choices=list(ESTIMATOR_TYPES))
    p.add_argument("--tie-policy", default="midrank_warn",
                   choices=["midrank_warn", "reject"])
    _add_common(p)
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("sample", help="sample a dependence model")
    p.add_argument("--model",
                   choices=["jointly_symmetric_44", "prohibition_sign"])
    p.add_argument("--model-spec", help="JSON model description")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit", help="maximum-likelihood model fit")
    p.add_argument("--input", required=True)
    p.add_argument("--model-spec", required=True)
    p.add_argument("--seed", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("study", help="estimator replication study")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--seed", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("demo-data", help="generate a motivating dataset")
    p.add_argument("--model", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_demo_data)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DataError, NumericalError) as e:
        print(f"genspear: error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
