"""Population measures of non-monotonic dependence.

Generalized Spearman correlation of a copula with respect to a pair of
standardized transformations, matrices of basis correlations, sharp
attainable bounds with the support sets of the extremal copulas, symmetry
diagnostics, and elicitation of the maximizing transformation pair by
singular value decomposition.

The quadrature path evaluates the Hardy-Krause style representation

    rho_{g,h}(C) = int int C(u,v) g'(u) h'(v) du dv - g(1) h(1)

by tensor Gauss-Legendre composed over the branches of g and h.  The
Monte Carlo path averages g(U) h(V) over seeded copula samples and always
carries a standard error.  Perfectly dependent copulas bypass quadrature:
for comonotone pairs rho = int g h du, for countermonotone pairs
rho = int g(u) h(1-u) du.
"""

from __future__ import annotations

import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import MAX_ORDER, BasisFunction, get_basis
from .copulas import Copula
from .transform import (
    PiecewiseMonotone,
    PushforwardDistribution,
    build_udp,
    piecewise_from_basis,
)

__all__ = [
    "BasisCorrMatrix",
    "BoundsResult",
    "SymmetryFlags",
    "gen_spearman",
    "basis_corr_matrix",
    "bounds",
    "support_set",
    "maximize_gen_spearman",
    "symmetry_report",
    "matrix_to_csv",
    "matrix_to_json",
    "matrix_from_values",
]

_DIST_CACHE: dict = {}


def _as_score(g, standardize=True) -> PiecewiseMonotone:
    """Coerce a score argument to a standardized PiecewiseMonotone."""
    if isinstance(g, BasisFunction):
        g = piecewise_from_basis(g.basis, g.j)
        return g  # basis members are standardized by construction
    if not isinstance(g, PiecewiseMonotone):
        raise TypeError("score must be a BasisFunction or PiecewiseMonotone")
    if standardize and g.meta and g.meta[0] in ("legendre", "cosine", "fourier"):
        return g
    if standardize and not g.standardized():
        warnings.warn(
            "score is not standardized; standardizing automatically",
            RuntimeWarning,
            stacklevel=3,
        )
        return g.standardize()
    return g


def _branch_gl_nodes(g: PiecewiseMonotone, npts=128):
    """Gauss-Legendre nodes/weights composed over the branches of g."""
    t, w = np.polynomial.legendre.leggauss(npts)
    nodes, weights = [], []
    for m in range(g.n_branches):
        a, b = g.partition[m], g.partition[m + 1]
        nodes.append(0.5 * (b - a) * (t + 1.0) + a)
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


class MCValue(float):
    """A float carrying the Monte Carlo standard error of its estimate."""

    stderr: float = 0.0

    def __new__(cls, value, stderr):
        obj = super().__new__(cls, value)
        obj.stderr = float(stderr)
        return obj


def _perfect_dependence_value(sign, g, h):
    ng, wg = _branch_gl_nodes(g, 96)
    if sign > 0:
        return float(np.sum(wg * g(ng) * h(ng)))
    return float(np.sum(wg * g(ng) * h(1.0 - ng)))


def gen_spearman(copula, g, h, method="hardy_krause", n=10**6, seed=0):
    """Generalized Spearman correlation rho_{g,h} of a copula.

    Parameters
    ----------
    copula : Copula
    g, h : BasisFunction or PiecewiseMonotone
        Standardized score transformations; non-standardized inputs are
        standardized automatically with a warning.
    method : {"hardy_krause", "monte_carlo"}
        Quadrature on the copula cdf, or seeded sampling.  The Monte Carlo
        result is a float subclass carrying ``.stderr``.
    n, seed : int
        Monte Carlo sample size and seed.

    Returns
    -------
    float
        The correlation E[g(U) h(V)] for (U, V) ~ copula.
    """
    g = _as_score(g)
    h = _as_score(h)
    mono = getattr(copula, "monotone", 0)
    if mono:
        return _perfect_dependence_value(mono, g, h)
    if method == "monte_carlo":
        uv = copula.sample(int(n), rng=seed)
        prod = np.asarray(g(uv[:, 0])) * np.asarray(h(uv[:, 1]))
        return MCValue(prod.mean(), prod.std(ddof=1) / np.sqrt(len(prod)))
    if method != "hardy_krause":
        raise ValueError("method must be 'hardy_krause' or 'monte_carlo'")
    if not copula.has_cdf:
        raise ValueError(
            f"{type(copula).__name__} exposes no cdf; use method='monte_carlo'"
        )
    nu, wu = _branch_gl_nodes(g, 128)
    nv, wv = _branch_gl_nodes(h, 128)
    cgrid = copula.cdf(nu[:, None], nv[None, :])
    du = wu * np.asarray(g.derivative(nu))
    dv = wv * np.asarray(h.derivative(nv))
    integral = du @ cgrid @ dv
    return float(integral - float(g(np.array([1.0]))[0]) * float(h(np.array([1.0]))[0]))


@dataclass
class BasisCorrMatrix:
    """Matrix of basis correlations rho_{jk}, j, k = 1..N."""

    values: np.ndarray
    basis: str
    method: str
    stderr: np.ndarray | None = None

    @property
    def order(self):
        return self.values.shape[0]

    def psd_gap(self):
        """Smallest eigenvalue of I +- (P + P')/2, whichever is smaller.

        Nonnegative (up to -1e-8) for any matrix of basis correlations.
        """
        s = 0.5 * (self.values + self.values.T)
        eye = np.eye(self.order)
        lo = np.linalg.eigvalsh(eye + s).min()
        hi = np.linalg.eigvalsh(eye - s).min()
        return float(min(lo, hi))


def matrix_from_values(values, basis="legendre", method="external", stderr=None):
    """Wrap a plain array as a BasisCorrMatrix."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("matrix must be square")
    return BasisCorrMatrix(values, basis, method, stderr)


def basis_corr_matrix(copula, basis, N, method="hardy_krause", n=10**6, seed=0):
    """Matrix of generalized Spearman correlations over basis pairs.

    Parameters
    ----------
    copula : Copula
    basis : str or CorrelationBasis
    N : int
        Matrix order, at most 12.
    method : {"hardy_krause", "monte_carlo"}
        Comonotone and countermonotone copulas are handled analytically
        whatever the method.
    """
    if isinstance(basis, str):
        basis = get_basis(basis)
    if not 1 <= N <= 12:
        raise ValueError("matrix order must lie in [1, 12]")
    mono = getattr(copula, "monotone", 0)
    if mono:
        j = np.arange(1, N + 1)
        if basis.natural:
            vals = np.diag(np.ones(N) if mono > 0 else (-1.0) ** j)
        else:
            vals = np.array(
                [
                    [
                        _perfect_dependence_value(
                            mono, _as_score(BasisFunction(basis, jj)),
                            _as_score(BasisFunction(basis, kk)),
                        )
                        for kk in j
                    ]
                    for jj in j
                ]
            )
        return BasisCorrMatrix(vals, basis.name, "analytic")

    if method == "monte_carlo":
        uv = copula.sample(int(n), rng=seed)
        bx = np.column_stack([basis(j, uv[:, 0]) for j in range(1, N + 1)])
        by = np.column_stack([basis(k, uv[:, 1]) for k in range(1, N + 1)])
        m = len(uv)
        vals = bx.T @ by / m
        second = (bx**2).T @ (by**2) / m
        se = np.sqrt(np.maximum(second - vals**2, 0.0) / m)
        return BasisCorrMatrix(vals, basis.name, f"monte_carlo(n={m}, seed={seed})", se)

    if method != "hardy_krause":
        raise ValueError("method must be 'hardy_krause' or 'monte_carlo'")
    if not copula.has_cdf:
        raise ValueError(
            f"{type(copula).__name__} exposes no cdf; use method='monte_carlo'"
        )
    t, w = np.polynomial.legendre.leggauss(256)
    nodes = 0.5 * (t + 1.0)
    wts = 0.5 * w
    cgrid = copula.cdf(nodes[:, None], nodes[None, :])
    dmat = np.vstack(
        [wts * basis.derivative(j, nodes) for j in range(1, N + 1)]
    )
    ends = np.array([float(basis(j, 1.0)) for j in range(1, N + 1)])
    vals = dmat @ cgrid @ dmat.T - np.outer(ends, ends)
    return BasisCorrMatrix(vals, basis.name, "hardy_krause")


# ---------------------------------------------------------------------------
# bounds


@dataclass
class BoundsResult:
    minimum: float
    maximum: float
    attains_plus_one: bool
    attains_minus_one: bool


def _bound_integral(dg: PushforwardDistribution, dh: PushforwardDistribution, reflect):
    """int Q_g(p) Q_h(p) dp (or with p -> 1-p in Q_h when reflect)."""
    cps = [np.asarray(dg.critical_probs)]
    ch = np.asarray(dh.critical_probs)
    cps.append(1.0 - ch if reflect else ch)
    brk = np.unique(np.clip(np.concatenate(cps), 0.0, 1.0))
    brk = brk[np.concatenate([[True], np.diff(brk) > 1e-13])]
    t, w = np.polynomial.legendre.leggauss(96)
    total = 0.0
    for i in range(len(brk) - 1):
        a, b = brk[i], brk[i + 1]
        p = 0.5 * (b - a) * (t + 1.0) + a
        qg = dg.quantile(p)
        qh = dh.quantile(1.0 - p if reflect else p)
        total += 0.5 * (b - a) * np.sum(w * qg * qh)
    return float(total)


def _distribution(g: PiecewiseMonotone) -> PushforwardDistribution:
    key = g.meta if (g.meta and g.meta[0] in ("legendre", "cosine", "fourier")) else None
    if key is not None:
        if key not in _DIST_CACHE:
            _DIST_CACHE[key] = PushforwardDistribution(g)
        return _DIST_CACHE[key]
    return PushforwardDistribution(g)


def bounds(g, h) -> BoundsResult:
    """Sharp attainable range of the generalized Spearman correlation.

    The maximum is int Q_g(p) Q_h(p) dp over the shared quantile level;
    the minimum pairs Q_h with the reversed level 1-p.  Also reports
    whether the bounds reach +-1, which happens exactly when the two
    pushforward laws coincide (respectively are reflections).
    """
    g = _as_score(g)
    h = _as_score(h)
    dg = _distribution(g)
    dh = _distribution(h)
    rho_max = _bound_integral(dg, dh, reflect=False)
    rho_min = _bound_integral(dg, dh, reflect=True)
    p = np.linspace(0.005, 0.995, 199)
    qg = dg.quantile(p)
    plus = bool(np.max(np.abs(qg - dh.quantile(p))) < 1e-8)
    minus = bool(np.max(np.abs(qg + dh.quantile(1.0 - p))) < 1e-8)
    return BoundsResult(rho_min, rho_max, plus, minus)


# ---------------------------------------------------------------------------
# support sets


def support_set(g, h, extremum="max", resolution=200):
    """Support of the copula attaining the extreme correlation of (g, h).

    For a grid of u values, emits every v with T_h(v) = T_g(u) (maximum)
    or T_h(v) = 1 - T_g(u) (minimum), where T are the induced
    uniformity-preserving transformations.  The set is a union of strictly
    monotone curve pieces within the rectangles of the turning-point grid.

    Returns
    -------
    ndarray, shape (K, 2)
        Points (u, v), ordered by u.
    """
    if extremum not in ("max", "min"):
        raise ValueError("extremum must be 'max' or 'min'")
    g = _as_score(g)
    h = _as_score(h)
    tg = build_udp(g)
    th = build_udp(h)
    eps = 1e-6
    us = np.linspace(eps, 1.0 - eps, int(resolution))
    x = np.asarray(tg(us), dtype=float)
    if extremum == "min":
        x = 1.0 - x
    x = np.clip(x, 1e-9, 1.0 - 1e-9)
    roots, wts = th.branch_preimages(x)
    pts = []
    for i, u in enumerate(us):
        vs = roots[wts[:, i] > 0, i]
        for v in vs:
            pts.append((u, float(v)))
    return np.asarray(pts)


# ---------------------------------------------------------------------------
# elicitation and diagnostics


def maximize_gen_spearman(P):
    """Transformation pair maximizing the correlation, from a basis matrix.

    Takes the top singular triple of P: the coefficient vectors alpha_g,
    alpha_h (unit length) maximize alpha_g' P alpha_h and the singular
    value is the achieved correlation of sum alpha_j B_j pairs.

    Sign convention: the first nonzero entry of each vector is positive.
    Ties in the top singular value are broken toward the vector whose
    largest-magnitude entry has the lowest index.
    """
    vals = P.values if isinstance(P, BasisCorrMatrix) else np.asarray(P, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("matrix entries must be finite")
    U, s, Vt = np.linalg.svd(vals)
    top = np.flatnonzero(s >= s[0] - 1e-12)
    pick = top[np.argmin([int(np.argmax(np.abs(U[:, i]))) for i in top])]
    ag, ah = U[:, pick].copy(), Vt[pick].copy()
    for a in (ag, ah):
        nz = np.flatnonzero(np.abs(a) > 1e-12)
        if nz.size and a[nz[0]] < 0:
            a *= -1.0
    if ag @ vals @ ah < 0:
        ah *= -1.0
    return ag, ah, float(s[pick])


@dataclass
class SymmetryFlags:
    exchangeable: bool
    h_symmetric: bool
    v_symmetric: bool
    radially_symmetric: bool
    jointly_symmetric: bool


def symmetry_report(P, tol=1e-8) -> SymmetryFlags:
    """Zero/equality patterns of a natural-basis correlation matrix.

    h-symmetry (invariance under u -> 1-u) zeroes the odd columns,
    v-symmetry the odd rows, radial symmetry the entries with j+k odd,
    joint symmetry everything with j or k odd.
    """
    vals = P.values if isinstance(P, BasisCorrMatrix) else np.asarray(P, dtype=float)
    N = vals.shape[0]
    j = np.arange(1, N + 1)
    odd = j % 2 == 1
    exch = bool(np.max(np.abs(vals - vals.T)) <= tol)
    h_sym = bool(np.max(np.abs(vals[:, odd])) <= tol)
    v_sym = bool(np.max(np.abs(vals[odd, :])) <= tol)
    cross = (odd[:, None] != odd[None, :])
    radial = bool(np.max(np.abs(vals[cross])) <= tol)
    either = odd[:, None] | odd[None, :]
    joint = bool(np.max(np.abs(vals[either])) <= tol)
    return SymmetryFlags(exch, h_sym, v_sym, radial, joint)


# ---------------------------------------------------------------------------
# emission


def matrix_to_csv(P: BasisCorrMatrix) -> str:
    """CSV text: header row of column orders, one row per j."""
    buf = io.StringIO()
    N = P.order
    buf.write("j\\k," + ",".join(str(k) for k in range(1, N + 1)) + "\n")
    for j in range(N):
        buf.write(
            str(j + 1) + "," + ",".join(f"{x:.10g}" for x in P.values[j]) + "\n"
        )
    return buf.getvalue()


def matrix_to_json(P: BasisCorrMatrix) -> dict:
    out = {
        "schema_version": 1,
        "basis": P.basis,
        "order": P.order,
        "method": P.method,
        "values": P.values.tolist(),
    }
    if P.stderr is not None:
        out["stderr"] = np.asarray(P.stderr).tolist()
    return out
