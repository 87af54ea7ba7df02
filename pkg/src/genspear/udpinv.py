"""Stochastic inversion of uniformity-preserving transformations.

Inverting a many-to-one uniformity-preserving transformation T at a point
x means selecting one of the preimage roots r_i(x) at random with
probability 1/|T'(r_i(x))|; the selection is driven by an independent
uniform randomizer z, so the inverse is T_inv(x, z) = G_x^{-1}(z) with G_x
the discrete root distribution.  Applied componentwise to a base copula
sample this produces new copulas with prescribed non-monotonic dependence:
the density for independent randomizers is simply
c(u, v) = c*(T_1(u), T_2(v)), the zigzag transformations admit a closed
cdf, and suitable randomizer coupling yields copulas attaining the sharp
correlation bounds (including two explicit constructions that maximize the
(4,4) Legendre correlation).  Maximum-likelihood fitting of the
independent-inversion model class is included.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize, stats

from .copulas import Copula, from_family
from .transform import (
    CosineUdp,
    IdentityUdp,
    RegularUdp,
    VTransformUdp,
    transform_from_spec,
    transform_to_spec,
)

__all__ = [
    "stochastic_inverse",
    "sample_inverted",
    "inverted_density",
    "InvertedCopula",
    "ThresholdKernel",
    "cosine_inverted_cdf",
    "ExtremalCopula",
    "jointly_symmetric_44",
    "prohibition_sign",
    "fit_ml",
]

_R44 = np.sqrt(3.0 / 14.0)


def _invert_batch(T: RegularUdp, x, z):
    """Vectorized stochastic inverse; roots chosen by the randomizer z."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    roots, w = T.branch_preimages(x)
    cum = np.cumsum(w, axis=0)
    zz = np.maximum(z, 1e-12)
    idx = np.argmax(cum >= zz[None, :], axis=0)
    return roots[idx, np.arange(x.size)]


def stochastic_inverse(T: RegularUdp, x, z):
    """One stochastic inverse value T_inv(x, z).

    Parameters
    ----------
    T : RegularUdp
    x : float in (0, 1)
        The level to invert.
    z : float in [0, 1]
        Uniform randomizer selecting among the preimage roots with
        probabilities 1/|T'(r_i)|; ties at the cumulative boundaries break
        toward the left root.

    Returns
    -------
    float
        A root r with T(r) = x (to 1e-9).
    """
    x = float(x)
    z = float(z)
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    if not 0.0 <= z <= 1.0:
        raise ValueError("z must lie in [0, 1]")
    return float(_invert_batch(T, np.array([x]), np.array([z]))[0])


class ThresholdKernel:
    """Randomizer coupling switching on the magnitude of the base pair.

    Returns comonotone randomizers when max(v1, v2) exceeds the threshold
    and countermonotone ones otherwise.  Each randomizer is marginally
    uniform and independent of its own coordinate.
    """

    def __init__(self, threshold=0.6):
        self.threshold = float(threshold)

    def __call__(self, v1, v2, rng):
        z = rng.uniform(size=v1.shape)
        z2 = np.where(np.maximum(v1, v2) > self.threshold, z, 1.0 - z)
        return z, z2


def _check_kernel(kernel, rng):
    """Marginal-uniformity self-test for a custom randomizer kernel."""
    test_rng = np.random.default_rng(987654321)
    v1 = test_rng.uniform(size=20000)
    v2 = test_rng.uniform(size=20000)
    z1, z2 = kernel(v1, v2, test_rng)
    for z in (z1, z2):
        if stats.kstest(z, "uniform").statistic > 0.02:
            raise ValueError(
                "randomizer kernel fails the marginal-uniformity self-test"
            )


def sample_inverted(base, t1, t2, mode="independent", n=1000, seed=None, kernel=None):
    """Sample the copula obtained by componentwise stochastic inversion.

    Parameters
    ----------
    base : Copula
        Base copula supplying (V1, V2).
    t1, t2 : RegularUdp
    mode : {"independent", "comonotone", "countermonotone", "custom"}
        Coupling of the two randomizers Z1, Z2.
    n : int
    seed : int or numpy Generator
    kernel : callable, optional
        For mode "custom": kernel(v1, v2, rng) -> (z1, z2).  Must pass a
        marginal-uniformity self-test.

    Returns
    -------
    ndarray, shape (n, 2)
        Pairs with uniform margins.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    uv = base.sample(int(n), rng=rng)
    v1 = np.clip(uv[:, 0], 1e-12, 1 - 1e-12)
    v2 = np.clip(uv[:, 1], 1e-12, 1 - 1e-12)
    if mode == "independent":
        z1 = rng.uniform(size=v1.shape)
        z2 = rng.uniform(size=v1.shape)
    elif mode == "comonotone":
        z1 = z2 = rng.uniform(size=v1.shape)
    elif mode == "countermonotone":
        z1 = rng.uniform(size=v1.shape)
        z2 = 1.0 - z1
    elif mode == "custom":
        if kernel is None:
            raise ValueError("mode 'custom' requires a kernel")
        _check_kernel(kernel, rng)
        z1, z2 = kernel(v1, v2, rng)
    else:
        raise ValueError(f"unknown randomizer mode {mode!r}")
    u = _invert_batch(t1, v1, z1)
    v = _invert_batch(t2, v2, z2)
    return np.column_stack([u, v])


def inverted_density(base, t1, t2, u, v):
    """Density c(u, v) = c*(T1(u), T2(v)) of the independently inverted
    copula.

    Valid for the independent-randomizer mode only.  At the finitely many
    partition points where a T is not differentiable the value is the left
    limit; the set is null and does not affect likelihoods.
    """
    cstar = base.pdf if isinstance(base, Copula) else base
    x = np.clip(np.asarray(t1(u), dtype=float), 1e-12, 1 - 1e-12)
    y = np.clip(np.asarray(t2(v), dtype=float), 1e-12, 1 - 1e-12)
    return cstar(x, y)


class InvertedCopula(Copula):
    """Copula of a componentwise stochastic inversion of a base copula."""

    def __init__(self, base, t1, t2, mode="independent", kernel=None):
        self.base = base
        self.t1 = t1
        self.t2 = t2
        self.mode = mode
        self.kernel = kernel
        self.has_pdf = mode == "independent" and base.has_pdf

    def pdf(self, u, v):
        if not self.has_pdf:
            raise NotImplementedError(
                "density available for independent randomizers only"
            )
        return inverted_density(self.base, self.t1, self.t2, u, v)

    def sample(self, n, rng=None):
        return sample_inverted(
            self.base, self.t1, self.t2, mode=self.mode, n=n, seed=rng,
            kernel=self.kernel,
        )

    def __repr__(self):
        return f"InvertedCopula({self.base!r}, mode={self.mode!r})"


def cosine_inverted_cdf(base, j, k, u, v):
    """Cdf of the inverted copula for the zigzag transformation pair.

    C(u,v) = [C*(T_j(u), T_k(v)) - T_j(u) T_k(v)] / (T_j'(u) T_k'(v)) + uv
    with slopes +-j and +-k on the linear pieces.  Points on the zigzag
    grid lines are moved to the interior of the adjacent cell (the limit
    is the same from either side since the copula is continuous).
    """
    cstar = base.cdf if isinstance(base, Copula) else base
    tj, tk = CosineUdp(j), CosineUdp(k)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out_margin_u = np.isclose(u, 1.0)
    out_margin_v = np.isclose(v, 1.0)
    eps = 1e-9
    uu = np.where(np.isclose(u * j, np.round(u * j), atol=eps), u - eps / j, u)
    vv = np.where(np.isclose(v * k, np.round(v * k), atol=eps), v - eps / k, v)
    uu = np.clip(uu, eps, 1 - eps)
    vv = np.clip(vv, eps, 1 - eps)
    x, y = tj(uu), tk(vv)
    su = tj.slope_sign(uu) * j
    sv = tk.slope_sign(vv) * k
    c = (cstar(x, y) - x * y) / (su * sv) + uu * vv
    c = np.where(out_margin_u, v, np.where(out_margin_v, u, c))
    return c


# ---------------------------------------------------------------------------
# explicit extremal constructions


class ExtremalCopula(Copula):
    """Copula supported on an extremal support set."""

    kind = ""

    def sample(self, n, rng=None):
        raise NotImplementedError


class _JointlySymmetric44(ExtremalCopula):
    """Jointly symmetric copula maximizing the (4,4) Legendre correlation.

    Mass lives on the two diagonals and the circle of radius sqrt(3/14)
    centred at (1/2, 1/2).  Sampling draws the generating pair (U*, V*)
    on the blown-up upper quadrant (diagonal plus quarter circle of radius
    2r) and pushes it through independent stochastic inversion of the
    symmetric tent transformation; the full cdf is assembled from the
    closed-form generating cdf.
    """

    kind = "jointly_symmetric_44"
    has_cdf = True
    radius = _R44

    def cstar_cdf(self, u, v):
        """Cdf of the generating pair (U*, V*) = (T(U), T(V))."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        r = self.radius
        inside = (u <= 2 * r) & (v <= 2 * r)
        corr = (
            np.maximum(u**2 + v**2 - 4 * r**2, 0.0) - np.minimum(u, v) ** 2
        ) / (4 * r)
        return np.minimum(u, v) + np.where(inside, corr, 0.0)

    def sample_cstar(self, n, rng=None):
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        r = self.radius
        u = rng.uniform(size=n)
        keep = rng.uniform(size=n) < 1.0 - u / (2 * r) * (u <= 2 * r)
        v = np.where(keep, u, np.sqrt(np.maximum(4 * r**2 - u**2, 0.0)))
        return np.column_stack([u, v])

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        tu = np.abs(2 * u - 1)
        tv = np.abs(2 * v - 1)
        sign = np.where((u - 0.5) * (v - 0.5) < 0, -1.0, 1.0)
        return (2 * u + 2 * v - 1.0 + sign * self.cstar_cdf(tu, tv)) / 4.0

    def sample(self, n, rng=None):
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        star = self.sample_cstar(n, rng)
        s1 = rng.uniform(size=n) < 0.5
        s2 = rng.uniform(size=n) < 0.5
        u = np.where(s1, (1.0 + star[:, 0]) / 2.0, (1.0 - star[:, 0]) / 2.0)
        v = np.where(s2, (1.0 + star[:, 1]) / 2.0, (1.0 - star[:, 1]) / 2.0)
        return np.column_stack([u, v])

    def __repr__(self):
        return "jointly_symmetric_44()"


def jointly_symmetric_44() -> ExtremalCopula:
    """The explicit jointly symmetric copula maximizing rho^Lambda_44."""
    return _JointlySymmetric44()


class _ProhibitionSign(ExtremalCopula):
    """Dependently inverted copula maximizing the (4,4) Legendre
    correlation.

    Uses the udp transformation of the order-4 Legendre member with
    coupled randomizers: where the level has two preimage roots the
    randomizers are comonotone (samples fall on the outer diagonal arms);
    where it has four roots, the root pair is drawn from a contingency
    table that puts zero mass on the diagonal, producing the circle and
    the inscribed antidiagonal segment.
    """

    kind = "prohibition_sign"

    def __init__(self):
        self._T = transform_from_spec(
            {"kind": "basis", "basis": "legendre", "order": 4}
        )

    def sample(self, n, rng=None):
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        x = np.clip(rng.uniform(size=n), 1e-9, 1 - 1e-9)
        roots, w = self._T.branch_preimages(x)
        # compact to the valid roots, ascending, one row per root index
        valid = w > 1e-15
        order = np.argsort(~valid, axis=0, kind="stable")
        roots = np.take_along_axis(roots, order, 0)
        w = np.take_along_axis(w, order, 0)
        z = rng.uniform(size=n)
        four = valid.sum(axis=0) == 4
        u = np.empty(n)
        v = np.empty(n)

        # two roots (outer branches only): comonotone randomizers
        two = ~four
        pick_right = z[two] >= w[0, two]
        i2 = np.where(pick_right, 1, 0)
        u[two] = v[two] = roots[i2, np.flatnonzero(two)]

        # four roots: joint table with p_A = p_1 = p_4, p_B = p_2 = p_3
        idx4 = np.flatnonzero(four)
        pa = w[0, idx4]
        pb = w[1, idx4]
        pairs = np.array(
            [
                (0, 1), (0, 2), (1, 0), (2, 0),
                (1, 3), (3, 1), (2, 3), (3, 2),
                (1, 2), (2, 1),
            ]
        )
        probs = np.vstack([np.tile(pa / 2.0, (8, 1)), np.tile(pb - pa, (2, 1))])
        cum = np.cumsum(probs, axis=0)
        cum /= cum[-1]
        cat = np.argmax(cum >= np.maximum(z[idx4], 1e-12)[None, :], axis=0)
        u[idx4] = roots[pairs[cat, 0], idx4]
        v[idx4] = roots[pairs[cat, 1], idx4]
        return np.column_stack([u, v])

    def __repr__(self):
        return "prohibition_sign()"


def prohibition_sign() -> ExtremalCopula:
    """The prohibition-sign copula maximizing rho^Lambda_44."""
    return _ProhibitionSign()


# ---------------------------------------------------------------------------
# maximum-likelihood fitting


_PARAM_BOXES = {
    "frank": (-30.0, 30.0),
    "clayton": (0.05, 28.0),
    "gumbel": (1.0001, 30.0),
    "gaussian": (-0.99, 0.99),
    "gauss": (-0.99, 0.99),
    "normal": (-0.99, 0.99),
    "studentt": (-0.99, 0.99),
    "t": (-0.99, 0.99),
}

_T_BOXES = {"delta": (0.01, 0.99), "kappa": (0.05, 20.0)}


def _resolve_t_spec(tspec, params, cursor):
    """Materialize a transformation spec, consuming free parameters."""
    kind = tspec.get("kind", "identity")
    if kind == "identity":
        return IdentityUdp(), cursor, {"kind": "identity"}
    if kind == "vtransform":
        delta = tspec.get("delta")
        kappa = tspec.get("kappa")
        if delta is None:
            delta = params[cursor]
            cursor += 1
        if kappa is None:
            kappa = params[cursor]
            cursor += 1
        return (
            VTransformUdp(float(delta), float(kappa)),
            cursor,
            {"kind": "vtransform", "delta": float(delta), "kappa": float(kappa)},
        )
    # fixed transforms (basis, piecewise)
    T = transform_from_spec(tspec)
    return T, cursor, dict(tspec)


def _free_params(model_spec):
    """Ordered list of (name, box) for the free parameters."""
    free = []
    base = model_spec.get("base", {"family": "independence"})
    family = base.get("family", "independence").lower()
    if family not in ("independence", "comonotone", "countermonotone", "m", "w"):
        if base.get("theta") is None:
            free.append(("theta", _PARAM_BOXES[family]))
    for key in ("t1", "t2"):
        tspec = model_spec.get(key, {"kind": "identity"})
        if tspec.get("kind") == "vtransform":
            for p in ("delta", "kappa"):
                if tspec.get(p) is None:
                    free.append((f"{key}.{p}", _T_BOXES[p]))
    return free


def _build_model(model_spec, params):
    base_spec = model_spec.get("base", {"family": "independence"})
    family = base_spec.get("family", "independence").lower()
    cursor = 0
    theta = base_spec.get("theta")
    if family not in ("independence", "comonotone", "countermonotone", "m", "w"):
        if theta is None:
            theta = params[cursor]
            cursor += 1
        if family == "frank" and abs(theta) < 1e-2:
            theta = 1e-2 if theta >= 0 else -1e-2
    cop = from_family(
        family,
        theta,
        rotation=base_spec.get("rotation", 0),
        nu=base_spec.get("nu"),
    )
    t1, cursor, t1_out = _resolve_t_spec(
        model_spec.get("t1", {"kind": "identity"}), params, cursor
    )
    t2, cursor, t2_out = _resolve_t_spec(
        model_spec.get("t2", {"kind": "identity"}), params, cursor
    )
    base_out = {"family": family}
    if theta is not None:
        base_out["theta"] = float(theta)
    if base_spec.get("rotation"):
        base_out["rotation"] = base_spec["rotation"]
    if base_spec.get("nu") is not None:
        base_out["nu"] = base_spec["nu"]
    return cop, t1, t2, base_out, t1_out, t2_out


def _pseudo_obs(data):
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("data must be an (n, 2) array")
    n = len(data)
    if n < 10:
        raise ValueError("need at least 10 observations to fit")
    r = stats.rankdata(data[:, 0], method="average")
    s = stats.rankdata(data[:, 1], method="average")
    return np.column_stack([r, s]) / (n + 1.0)


def fit_ml(data, model_spec, seed=0):
    """Fit an independent-inversion copula model by maximum likelihood.

    Parameters
    ----------
    data : ndarray (n, 2) or object with ranks_x/ranks_y
        Raw observations (converted to pseudo-observations by ranking) or
        an already ranked sample.
    model_spec : dict
        {"base": {"family", "theta" (None = free), "rotation", "nu"},
         "t1": transform spec with None entries free,
         "t2": same, "reflect2": bool}.
        The model density is c*_theta(T1(u), T2(v)) (with 1 - T2 when
        reflect2), the independent-randomizer inversion density.
    seed : int
        Seed for the multi-start initial points.

    Returns
    -------
    dict
        base/t1/t2/reflect2 with estimates filled in, plus loglik,
        converged, boundary, n.
    """
    if hasattr(data, "ranks_x"):
        n = data.n
        uv = np.column_stack([data.ranks_x, data.ranks_y]) / (n + 1.0)
    else:
        uv = _pseudo_obs(data)
    u, v = uv[:, 0], uv[:, 1]
    reflect2 = bool(model_spec.get("reflect2", False))
    free = _free_params(model_spec)

    def negloglik(params):
        params = np.clip(params, [b[0] for _, b in free], [b[1] for _, b in free]) \
            if free else params
        try:
            cop, t1, t2, *_ = _build_model(model_spec, params)
            x = np.clip(np.asarray(t1(u)), 1e-10, 1 - 1e-10)
            y = np.clip(np.asarray(t2(v)), 1e-10, 1 - 1e-10)
            if reflect2:
                y = 1.0 - y
            if isinstance(cop, Copula) and not cop.has_pdf:
                dens = np.ones_like(x)
            else:
                dens = np.asarray(cop.pdf(x, y))
            if np.any(~np.isfinite(dens)) or np.any(dens <= 0):
                return 1e10
            return -float(np.sum(np.log(dens)))
        except (ValueError, FloatingPointError):
            return 1e10

    if not free:
        ll = -negloglik(np.array([]))
        cop, t1, t2, base_out, t1_out, t2_out = _build_model(model_spec, np.array([]))
        return {
            "schema_version": 1,
            "base": base_out,
            "t1": t1_out,
            "t2": t2_out,
            "reflect2": reflect2,
            "loglik": ll,
            "converged": True,
            "boundary": False,
            "n": len(u),
        }

    lo = np.array([b[0] for _, b in free])
    hi = np.array([b[1] for _, b in free])
    rng = np.random.default_rng(seed)
    starts = [lo + (hi - lo) * rng.uniform(0.15, 0.85, size=len(free))
              for _ in range(5)]
    best = None
    for x0 in starts:
        res = optimize.minimize(
            negloglik, x0, method="Nelder-Mead",
            options={"fatol": 1e-8, "xatol": 1e-6, "maxiter": 4000},
        )
        if best is None or res.fun < best.fun:
            best = res
    params = np.clip(best.x, lo, hi)
    boundary = bool(np.any((params - lo < 1e-3) | (hi - params < 1e-3)))
    cop, t1, t2, base_out, t1_out, t2_out = _build_model(model_spec, params)
    return {
        "schema_version": 1,
        "base": base_out,
        "t1": t1_out,
        "t2": t2_out,
        "reflect2": reflect2,
        "loglik": -float(best.fun),
        "converged": bool(best.success and best.fun < 1e9),
        "boundary": boundary,
        "n": len(u),
    }
