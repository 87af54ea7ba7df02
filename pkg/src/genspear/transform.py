"""Piecewise monotone transformations of the unit interval.

This module represents transformations g on [0, 1] that are continuous and
strictly monotonic on the cells of a finite partition, computes the
distribution of g(U) for uniform U (cdf, density, quantile), and builds the
induced uniformity-preserving transformation T_g = F_g o g.  It also
implements the two-branch v-transform family directly.

A transformation T is uniformity preserving when T(U) is again uniform.
Every such T obtained from a piecewise monotone g via its own pushforward
cdf is uniformity preserving by construction; the classes below expose the
preimage roots r_i(x) of T(u) = x together with the selection weights
1 / |T'(r_i(x))|, which are the ingredients of stochastic inversion.

Numerical strategy: branch inverses are computed by vectorized bisection
(the branches are strictly monotone, so 80 halvings reach machine
precision), cdf values follow from the branch-inverse representation, and
quantiles use bracketed bisection with a Newton polish to 1e-12.  For bulk
quantile evaluation a per-segment Chebyshev interpolant is built once; the
segments are delimited by the critical probabilities (images of the
turning points), across which the quantile remains one-sidedly analytic
even though the cdf has square-root branch points there.
"""

from __future__ import annotations

import warnings

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from scipy.integrate import fixed_quad

from .basis import BasisFunction, get_basis

__all__ = [
    "DegenerateTransformError",
    "PiecewiseMonotone",
    "PushforwardDistribution",
    "RegularUdp",
    "IdentityUdp",
    "VTransformUdp",
    "CosineUdp",
    "PushforwardUdp",
    "PowerGenerator",
    "piecewise_from_basis",
    "u_shape",
    "standardize",
    "pushforward_cdf",
    "pushforward_pdf",
    "build_udp",
    "v_transform",
    "preimage_roots",
    "transform_to_spec",
    "transform_from_spec",
]

#: Evaluations this close to a critical value are nudged inward.
CRITICAL_TOL = 1e-12


class DegenerateTransformError(ValueError):
    """Raised when a transformation is constant (zero variance)."""


def _branch_inverse(func, a, b, increasing, y, iters=90):
    """Invert a strictly monotone func on [a, b] at each y by bisection.

    y values outside the branch image are clipped to the endpoints; callers
    mask those out.  Vectorized over y.
    """
    y = np.asarray(y, dtype=float)
    lo = np.full(y.shape, a, dtype=float)
    hi = np.full(y.shape, b, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        go_right = (fm < y) if increasing else (fm > y)
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    return 0.5 * (lo + hi)


class PiecewiseMonotone:
    """A continuous function on [0, 1], strictly monotone between knots.

    Parameters
    ----------
    partition : array_like
        Ascending knots 0 = a_0 < ... < a_M = 1.  Interior knots are the
        turning points (or artificial refinement points) of the function.
    func : callable
        Vectorized evaluation on [0, 1].
    deriv : callable, optional
        Vectorized derivative.  A central finite difference is substituted
        when omitted.
    meta : tuple, optional
        Provenance tag such as ("cosine", 3); lets downstream constructors
        pick closed forms when available.

    Raises
    ------
    ValueError
        If a branch fails a sampled strict-monotonicity check; functions
        with saddle points or flat pieces are rejected rather than guessed
        at.
    """

    def __init__(self, partition, func, deriv=None, meta=None, _validate=True):
        self.partition = np.asarray(partition, dtype=float)
        if self.partition.ndim != 1 or len(self.partition) < 2:
            raise ValueError("partition must contain at least [0, 1]")
        if abs(self.partition[0]) > 1e-14 or abs(self.partition[-1] - 1.0) > 1e-14:
            raise ValueError("partition must start at 0 and end at 1")
        if np.any(np.diff(self.partition) <= 0):
            raise ValueError("partition must be strictly increasing")
        self.func = func
        self._deriv = deriv
        self.meta = meta
        self.n_branches = len(self.partition) - 1

        # branch endpoint values and directions
        vals = np.asarray(func(self.partition), dtype=float)
        self._knot_values = vals
        left, right = vals[:-1], vals[1:]
        self.directions = np.where(right > left, 1, -1)
        self.branch_lo = np.minimum(left, right)
        self.branch_hi = np.maximum(left, right)
        if _validate:
            self._check_monotone()

    def _check_monotone(self):
        for m in range(self.n_branches):
            a, b = self.partition[m], self.partition[m + 1]
            u = np.linspace(a, b, 33)
            d = np.diff(np.asarray(self.func(u), dtype=float))
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError(
                    f"branch {m} on [{a:.6g}, {b:.6g}] is not strictly monotone"
                )

    def __call__(self, u):
        return self.func(np.asarray(u, dtype=float))

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        if self._deriv is not None:
            return self._deriv(u)
        h = 1e-7
        lo = np.clip(u - h, 0.0, 1.0)
        hi = np.clip(u + h, 0.0, 1.0)
        return (self.func(hi) - self.func(lo)) / (hi - lo)

    @property
    def range(self):
        return float(self.branch_lo.min()), float(self.branch_hi.max())

    @property
    def critical_values(self):
        """Images of the knots (branch endpoint values), sorted unique."""
        return np.unique(self._knot_values)

    @property
    def turning_points(self):
        return self.partition[1:-1]

    def roots(self, y):
        """All solutions of g(u) = y in [0, 1], ascending, for scalar y."""
        y = float(y)
        out = []
        for m in range(self.n_branches):
            if self.branch_lo[m] - 1e-13 <= y <= self.branch_hi[m] + 1e-13:
                r = _branch_inverse(
                    self.func,
                    self.partition[m],
                    self.partition[m + 1],
                    self.directions[m] > 0,
                    np.array([y]),
                )[0]
                out.append(r)
        out = np.sort(np.asarray(out))
        if len(out) > 1:
            keep = np.concatenate([[True], np.diff(out) > 1e-11])
            out = out[keep]
        return out

    def branch_roots(self, y):
        """Branch-wise solutions of g(u) = y, vectorized over y.

        Returns
        -------
        roots : ndarray, shape (M, len(y))
        valid : ndarray of bool, same shape
            Marks branches whose image actually contains y.
        """
        y = np.atleast_1d(np.asarray(y, dtype=float))
        roots = np.empty((self.n_branches, y.size))
        valid = np.empty((self.n_branches, y.size), dtype=bool)
        for m in range(self.n_branches):
            roots[m] = _branch_inverse(
                self.func,
                self.partition[m],
                self.partition[m + 1],
                self.directions[m] > 0,
                y,
            )
            valid[m] = (y >= self.branch_lo[m] - 1e-13) & (
                y <= self.branch_hi[m] + 1e-13
            )
        return roots, valid

    def moments(self):
        """Mean and variance of g(U) for uniform U, by quadrature."""
        e = v = 0.0
        for m in range(self.n_branches):
            a, b = self.partition[m], self.partition[m + 1]
            e += fixed_quad(self.func, a, b, n=64)[0]
            v += fixed_quad(lambda u: np.asarray(self.func(u)) ** 2, a, b, n=64)[0]
        return e, v - e * e

    def standardized(self, tol=1e-8):
        e, v = self.moments()
        return abs(e) < tol and abs(v - 1.0) < tol

    def standardize(self):
        """Affinely rescale to mean 0, variance 1 under the uniform law."""
        e, v = self.moments()
        if v <= 1e-12:
            raise DegenerateTransformError(
                "transformation is (numerically) constant; cannot standardize"
            )
        s = np.sqrt(v)
        f, d = self.func, self._deriv
        new_deriv = (lambda u: d(u) / s) if d is not None else None
        return PiecewiseMonotone(
            self.partition,
            lambda u: (f(u) - e) / s,
            deriv=new_deriv,
            meta=self.meta,
            _validate=False,
        )

    def __repr__(self):
        return (
            f"PiecewiseMonotone(branches={self.n_branches}, "
            f"range=({self.range[0]:.4g}, {self.range[1]:.4g}))"
        )


def piecewise_from_basis(basis, j):
    """PiecewiseMonotone view of a basis function, with turning-point knots."""
    bf = basis if isinstance(basis, BasisFunction) else BasisFunction(basis, j)
    tp = bf.turning_points
    partition = np.concatenate([[0.0], tp, [1.0]])
    return PiecewiseMonotone(
        partition,
        bf.__call__,
        deriv=bf.derivative,
        meta=(bf.basis.name, bf.j),
        _validate=False,
    )


def u_shape(delta, p, q):
    """Asymmetric u-shaped transformation.

    h(u) = ((delta - u)/delta)^q on [0, delta] and
    ((u - delta)/(1 - delta))^p on [delta, 1]; decreasing to 0 at the
    fulcrum then increasing back to 1.  Its induced uniformity-preserving
    transformation is the v-transform with generator 1 - (1-x)^(q/p).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if p <= 0 or q <= 0:
        raise ValueError("p and q must be positive")

    def f(u):
        u = np.asarray(u, dtype=float)
        left = ((delta - u) / delta).clip(min=0.0) ** q
        right = ((u - delta) / (1.0 - delta)).clip(min=0.0) ** p
        return np.where(u <= delta, left, right)

    def d(u):
        u = np.asarray(u, dtype=float)
        left = -q / delta * ((delta - u) / delta).clip(min=0.0) ** (q - 1)
        right = (
            p / (1.0 - delta) * ((u - delta) / (1.0 - delta)).clip(min=0.0) ** (p - 1)
        )
        return np.where(u <= delta, left, right)

    return PiecewiseMonotone(
        np.array([0.0, delta, 1.0]), f, deriv=d, meta=("u_shape", delta, p, q)
    )


class PushforwardDistribution:
    """Law of g(U) for uniform U and piecewise monotone g.

    Exposes cdf, pdf and quantile handles.  The cdf is evaluated exactly
    from the branch inverses (signed-root form); no grid approximation is
    involved.  Quantiles are served from a per-segment Chebyshev
    interpolant between critical probabilities, polished by Newton steps
    against the exact cdf to 1e-12.
    """

    def __init__(self, source: PiecewiseMonotone):
        self.source = source
        self.range = source.range
        crit = source.critical_values
        self.critical_values = crit
        # images of knots where the derivative vanishes: the density blows
        # up like an inverse square root there
        knots = source.partition
        slopes = np.abs(source.derivative(np.clip(knots, 1e-12, 1 - 1e-12)))
        self.singular_values = np.unique(source(knots)[slopes < 1e-8])
        self._crit_probs = None
        self._segments = None

    # -- exact forward machinery ------------------------------------------

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x1 = np.atleast_1d(x)
        g = self.source
        total = np.zeros(x1.shape)
        for m in range(g.n_branches):
            a, b = g.partition[m], g.partition[m + 1]
            lo, hi = g.branch_lo[m], g.branch_hi[m]
            inc = g.directions[m] > 0
            inside = (x1 >= lo) & (x1 < hi)
            r = _branch_inverse(g.func, a, b, inc, np.clip(x1, lo, hi))
            contrib = np.where(
                x1 >= hi, b - a, np.where(inside, (r - a) if inc else (b - r), 0.0)
            )
            total += contrib
        total = np.clip(total, 0.0, 1.0)
        return float(total[0]) if scalar else total

    def pdf(self, x):
        """Density of g(U); +inf at critical values, 0 outside the range."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x1 = np.atleast_1d(x)
        g = self.source
        total = np.zeros(x1.shape)
        for m in range(g.n_branches):
            a, b = g.partition[m], g.partition[m + 1]
            lo, hi = g.branch_lo[m], g.branch_hi[m]
            inc = g.directions[m] > 0
            inside = (x1 > lo) & (x1 < hi)
            if not np.any(inside):
                continue
            r = _branch_inverse(g.func, a, b, inc, np.clip(x1, lo, hi))
            slope = np.abs(g.derivative(r))
            with np.errstate(divide="ignore"):
                total += np.where(inside, 1.0 / slope, 0.0)
        if self.singular_values.size:
            on_sing = np.any(
                np.abs(x1[:, None] - self.singular_values[None, :]) < CRITICAL_TOL,
                axis=1,
            )
            total = np.where(on_sing, np.inf, total)
        return float(total[0]) if scalar else total

    # -- quantiles ---------------------------------------------------------

    @property
    def critical_probs(self):
        if self._crit_probs is None:
            p = self.cdf(self.critical_values)
            p = np.unique(np.concatenate([[0.0], np.atleast_1d(p), [1.0]]))
            p = p[(p >= 0.0) & (p <= 1.0)]
            keep = np.concatenate([[True], np.diff(p) > 1e-13])
            self._crit_probs = p[keep]
        return self._crit_probs

    def _quantile_bisect(self, p, newton=True):
        """Bracketed bisection + Newton polish on the exact cdf."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        c, d = self.range
        lo = np.full(p.shape, c)
        hi = np.full(p.shape, d)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            go_right = self.cdf(mid) < p
            lo = np.where(go_right, mid, lo)
            hi = np.where(go_right, hi, mid)
        q = 0.5 * (lo + hi)
        if newton:
            for _ in range(3):
                resid = self.cdf(q) - p
                if np.max(np.abs(resid)) < 1e-13:
                    break
                f = self.pdf(q)
                step = np.where(np.isfinite(f) & (f > 0), resid / np.maximum(f, 1e-300), 0.0)
                q = np.clip(q - step, c, d)
        return q

    def _build_segments(self, deg=80):
        cp = self.critical_probs
        segs = []
        for i in range(len(cp) - 1):
            p0, p1 = cp[i], cp[i + 1]
            # interpolate on nodes pulled slightly inside the segment so the
            # node quantiles avoid the infinite-density endpoints
            eps = 1e-11 * max(p1 - p0, 1e-6)
            nodes = npcheb.chebpts2(deg + 1) * 0.5 * (p1 - p0 - 2 * eps) + 0.5 * (
                p0 + p1
            )
            qn = self._quantile_bisect(nodes)
            coef = npcheb.chebfit(
                (nodes - 0.5 * (p0 + p1)) / (0.5 * (p1 - p0)), qn, deg
            )
            segs.append((p0, p1, coef))
        self._segments = segs

    def quantile(self, p):
        """Quantile of g(U); vectorized, accurate to 1e-12 in probability."""
        p = np.asarray(p, dtype=float)
        scalar = p.ndim == 0
        p1 = np.atleast_1d(p)
        if np.any((p1 < 0) | (p1 > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        if self._segments is None:
            self._build_segments()
        cp = self.critical_probs
        idx = np.clip(np.searchsorted(cp, p1, side="right") - 1, 0, len(cp) - 2)
        q = np.empty(p1.shape)
        for i, (p0, p1b, coef) in enumerate(self._segments):
            sel = idx == i
            if not np.any(sel):
                continue
            t = (p1[sel] - 0.5 * (p0 + p1b)) / (0.5 * (p1b - p0))
            q[sel] = npcheb.chebval(np.clip(t, -1.0, 1.0), coef)
        c, d = self.range
        q = np.clip(q, c, d)
        # Newton polish against the exact cdf
        for _ in range(2):
            resid = self.cdf(q) - p1
            if np.max(np.abs(resid)) < 1e-12:
                break
            f = self.pdf(q)
            step = np.where(np.isfinite(f) & (f > 0), resid / np.maximum(f, 1e-300), 0.0)
            q = np.clip(q - step, c, d)
        q = np.where(p1 <= 0.0, c, np.where(p1 >= 1.0, d, q))
        return float(q[0]) if scalar else q


# ---------------------------------------------------------------------------
# uniformity-preserving transformations


class RegularUdp:
    """Uniformity-preserving transformation with branchwise inverses.

    Subclasses implement ``__call__`` and ``branch_preimages``; the latter
    returns, for a vector of x values, all preimage roots alongside the
    selection weights 1/|T'(r_i)| used by stochastic inversion.
    """

    partition = np.array([0.0, 1.0])

    def __call__(self, u):
        raise NotImplementedError

    def branch_preimages(self, x):
        """Preimage roots of each x.

        Parameters
        ----------
        x : ndarray
            Values in (0, 1).

        Returns
        -------
        roots : ndarray, shape (K, len(x))
        weights : ndarray, shape (K, len(x))
            Nonnegative, zero where no root; columns sum to 1.
        """
        raise NotImplementedError

    def to_spec(self):
        raise NotImplementedError(f"{type(self).__name__} is not serializable")


class IdentityUdp(RegularUdp):
    """The identity map; the udp transformation of any increasing g."""

    def __call__(self, u):
        return np.asarray(u, dtype=float)

    def branch_preimages(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return x[None, :].copy(), np.ones((1, x.size))

    def to_spec(self):
        return {"kind": "basis", "basis": "legendre", "order": 1}

    def __repr__(self):
        return "IdentityUdp()"


class PowerGenerator:
    """Generator cdf Psi(x) = 1 - (1-x)^kappa on [0, 1]."""

    def __init__(self, kappa):
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        self.kappa = float(kappa)

    def __call__(self, x):
        return 1.0 - (1.0 - np.asarray(x, dtype=float)) ** self.kappa

    def inverse(self, y):
        return 1.0 - (1.0 - np.asarray(y, dtype=float)) ** (1.0 / self.kappa)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return self.kappa * (1.0 - x) ** (self.kappa - 1.0)

    def __repr__(self):
        return f"PowerGenerator({self.kappa})"


class _CallableGenerator:
    """Wrap a plain cdf callable; inverse by bisection, derivative by
    finite differences."""

    def __init__(self, psi):
        self.psi = psi
        x = np.linspace(0, 1, 101)
        y = np.asarray(psi(x), dtype=float)
        if abs(y[0]) > 1e-10 or abs(y[-1] - 1.0) > 1e-10 or np.any(np.diff(y) < 0):
            raise ValueError("generator must be a continuous increasing cdf on [0,1]")

    def __call__(self, x):
        return np.asarray(self.psi(np.asarray(x, dtype=float)), dtype=float)

    def inverse(self, y):
        return _branch_inverse(self.psi, 0.0, 1.0, True, np.asarray(y, dtype=float))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        h = 1e-7
        lo, hi = np.clip(x - h, 0, 1), np.clip(x + h, 0, 1)
        return (self(hi) - self(lo)) / (hi - lo)


class VTransformUdp(RegularUdp):
    """Two-branch udp transformation with fulcrum delta and generator Psi.

    T(u) = (1 - u) - (1 - delta) Psi(u / delta)            for u <= delta,
    T(u) = u - delta Psi^{-1}((1 - u) / (1 - delta))       for u >  delta.

    The decreasing branch falls from T(0) = 1 to T(delta) = 0 and the
    increasing branch climbs back to T(1) = 1.
    """

    def __init__(self, delta, generator):
        if not 0.0 < delta < 1.0:
            raise ValueError("fulcrum delta must lie in (0, 1)")
        if isinstance(generator, (int, float)):
            generator = PowerGenerator(generator)
        elif not hasattr(generator, "inverse"):
            generator = _CallableGenerator(generator)
        self.delta = float(delta)
        self.generator = generator
        self.partition = np.array([0.0, self.delta, 1.0])

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        d, psi = self.delta, self.generator
        left = (1.0 - u) - (1.0 - d) * psi(np.clip(u / d, 0, 1))
        right = u - d * psi.inverse(np.clip((1.0 - u) / (1.0 - d), 0, 1))
        return np.clip(np.where(u <= d, left, right), 0.0, 1.0)

    def branch_preimages(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        d = self.delta
        rl = _branch_inverse(self.__call__, 0.0, d, False, x)
        rr = _branch_inverse(self.__call__, d, 1.0, True, x)
        # |T'| on the left branch: 1 + (1-d)/d * Psi'(u/d); weights are the
        # reciprocals, and the right-branch weight is the complement (the
        # reciprocals of a udp's branch slopes sum to one).
        sl = 1.0 + (1.0 - d) / d * self.generator.derivative(np.clip(rl / d, 0, 1))
        wl = 1.0 / sl
        wl = np.clip(wl, 0.0, 1.0)
        roots = np.stack([rl, rr])
        weights = np.stack([wl, 1.0 - wl])
        return roots, weights

    def to_spec(self):
        if isinstance(self.generator, PowerGenerator):
            return {
                "kind": "vtransform",
                "delta": self.delta,
                "kappa": self.generator.kappa,
            }
        raise NotImplementedError("only power-generator v-transforms serialize")

    def __repr__(self):
        return f"VTransformUdp(delta={self.delta}, generator={self.generator!r})"


class CosineUdp(RegularUdp):
    """Piecewise-linear zigzag udp induced by the cosine basis member j.

    T(u) = 1 - arccos((-1)^j cos(j pi u)) / pi; every level is hit on each
    of the j linear pieces with slope magnitude j, so all preimage weights
    equal 1/j.
    """

    def __init__(self, j):
        if j < 1:
            raise ValueError("order must be >= 1")
        self.j = int(j)
        self.partition = np.arange(self.j + 1) / self.j

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        arg = np.clip((-1.0) ** self.j * np.cos(self.j * np.pi * u), -1.0, 1.0)
        return 1.0 - np.arccos(arg) / np.pi

    def branch_preimages(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        j = self.j
        b = np.arange(j)[:, None]
        up = (b + x[None, :]) / j        # pieces where T increases
        down = (b + 1.0 - x[None, :]) / j
        roots = np.where((j + b) % 2 == 1, up, down)
        weights = np.full((j, x.size), 1.0 / j)
        return roots, weights

    def slope_sign(self, u):
        """Sign of T' at u: +1 on increasing pieces, -1 on decreasing."""
        u = np.asarray(u, dtype=float)
        b = np.minimum(np.floor(u * self.j), self.j - 1)
        return np.where((self.j + b) % 2 == 1, 1.0, -1.0)

    def to_spec(self):
        return {"kind": "basis", "basis": "cosine", "order": self.j}

    def __repr__(self):
        return f"CosineUdp({self.j})"


class PushforwardUdp(RegularUdp):
    """T_g = F_g o g for a general piecewise monotone g."""

    def __init__(self, source: PiecewiseMonotone):
        self.source = source
        self.dist = PushforwardDistribution(source)
        # refine the partition with every point where g crosses a branch
        # endpoint value of another branch
        knots = list(source.partition)
        for cv in source.critical_values:
            knots.extend(source.roots(cv))
        knots = np.unique(np.round(np.asarray(knots), 13))
        keep = np.concatenate([[True], np.diff(knots) > 1e-11])
        self.partition = knots[keep]

    def __call__(self, u):
        return self.dist.cdf(self.source(u))

    def branch_preimages(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        x = self._exclude_critical(x)
        y = self.dist.quantile(x)
        roots, valid = self.source.branch_roots(y)
        slope = np.abs(self.source.derivative(roots))
        with np.errstate(divide="ignore"):
            w = np.where(valid, 1.0 / np.maximum(slope, 1e-300), 0.0)
        total = w.sum(axis=0)
        w = w / np.where(total > 0, total, 1.0)
        return roots, w

    def _exclude_critical(self, x):
        cp = self.dist.critical_probs
        interior = cp[(cp > 0) & (cp < 1)]
        if interior.size == 0:
            return x
        d = x[:, None] - interior[None, :]
        hit = np.abs(d) < CRITICAL_TOL
        if np.any(hit):
            warnings.warn(
                "evaluation at a critical probability perturbed inward",
                RuntimeWarning,
                stacklevel=3,
            )
            shift = np.where(d >= 0, 10 * CRITICAL_TOL, -10 * CRITICAL_TOL)
            x = x + (hit * shift).sum(axis=1)
        return x

    def to_spec(self):
        if self.source.meta and self.source.meta[0] in ("legendre", "cosine", "fourier"):
            return {
                "kind": "basis",
                "basis": self.source.meta[0],
                "order": int(self.source.meta[1]),
            }
        raise NotImplementedError("generic pushforward udp is not serializable")

    def __repr__(self):
        return f"PushforwardUdp({self.source!r})"


# ---------------------------------------------------------------------------
# module-level operations


def standardize(g: PiecewiseMonotone) -> PiecewiseMonotone:
    """Rescale g to zero mean and unit variance under the uniform law."""
    return g.standardize()


def pushforward_cdf(psi: PiecewiseMonotone, x):
    """Distribution function of psi(U) at x (0 below range, 1 above)."""
    return PushforwardDistribution(psi).cdf(x)


def pushforward_pdf(psi: PiecewiseMonotone, x):
    """Density of psi(U) at x; +inf at critical values inside the range."""
    return PushforwardDistribution(psi).pdf(x)


def build_udp(g: PiecewiseMonotone) -> RegularUdp:
    """Uniformity-preserving transformation T_g = F_g o g.

    Strictly increasing sources give the identity; cosine basis members
    give the closed-form zigzag; everything else goes through the exact
    pushforward machinery.
    """
    if g.n_branches == 1 and g.directions[0] > 0:
        return IdentityUdp()
    if g.meta and g.meta[0] == "cosine":
        return CosineUdp(g.meta[1])
    if g.meta and g.meta[0] == "u_shape":
        _, delta, p, q = g.meta
        return VTransformUdp(delta, PowerGenerator(q / p))
    return PushforwardUdp(g)


def v_transform(delta, generator) -> RegularUdp:
    """V-transform with fulcrum delta and generator cdf Psi.

    ``generator`` may be a PowerGenerator, a plain exponent kappa for the
    family Psi(x) = 1 - (1-x)^kappa, or any increasing cdf callable.
    """
    return VTransformUdp(delta, generator)


def preimage_roots(T: RegularUdp, x):
    """Roots and selection weights of T(u) = x for scalar x in (0, 1).

    Returns a list of (root, weight) pairs with weights 1/|T'(r_i)| that
    sum to one.
    """
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    roots, weights = T.branch_preimages(np.array([x]))
    out = [
        (float(r), float(w))
        for r, w in zip(roots[:, 0], weights[:, 0])
        if w > 0
    ]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# serialization

_BASIS_UDPS = {}


def transform_from_spec(spec: dict) -> RegularUdp:
    """Build a udp transformation from its JSON-style description.

    Supported kinds: ``basis`` (fields basis, order), ``vtransform``
    (fields delta, kappa), ``piecewise`` (fields partition, values:
    knot values of a piecewise linear g).
    """
    kind = spec.get("kind")
    if kind == "basis":
        name, order = spec["basis"], int(spec["order"])
        key = (name, order)
        if key not in _BASIS_UDPS:
            _BASIS_UDPS[key] = build_udp(piecewise_from_basis(get_basis(name), order))
        return _BASIS_UDPS[key]
    if kind == "vtransform":
        return VTransformUdp(float(spec["delta"]), float(spec.get("kappa", 1.0)))
    if kind == "piecewise":
        part = np.asarray(spec["partition"], dtype=float)
        vals = np.asarray(spec["values"], dtype=float)
        if len(vals) != len(part):
            raise ValueError("values must match partition length")
        g = PiecewiseMonotone(part, lambda u: np.interp(u, part, vals))
        return build_udp(g)
    raise ValueError(f"unknown transform kind {kind!r}")


def transform_to_spec(T: RegularUdp) -> dict:
    """JSON-style description of a udp transformation."""
    return T.to_spec()
