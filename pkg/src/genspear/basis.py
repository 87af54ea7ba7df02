"""Orthonormal function bases on the unit interval.

A correlation basis is a sequence B_1, B_2, ... of functions on [0, 1] that,
together with the constant B_0 = 1, form an orthonormal system in
L^2([0, 1]): each B_j has mean zero, variance one, and the B_j are mutually
uncorrelated under the uniform law.  Correlating B_j(U) with B_k(V) for a
pair (U, V) with uniform margins yields a doubly-indexed family of
dependence measures that resolve non-monotonic association; j = k = 1
recovers the classical Spearman coefficient for the monotone bases.

Three bases are provided:

``legendre``
    Shifted, normalized Legendre polynomials sqrt(2j+1) * P_j(2u - 1).
``cosine``
    Alternating-sign cosines (-1)^j sqrt(2) cos(j pi u).
``fourier``
    The full trigonometric system, sqrt(2) cos((j+1) pi u) for odd j and
    sqrt(2) sin(j pi u) for even j.

The Legendre and cosine bases are "natural": B_j has exactly j - 1 turning
points in (0, 1), satisfies the reflection identity
B_j(1 - u) = (-1)^j B_j(u), and increases in a neighbourhood of u = 1.
The Fourier basis is not natural (B_j has j interior turning points) but is
complete and convenient for sine-type asymmetries.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import legendre as npleg

#: Largest basis order accepted anywhere in the package.  Power-basis
#: conversions of shifted Legendre polynomials lose roughly one decimal
#: digit per four degrees; beyond order 20 double precision no longer
#: supports the root-finding guarantees the rest of the package relies on.
MAX_ORDER = 20

_VALID_NAMES = ("legendre", "cosine", "fourier")


class BasisOrderError(ValueError):
    """Raised when a basis order is outside the supported range."""


def _check_order(j, minimum=1):
    if not isinstance(j, (int, np.integer)):
        raise BasisOrderError(f"basis order must be an integer, got {j!r}")
    if j < minimum or j > MAX_ORDER:
        raise BasisOrderError(
            f"basis order must be in [{minimum}, {MAX_ORDER}], got {j}"
        )
    return int(j)


def _check_unit(u):
    u = np.asarray(u, dtype=float)
    if u.size and (np.min(u) < 0.0 or np.max(u) > 1.0):
        raise ValueError("argument must lie in the unit interval [0, 1]")
    return u


class CorrelationBasis:
    """Abstract orthonormal basis on [0, 1].

    Subclasses implement pointwise evaluation, the derivative, the
    antiderivative vanishing at 0, and the interior turning points of each
    member.  All evaluation methods accept scalars or arrays and broadcast.

    Attributes
    ----------
    name : str
        Registry name of the basis.
    natural : bool
        True when B_j has j - 1 turning points, reflects with sign
        (-1)^j about u = 1/2, and is increasing near u = 1.
    """

    name = ""
    natural = False

    def __call__(self, j, u):
        """Evaluate B_j(u)."""
        raise NotImplementedError

    def derivative(self, j, u):
        """Evaluate B_j'(u)."""
        raise NotImplementedError

    def integral(self, j, x):
        """Evaluate the antiderivative I_j(x) = int_0^x B_j(u) du."""
        raise NotImplementedError

    def turning_points(self, j):
        """Interior turning points of B_j, sorted ascending.

        Returns
        -------
        ndarray
            Strictly increasing points in (0, 1) where B_j' changes sign.
        """
        raise NotImplementedError

    def polynomial(self, j):
        """Power-basis ``Polynomial`` equal to B_j, or None if B_j is not
        a polynomial."""
        return None

    def __repr__(self):
        return f"{type(self).__name__}()"


class LegendreBasis(CorrelationBasis):
    """Shifted normalized Legendre polynomials.

    B_j(u) = sqrt(2j+1) * P_j(2u - 1) with P_j the classical Legendre
    polynomial.  Evaluation uses the stable three-term (Bonnet) recurrence
    through ``numpy.polynomial.legendre``; the power-basis form is only
    materialized on request for algebraic root finding.
    """

    name = "legendre"
    natural = True

    @staticmethod
    def _coef(j):
        c = np.zeros(j + 1)
        c[j] = 1.0
        return c

    def __call__(self, j, u):
        j = _check_order(j, minimum=0)
        u = _check_unit(u)
        if j == 0:
            return np.ones_like(u)
        return np.sqrt(2 * j + 1) * npleg.legval(2.0 * u - 1.0, self._coef(j))

    def derivative(self, j, u):
        j = _check_order(j, minimum=0)
        u = _check_unit(u)
        if j == 0:
            return np.zeros_like(u)
        dc = npleg.legder(self._coef(j))
        return 2.0 * np.sqrt(2 * j + 1) * npleg.legval(2.0 * u - 1.0, dc)

    def integral(self, j, x):
        j = _check_order(j, minimum=0)
        x = _check_unit(x)
        if j == 0:
            return x + 0.0
        # int_0^x B_j du expressed through the neighbouring orders; for
        # j = 1 the lower-order term B_0 integrates against an odd weight
        # and drops out at both endpoints symmetric about 1/2.
        upper = self(j + 1, x) / np.sqrt(2 * j + 3)
        if j >= 2:
            lower = self(j - 1, x) / np.sqrt(2 * j - 1)
        else:
            # B_0 = 1 contributes sqrt(3)*(x - ...) handled directly:
            # int_0^x B_1 = sqrt(3) (x^2 - x) = (B_2(x)/sqrt5 - B_0(x)) / (2sqrt3)
            lower = np.ones_like(x)
        return (upper - lower) / (2.0 * np.sqrt(2 * j + 1))

    def turning_points(self, j):
        j = _check_order(j)
        if j == 1:
            return np.array([])
        dc = npleg.legder(self._coef(j))
        x = npleg.legroots(dc)
        x = np.real(x[np.abs(np.imag(x)) < 1e-12]) if np.iscomplexobj(x) else x
        u = np.sort((x + 1.0) / 2.0)
        return u[(u > 0.0) & (u < 1.0)]

    def polynomial(self, j):
        j = _check_order(j, minimum=0)
        p = Polynomial(npleg.leg2poly(self._coef(j)) * np.sqrt(2 * j + 1))
        return p(Polynomial([-1.0, 2.0]))


class CosineBasis(CorrelationBasis):
    """Alternating-sign cosine system B_j(u) = (-1)^j sqrt(2) cos(j pi u)."""

    name = "cosine"
    natural = True

    def __call__(self, j, u):
        j = _check_order(j, minimum=0)
        u = _check_unit(u)
        if j == 0:
            return np.ones_like(u)
        return (-1.0) ** j * np.sqrt(2.0) * np.cos(j * np.pi * u)

    def derivative(self, j, u):
        j = _check_order(j, minimum=0)
        u = _check_unit(u)
        if j == 0:
            return np.zeros_like(u)
        return (-1.0) ** (j + 1) * j * np.pi * np.sqrt(2.0) * np.sin(j * np.pi * u)

    def integral(self, j, x):
        j = _check_order(j, minimum=0)
        x = _check_unit(x)
        if j == 0:
            return x + 0.0
        return (-1.0) ** j * np.sqrt(2.0) * np.sin(j * np.pi * x) / (j * np.pi)

    def turning_points(self, j):
        j = _check_order(j)
        return np.arange(1, j) / j


class FourierBasis(CorrelationBasis):
    """Full trigonometric system.

    B_j(u) = sqrt(2) cos((j+1) pi u) for odd j and sqrt(2) sin(j pi u) for
    even j.  Not natural: B_j has j interior turning points and the even
    members are reflection-symmetric rather than antisymmetric.
    """

    name = "fourier"
    natural = False

    def __call__(self, j, u):
        j = _check_order(j, minimum=0)
        u = _check_unit(u)
        if j == 0:
            return np.ones_like(u)
        if j % 2 == 1:
            return np.sqrt(2.0) * np.cos((j + 1) * np.pi * u)
        return np.sqrt(2.0) * np.sin(j * np.pi * u)

    def derivative(self, j, u):
        j = _check_order(j, minimum=0)
        u = _check_unit(u)
        if j == 0:
            return np.zeros_like(u)
        if j % 2 == 1:
            m = j + 1
            return -np.sqrt(2.0) * m * np.pi * np.sin(m * np.pi * u)
        return np.sqrt(2.0) * j * np.pi * np.cos(j * np.pi * u)

    def integral(self, j, x):
        j = _check_order(j, minimum=0)
        x = _check_unit(x)
        if j == 0:
            return x + 0.0
        if j % 2 == 1:
            m = j + 1
            return np.sqrt(2.0) * np.sin(m * np.pi * x) / (m * np.pi)
        return np.sqrt(2.0) * (1.0 - np.cos(j * np.pi * x)) / (j * np.pi)

    def turning_points(self, j):
        j = _check_order(j)
        if j % 2 == 1:
            return np.arange(1, j + 1) / (j + 1)
        return (np.arange(1, j + 1) - 0.5) / j


_REGISTRY = {
    "legendre": LegendreBasis(),
    "cosine": CosineBasis(),
    "fourier": FourierBasis(),
}


def get_basis(name):
    """Look up a basis by name.

    Parameters
    ----------
    name : str
        One of ``"legendre"``, ``"cosine"``, ``"fourier"``.
    """
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown basis {name!r}; expected one of {_VALID_NAMES}"
        ) from None


def eval_basis(basis, j, u):
    """Evaluate the j-th basis function at u.

    Parameters
    ----------
    basis : CorrelationBasis or str
    j : int
        Order, 0 <= j <= MAX_ORDER.  Order 0 is the constant 1.
    u : float or ndarray
        Points in [0, 1].
    """
    if isinstance(basis, str):
        basis = get_basis(basis)
    return basis(j, u)


def eval_basis_derivative(basis, j, u):
    """Evaluate the derivative of the j-th basis function at u."""
    if isinstance(basis, str):
        basis = get_basis(basis)
    return basis.derivative(j, u)


def integral_basis(basis, j, x):
    """Antiderivative I_j(x) = int_0^x B_j(u) du, with I_j(0) = 0.

    For j >= 1 orthogonality to the constant gives I_j(1) = 0.
    """
    if isinstance(basis, str):
        basis = get_basis(basis)
    return basis.integral(j, x)


def turning_points(basis, j):
    """Interior turning points of the j-th basis function."""
    if isinstance(basis, str):
        basis = get_basis(basis)
    return basis.turning_points(j)


class BasisFunction:
    """A single basis member bound to its order.

    Thin callable wrapper carrying the closed-form derivative and
    antiderivative, used throughout the package wherever a score function
    g on [0, 1] is expected.

    Parameters
    ----------
    basis : CorrelationBasis or str
    j : int
        Order, 1 <= j <= MAX_ORDER.
    """

    def __init__(self, basis, j):
        if isinstance(basis, str):
            basis = get_basis(basis)
        self.basis = basis
        self.j = _check_order(j)

    def __call__(self, u):
        return self.basis(self.j, u)

    def derivative(self, u):
        return self.basis.derivative(self.j, u)

    def integral(self, x):
        return self.basis.integral(self.j, x)

    @property
    def turning_points(self):
        return self.basis.turning_points(self.j)

    def polynomial(self):
        return self.basis.polynomial(self.j)

    @property
    def natural(self):
        return self.basis.natural

    def __repr__(self):
        return f"BasisFunction({self.basis.name!r}, {self.j})"
