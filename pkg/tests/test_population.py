import numpy as np
import pytest

from genspear.basis import BasisFunction
from genspear.copulas import (
    ClaytonCopula,
    ComonotoneCopula,
    CountermonotoneCopula,
    FrankCopula,
    GaussianCopula,
    GumbelCopula,
    IndependenceCopula,
    StudentTCopula,
)
from genspear.population import (
    basis_corr_matrix,
    bounds,
    gen_spearman,
    matrix_from_values,
    matrix_to_csv,
    matrix_to_json,
    maximize_gen_spearman,
    support_set,
    symmetry_report,
)
from genspear.transform import u_shape


def L(j):
    return BasisFunction("legendre", j)


def O(j):
    return BasisFunction("cosine", j)


# ---------------------------------------------------------------------------
# gen_spearman


def test_independence_is_zero():
    for g, h in [(L(1), L(1)), (L(2), L(3)), (O(2), O(2))]:
        assert abs(gen_spearman(IndependenceCopula(), g, h)) < 1e-8


def test_comonotone_natural_identity():
    for j in range(1, 5):
        for k in range(1, 5):
            v = gen_spearman(ComonotoneCopula(), L(j), L(k))
            assert abs(v - (1.0 if j == k else 0.0)) < 1e-10


def test_gaussian_spearman_closed_form():
    # rho_S of the Gaussian copula is (6/pi) asin(rho/2)
    for rho in [-0.8, -0.3, 0.5, 0.9]:
        want = 6.0 / np.pi * np.arcsin(rho / 2.0)
        got = gen_spearman(GaussianCopula(rho), L(1), L(1))
        assert abs(got - want) < 1e-8, rho


def test_gaussian_mc_matches_hk():
    cop = GaussianCopula(0.5)
    hk = gen_spearman(cop, L(1), L(1))
    mc = gen_spearman(cop, L(1), L(1), method="monte_carlo", n=10**6, seed=2)
    assert abs(mc - hk) < 3 * mc.stderr
    assert 0 < mc.stderr < 0.005


@pytest.mark.parametrize(
    "cop", [FrankCopula(5.0), ClaytonCopula(2.0), GumbelCopula(2.0)], ids=repr
)
@pytest.mark.parametrize("jk", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_method_agreement(cop, jk):
    j, k = jk
    hk = gen_spearman(cop, L(j), L(k))
    mc = gen_spearman(cop, L(j), L(k), method="monte_carlo", n=10**6, seed=5)
    assert abs(mc - hk) < 4 * mc.stderr


def test_auto_standardize_warns():
    g = u_shape(0.5, 2, 2)
    with pytest.warns(RuntimeWarning):
        v = gen_spearman(IndependenceCopula(), g, g)
    assert abs(v) < 1e-8


def test_hk_requires_cdf():
    with pytest.raises(ValueError):
        gen_spearman(StudentTCopula(0.5, 4.0), L(1), L(1))


def test_bounds_sandwich():
    for cop in [FrankCopula(8.0), ClaytonCopula(3.0), GaussianCopula(-0.7)]:
        for j, k in [(1, 1), (2, 2), (1, 2), (3, 2)]:
            b = bounds(L(j), L(k))
            v = gen_spearman(cop, L(j), L(k))
            assert b.minimum - 1e-6 <= v <= b.maximum + 1e-6


# ---------------------------------------------------------------------------
# matrices


def test_matrix_comonotone_countermonotone_analytic():
    P = basis_corr_matrix(ComonotoneCopula(), "legendre", 6)
    np.testing.assert_allclose(P.values, np.eye(6), atol=1e-8)
    assert P.method == "analytic"
    W = basis_corr_matrix(CountermonotoneCopula(), "legendre", 6)
    np.testing.assert_allclose(
        W.values, np.diag([(-1.0) ** j for j in range(1, 7)]), atol=1e-8
    )


def test_matrix_hk_vs_entrywise():
    cop = FrankCopula(4.0)
    P = basis_corr_matrix(cop, "legendre", 3)
    for j in range(1, 4):
        for k in range(1, 4):
            v = gen_spearman(cop, L(j), L(k))
            assert abs(P.values[j - 1, k - 1] - v) < 1e-7


def test_matrix_mc_has_stderr():
    P = basis_corr_matrix(GaussianCopula(0.5), "legendre", 4,
                          method="monte_carlo", n=200000, seed=3)
    assert P.stderr is not None
    assert np.all(P.stderr > 0)
    truth = basis_corr_matrix(GaussianCopula(0.5), "legendre", 4)
    assert np.all(np.abs(P.values - truth.values) < 5 * P.stderr)


def test_matrix_order_validation():
    with pytest.raises(ValueError):
        basis_corr_matrix(IndependenceCopula(), "legendre", 13)


@pytest.mark.parametrize(
    "cop",
    [
        FrankCopula(5.0),
        GaussianCopula(0.7),
        ClaytonCopula(2.0),
        GumbelCopula(3.0),
        ComonotoneCopula(),
        CountermonotoneCopula(),
    ],
    ids=repr,
)
def test_psd_invariant(cop):
    P = basis_corr_matrix(cop, "legendre", 6)
    assert P.psd_gap() >= -1e-8


# ---------------------------------------------------------------------------
# bounds golden values


def test_exact_bound_fractions():
    b22 = bounds(L(2), L(2))
    assert abs(b22.minimum - (-7.0 / 8.0)) < 1e-6
    assert abs(b22.maximum - 1.0) < 1e-6
    assert b22.attains_plus_one
    assert not b22.attains_minus_one
    b12 = bounds(L(1), L(2))
    assert abs(b12.maximum - np.sqrt(15.0 / 16.0)) < 1e-6
    assert abs(b12.minimum + np.sqrt(15.0 / 16.0)) < 1e-6


def test_cosine_bounds_full_range():
    for j in range(1, 4):
        for k in range(1, 4):
            b = bounds(O(j), O(k))
            assert abs(b.maximum - 1.0) < 1e-8
            assert abs(b.minimum + 1.0) < 1e-8
            assert b.attains_plus_one and b.attains_minus_one


def test_bounds_antisymmetric_when_odd():
    for j, k in [(1, 2), (3, 4), (1, 1), (3, 2)]:
        b = bounds(L(j), L(k))
        assert abs(b.minimum + b.maximum) < 1e-9


# ---------------------------------------------------------------------------
# support sets


def test_support_diagonal_for_identity_pair():
    pts = support_set(L(1), L(1), "max", 50)
    np.testing.assert_allclose(pts[:, 1], pts[:, 0], atol=1e-9)
    pts = support_set(L(1), L(1), "min", 50)
    np.testing.assert_allclose(pts[:, 1], 1.0 - pts[:, 0], atol=1e-9)


def test_support_33_ellipse():
    pts = support_set(L(3), L(3), "max", 150)
    u, v = pts[:, 0], pts[:, 1]
    diag = np.abs(v - u)
    ell = np.abs(20 * v**2 + 20 * u * v + 20 * u**2 - 30 * v - 30 * u + 12)
    assert np.max(np.minimum(diag, ell)) < 1e-8
    # the ellipse branch is actually populated
    assert np.sum(diag > 1e-3) > 50


def test_support_44_circle():
    pts = support_set(L(4), L(4), "max", 150)
    u, v = pts[:, 0], pts[:, 1]
    d1 = np.abs(v - u)
    d2 = np.abs(u + v - 1.0)
    circ = np.abs((u - 0.5) ** 2 + (v - 0.5) ** 2 - 3.0 / 14.0)
    assert np.max(np.minimum(np.minimum(d1, d2), circ)) < 1e-8
    assert np.sum(np.minimum(d1, d2) > 1e-3) > 50


def test_support_residual_invariant():
    from genspear.transform import build_udp
    from genspear.population import _as_score

    g = _as_score(L(2))
    h = _as_score(L(3))
    tg, th = build_udp(g), build_udp(h)
    for extremum in ("max", "min"):
        pts = support_set(L(2), L(3), extremum, 80)
        t1 = np.asarray(tg(pts[:, 0]))
        t2 = np.asarray(th(pts[:, 1]))
        target = t1 if extremum == "max" else 1.0 - t1
        assert np.max(np.abs(t2 - target)) < 1e-9


# ---------------------------------------------------------------------------
# maximize / symmetry


def test_maximize_identity_tie():
    ag, ah, r = maximize_gen_spearman(np.eye(3))
    assert abs(r - 1.0) < 1e-12
    np.testing.assert_allclose(ag, [1, 0, 0], atol=1e-12)
    np.testing.assert_allclose(ah, [1, 0, 0], atol=1e-12)


def test_maximize_diagonal():
    ag, ah, r = maximize_gen_spearman(np.diag([0.2, 0.9]))
    assert abs(r - 0.9) < 1e-12
    np.testing.assert_allclose(ag, [0, 1], atol=1e-12)
    np.testing.assert_allclose(ah, [0, 1], atol=1e-12)


def test_maximize_dominates_random_search():
    rng = np.random.default_rng(8)
    P = rng.uniform(-0.5, 0.5, (4, 4))
    ag, ah, r = maximize_gen_spearman(P)
    assert abs(ag @ P @ ah - r) < 1e-10
    a = rng.standard_normal((10000, 4))
    b = rng.standard_normal((10000, 4))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    vals = np.einsum("ij,jk,ik->i", a, P, b)
    assert r >= vals.max() - 1e-12


def test_maximize_negative_matrix():
    ag, ah, r = maximize_gen_spearman(np.array([[-0.9]]))
    assert abs(r - 0.9) < 1e-12
    assert abs(ag @ np.array([[-0.9]]) @ ah - r) < 1e-12


def test_symmetry_zero_matrix():
    f = symmetry_report(np.zeros((4, 4)))
    assert all(
        [f.exchangeable, f.h_symmetric, f.v_symmetric,
         f.radially_symmetric, f.jointly_symmetric]
    )


def test_symmetry_patterns():
    # chessboard: zero when j+k odd -> radial but not joint
    P = np.zeros((4, 4))
    P[0, 0] = 0.5
    P[1, 1] = 0.3
    P[0, 2] = 0.2
    f = symmetry_report(P)
    assert f.radially_symmetric
    assert not f.jointly_symmetric
    # odd rows and columns zero -> joint
    P2 = np.zeros((4, 4))
    P2[1, 1] = 0.4
    P2[3, 1] = 0.1
    f2 = symmetry_report(P2)
    assert f2.jointly_symmetric and f2.h_symmetric and f2.v_symmetric


def test_clayton_not_radially_symmetric():
    P = basis_corr_matrix(ClaytonCopula(2.0), "legendre", 2,
                          method="monte_carlo", n=10**6, seed=9)
    assert abs(P.values[0, 1]) > 3 * P.stderr[0, 1]


# ---------------------------------------------------------------------------
# emission


def test_csv_and_json():
    P = matrix_from_values([[1.0, 0.2], [0.2, 1.0]], basis="legendre")
    text = matrix_to_csv(P)
    lines = text.strip().split("\n")
    assert len(lines) == 3
    assert lines[1].startswith("1,1,")
    d = matrix_to_json(P)
    assert d["order"] == 2
    assert d["schema_version"] == 1
    np.testing.assert_allclose(d["values"], P.values)
