from __future__ import annotations

import numpy as np
import pytest

from halos.numerics import (
    ContinuationError,
    Curve,
    CurveSamplingError,
    Polynomial,
    circle,
    continue_roots,
    curve_distance,
    extract_contour,
    hausdorff_upper,
    solve_roots,
    winding_number,
)


def expand_roots(roots) -> Polynomial:
    # independent oracle: expand prod (z - r_k) by convolution
    coeffs = np.array([1.0 + 0j])
    for r in roots:
        coeffs = np.convolve(coeffs, np.array([-r, 1.0 + 0j]))
    return Polynomial(tuple(coeffs))


def sorted_c(values):
    return sorted(values, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


# ---------------------------------------------------------------------------
# solve_roots
# ---------------------------------------------------------------------------

def test_quadratic_roots():
    roots = solve_roots(Polynomial((-1.0, 0.0, 1.0)), 1e-10)
    assert np.allclose(sorted_c(roots), [-1.0, 1.0], atol=1e-12)


def test_prepole_roots_are_seventh_roots_of_minus_one():
    # z^7 + 1 = 0 (trinomial with w=0, lambda=1 for exponents 3, 4)
    coeffs = [1.0] + [0.0] * 6 + [1.0]
    roots = solve_roots(Polynomial(tuple(coeffs)), 1e-10)
    expected = [np.exp(1j * np.pi * (2 * k + 1) / 7) for k in range(7)]
    assert np.allclose(sorted_c(roots), sorted_c(expected), atol=1e-9)
    assert np.allclose([abs(r) for r in roots], 1.0, atol=1e-12)


def test_synthetic_root_recovery_degree_7():
    rng = np.random.default_rng(42)
    roots = rng.normal(size=7) + 1j * rng.normal(size=7)
    p = expand_roots(roots)
    got = solve_roots(p, 1e-10)
    assert np.allclose(sorted_c(got), sorted_c(roots), atol=1e-9)


@pytest.mark.parametrize("degree", [2, 5, 9, 12])
def test_synthetic_root_recovery_various_degrees(degree):
    rng = np.random.default_rng(100 + degree)
    roots = 2.0 * (rng.normal(size=degree) + 1j * rng.normal(size=degree))
    got = solve_roots(expand_roots(roots), 1e-10)
    assert np.allclose(sorted_c(got), sorted_c(roots), atol=1e-9)


def test_residual_contract():
    rng = np.random.default_rng(7)
    coeffs = rng.normal(size=8) + 1j * rng.normal(size=8)
    p = Polynomial(tuple(coeffs))
    tol = 1e-10
    for r in solve_roots(p, tol):
        assert abs(p(r)) <= tol * p.scale()


def test_vieta_product_for_trinomial():
    lam = 0.3 + 0.1j
    w = 1.2 - 0.7j
    m, d = 7, 4
    coeffs = [lam] + [0.0] * (m - 1) + [1.0]
    coeffs[d] = -w
    roots = solve_roots(Polynomial(tuple(coeffs)), 1e-10)
    prod = np.prod(roots)
    expected = (-1) ** m * lam
    assert abs(prod - expected) <= 1e-8 * abs(expected)


def test_multiplicity_clustering():
    # (z-1)^2 (z+2): double root reported as a repeated centroid
    p = expand_roots([1.0, 1.0, -2.0])
    roots = solve_roots(p, 1e-10)
    roots = sorted_c(roots)
    assert abs(roots[0] + 2.0) < 1e-9
    assert roots[1] == roots[2]
    assert abs(roots[1] - 1.0) < 1e-6


def test_cross_check_against_numpy_roots():
    rng = np.random.default_rng(3)
    for _ in range(20):
        deg = int(rng.integers(2, 9))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        p = Polynomial(tuple(coeffs))
        mine = sorted_c(solve_roots(p, 1e-10))
        ref = sorted_c(np.roots(coeffs[::-1]))
        assert np.allclose(mine, ref, atol=1e-7)


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        solve_roots(Polynomial((1.0,)), 1e-10)


def test_tol_domain():
    with pytest.raises(ValueError):
        solve_roots(Polynomial((-1.0, 0.0, 1.0)), 1e-3)


def test_leading_coefficient_must_be_nonzero():
    with pytest.raises(ValueError):
        Polynomial((1.0, 0.0))


# ---------------------------------------------------------------------------
# continue_roots
# ---------------------------------------------------------------------------

def test_constant_path_identity_permutation():
    res = continue_roots(lambda t: Polynomial((-1.0, 0.0, 1.0)), steps=64)
    assert res.permutation == [0, 1]
    for track in res.tracks:
        pts = track.as_array()
        assert np.allclose(pts, pts[0], atol=1e-9)


def test_square_root_monodromy_two_cycle():
    res = continue_roots(
        lambda t: Polynomial((-2.0 * np.exp(2j * np.pi * t), 0.0, 1.0)), steps=64
    )
    assert res.permutation == [1, 0]
    assert sorted(len(c) for c in res.cycles()) == [2]


def _trinomial_path(n, d, lam, R):
    m = n + d

    def path(t):
        coeffs = [lam] + [0.0] * (m - 1) + [1.0]
        coeffs[d] = -R * np.exp(2j * np.pi * t)
        return Polynomial(tuple(coeffs))

    return path


def test_trinomial_monodromy_cycles_match_modulus_classification():
    n, d, lam = 3, 4, 0.1
    res = continue_roots(_trinomial_path(n, d, lam, 2.1), steps=256)
    lengths = sorted(len(c) for c in res.cycles())
    assert lengths == [3, 4]
    # independent oracle: the critical circle separates the two cycles
    c_mod = (d * abs(lam) / n) ** (1.0 / (n + d))
    start = np.array([t.samples[0] for t in res.tracks])
    inner = np.abs(start) < c_mod
    for cyc in res.cycles():
        flags = inner[cyc]
        assert flags.all() or (~flags).all()
        assert len(cyc) == (d if flags.all() else n)


@pytest.mark.parametrize("n,d,lam", [(6, 4, 0.02), (3, 10, 3e-3), (7, 3, 0.2 + 0.1j)])
def test_trinomial_monodromy_other_pairs(n, d, lam):
    res = continue_roots(_trinomial_path(n, d, lam, 2.05), steps=256)
    assert sorted(len(c) for c in res.cycles()) == sorted((n, d))


def test_track_collision_detected_when_loop_hits_critical_value():
    # lambda on the outer arc of W puts the critical value exactly on |w|=2
    n, d = 3, 4
    m = n + d
    lam = (n / d) * (2 * d / m) ** (m / n)
    with pytest.raises(ContinuationError):
        continue_roots(_trinomial_path(n, d, lam, 2.0), steps=256)


def test_hop_bound_respected():
    res = continue_roots(
        lambda t: Polynomial((-2.0 * np.exp(2j * np.pi * t), 0.0, 1.0)),
        steps=64,
        hop_bound=0.05,
    )
    for track in res.tracks:
        pts = track.as_array()
        assert np.max(np.abs(np.diff(pts))) <= 0.05


def test_steps_minimum():
    with pytest.raises(ValueError):
        continue_roots(lambda t: Polynomial((-1.0, 0.0, 1.0)), steps=32)


# ---------------------------------------------------------------------------
# winding_number
# ---------------------------------------------------------------------------

def test_unit_circle_winding():
    c = circle(1.0, 128)
    assert winding_number(c, 0.0) == 1
    assert winding_number(c, 3.0) == 0


def test_winding_reversal_negates():
    rng = np.random.default_rng(11)
    for _ in range(5):
        k = int(rng.integers(64, 256))
        ang = 2 * np.pi * np.arange(k) / k
        radii = 1.0 + 0.3 * np.sin(int(rng.integers(1, 5)) * ang + rng.random())
        c = Curve(tuple(radii * np.exp(1j * ang)), closed=True)
        w = winding_number(c, 0.0)
        assert winding_number(c.reversed(), 0.0) == -w


def test_winding_refuses_coarse_sampling():
    square = Curve((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j), closed=True)
    with pytest.raises(CurveSamplingError):
        winding_number(square, 0.0)  # consecutive samples subtend pi/2


def test_winding_refuses_point_on_curve():
    c = circle(1.0, 128)
    with pytest.raises(CurveSamplingError):
        winding_number(c, c.samples[3])


def test_winding_requires_closed():
    c = Curve((1.0, 1j, -1.0), closed=False)
    with pytest.raises(ValueError):
        winding_number(c, 0.0)


def test_winding_dense_resampling_agrees():
    for k in (256, 2560):
        ang = 2 * np.pi * np.arange(k) / k
        wobble = (1.0 + 0.2 * np.cos(3 * ang)) * np.exp(1j * ang)
        assert winding_number(Curve(tuple(wobble), closed=True), 0.0) == 1


# ---------------------------------------------------------------------------
# curve_distance / hausdorff_upper
# ---------------------------------------------------------------------------

def test_concentric_circle_distance():
    a = circle(1.0, 1024)
    b = circle(3.0, 1024)
    dist = curve_distance(a, b)
    slack = 0.5 * a.max_gap() + 0.5 * b.max_gap()
    assert abs(dist - 2.0) <= slack + 1e-12
    assert dist <= 2.0  # certified lower bound


def test_identical_curves_distance_zero():
    a = circle(1.5, 512)
    assert curve_distance(a, a) == 0.0


def test_distance_is_lower_bound_of_fine_sampling():
    a = circle(1.0, 256)
    b = Curve(tuple(2.0 * np.exp(1j * (2 * np.pi * np.arange(256) / 256)) + 0.3),
              closed=True)
    coarse = curve_distance(a, b)
    fine = curve_distance(circle(1.0, 2560),
                          Curve(tuple(2.0 * np.exp(1j * (2 * np.pi * np.arange(2560) / 2560)) + 0.3),
                                closed=True))
    assert coarse <= fine + 1e-9


def test_hausdorff_upper_bound_on_circles():
    a = circle(1.0, 1024)
    b = circle(1.1, 1024)
    h = hausdorff_upper(a, b)
    assert 0.1 <= h <= 0.1 + a.max_gap() + b.max_gap() + 1e-12


def test_empty_curve_rejected():
    with pytest.raises(ValueError):
        curve_distance(Curve((), closed=True), circle(1.0, 64))


# ---------------------------------------------------------------------------
# extract_contour
# ---------------------------------------------------------------------------

def test_disk_contour():
    curves = extract_contour(lambda z: np.abs(z) < 1.0, (-2, 2, -2, 2), 256)
    assert len(curves) == 1
    c = curves[0]
    assert c.closed
    mods = np.abs(c.as_array())
    assert np.max(np.abs(mods - 1.0)) <= 2 * (4.0 / 256)


def test_empty_region_contour():
    assert extract_contour(lambda z: np.zeros(z.shape, dtype=bool), (-2, 2, -2, 2), 64) == []


def test_annulus_contour_two_loops():
    curves = extract_contour(
        lambda z: (np.abs(z) > 0.5) & (np.abs(z) < 1.5), (-2, 2, -2, 2), 256
    )
    assert len(curves) == 2
    for c in curves:
        assert c.closed
        assert len(c) >= 16
        # loops stay near one of the two radii
        mods = np.abs(c.as_array())
        mid = np.median(mods)
        assert abs(mid - 0.5) < 0.1 or abs(mid - 1.5) < 0.1


def test_contour_vertices_unique_per_loop():
    curves = extract_contour(lambda z: np.abs(z) < 1.0, (-2, 2, -2, 2), 128)
    pts = curves[0].samples
    assert len(set(pts)) == len(pts)


def test_contour_resolution_minimum():
    with pytest.raises(ValueError):
        extract_contour(lambda z: np.abs(z) < 1.0, (-2, 2, -2, 2), 32)
