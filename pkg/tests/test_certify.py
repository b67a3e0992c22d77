from __future__ import annotations

import json
import math

import numpy as np
import pytest

from halos.family import MapParams, critical_data
from halos.regions import ConstructionError, build_W, build_region_system
from halos.certify import (
    CertificationReport,
    CheckResult,
    check_containment,
    check_degree_two,
    check_error_reproduction,
    check_original_ray_error,
    check_unique_critical_point,
    check_winding,
    extract_U_hat_prime_contour,
    run_full_certification,
    theta_margins,
)


def build_fast(p: MapParams):
    return build_region_system(p, curve_points=512, steps=256)


# ---------------------------------------------------------------------------
# containment
# ---------------------------------------------------------------------------

def test_containment_center(center_rs_34):
    res = check_containment(center_rs_34)
    assert res.passed and res.margin > 0


def test_containment_corner_case_n_greater_d():
    # corner of W for (4, 3): the n > d branch of the theta formulas
    W = build_W(4, 3)
    lam = W.center() * np.exp(1j * W.arg_max)
    res = check_containment(build_fast(MapParams(4, 3, lam)))
    assert res.passed
    # binding corner margin is (d - 2) pi / m
    assert res.margin <= (3 - 2) * math.pi / 7 + 1e-9


def test_containment_negative_control_outside_W():
    # far outside W nothing is guaranteed; either construction fails or
    # the result reports a consistent margin sign
    p = MapParams(3, 4, 3.0)
    try:
        rs = build_region_system(p, curve_points=512, steps=256, validate_W=False)
    except (ConstructionError, Exception) as exc:  # noqa: BLE001
        assert str(exc)
        return
    res = check_containment(rs)
    assert res.passed == (res.margin > 0)
    assert math.isfinite(res.margin)


# ---------------------------------------------------------------------------
# degree two
# ---------------------------------------------------------------------------

def test_degree_two_center(center_rs_34):
    res = check_degree_two(center_rs_34, samples=200, seed=7)
    assert res.passed
    assert "bad_counts=0" in res.details


def test_degree_two_counts_critical_value_twice(center_rs_34):
    from halos.certify import _count_preimages

    cd = critical_data(center_rs_34.params)
    counts = _count_preimages(center_rs_34, np.array([cd.v_lambda]), legacy=False)
    assert counts[0] == 2


def test_degree_two_requires_enough_samples(center_rs_34):
    with pytest.raises(ValueError):
        check_degree_two(center_rs_34, samples=50)


def test_contour_maps_to_sector_boundary(center_rs_34):
    from halos.family import eval_map_grid

    curves = extract_U_hat_prime_contour(center_rs_34, 256)
    assert len(curves) == 1  # the preimage sector is simply connected
    rect_half = 1.05 * float(np.abs(center_rs_34.gamma_hat_n.as_array()).max())
    cell = 2 * rect_half / 256
    for c in curves:
        vals, pole = eval_map_grid(center_rs_34.params, c.as_array())
        assert not pole.any()
        dist = center_rs_34.U_hat.boundary_distance(vals)
        dfz = np.abs(
            3 * c.as_array() ** 2 - 4 * center_rs_34.params.lam / c.as_array() ** 5
        )
        assert np.all(dist <= 2 * cell * math.sqrt(2) * np.maximum(1.0, dfz))


def test_legacy_failure_modes_by_exponent_order(pair_grids):
    # n < d: preimage counts fail; n > d: the image overflows the sector
    for (n, d), (_, systems) in pair_grids.items():
        _, rs = systems[len(systems) // 2]
        res = check_error_reproduction(rs, samples=200, seed=7)
        assert res.passed, (n, d, res.details)
        expected_mode = "count" if n < d else "overflow"
        assert f"mode={expected_mode}" in res.details, (n, d, res.details)


def test_explicit_flap_target_has_one_preimage(center_rs_34):
    # a target between the corrected and legacy sector edges has a single
    # preimage in the legacy region
    from halos.certify import _count_preimages

    p = center_rs_34.params
    n, d, m, psi = p.n, p.d, p.m, p.psi
    flap_angle = (n * psi + (n + 0.5) * math.pi) / m  # between n*pi and d*pi edges
    w = 1.0 * np.exp(1j * flap_angle)
    assert center_rs_34.legacy_pacman.contains(w)
    counts = _count_preimages(center_rs_34, np.array([w]), legacy=True)
    assert counts[0] == 1


def test_legacy_counts_all_two_for_n_greater_d():
    # the count-based probe genuinely cannot detect the failure when n > d
    W = build_W(4, 3)
    rs = build_fast(MapParams(4, 3, W.center()))
    from halos.certify import _count_preimages, _sample_sector

    rng = np.random.default_rng(1)
    ws = _sample_sector(rs.legacy_pacman, 300, rng)
    counts = _count_preimages(rs, ws, legacy=True)
    assert np.all(counts == 2)


# ---------------------------------------------------------------------------
# ray-image geometry
# ---------------------------------------------------------------------------

def test_ray_error_center(center_params_34, center_rs_34):
    res = check_original_ray_error(center_params_34, center_rs_34)
    assert res.passed
    # (3,4): image lines cross at pi/7
    assert f"expected={math.pi/7:.9f}" in res.details


def test_ray_images_pass_through_origin(center_params_34):
    from halos.family import eval_map

    cd = critical_data(center_params_34)
    for pre in cd.prepoles:
        assert abs(eval_map(center_params_34, pre)) < 1e-10


@pytest.mark.parametrize("n,d", [(4, 3), (2, 5)])
def test_ray_error_other_pairs(n, d):
    W = build_W(n, d)
    p = MapParams(n, d, W.center() * np.exp(0.2j))
    res = check_original_ray_error(p, build_fast(p))
    assert res.passed, res.details


# ---------------------------------------------------------------------------
# unique critical point
# ---------------------------------------------------------------------------

def test_unique_critical_point_across_grid(pair_grids):
    for (n, d), (_, systems) in pair_grids.items():
        for _, rs in systems[:: max(1, len(systems) // 9)]:
            res = check_unique_critical_point(rs)
            assert res.passed, (n, d, rs.params.lam)


# ---------------------------------------------------------------------------
# winding survey
# ---------------------------------------------------------------------------

def test_winding_survey_34(survey_34_256):
    s = survey_34_256
    assert s.winding == 1
    assert s.in_U_hat_margin.min() > 0
    assert np.nanmax(s.outer_arc_dev) < 1e-10
    assert np.nanmax(s.inner_arc_dev) < 1e-10
    assert np.nanmax(s.radial_arg_dev) < 1e-10
    # legacy radius-2 sector fails to contain v strictly on the outer arc
    assert np.nanmax(s.legacy_outer_margin) < 1e-10
    # exclusion from the open set: strictly outside except exactly on the
    # sector's boundary ray
    on_ray = s.ray_slack <= 1e-10
    assert np.all(~s.in_U_hat_prime | on_ray)


def test_winding_stable_under_doubling(survey_34_256, survey_34_512):
    assert survey_34_256.winding == survey_34_512.winding == 1


@pytest.mark.parametrize("n,d", [(3, 4), (4, 3), (2, 5), (5, 2)])
def test_winding_stable_under_dense_resampling(n, d):
    # formula-only loop: the 10x-resolution oracle gives the same integer
    from halos.certify import critical_value_winding

    assert critical_value_winding(n, d, 256) == 1
    assert critical_value_winding(n, d, 2560) == 1


def test_closure_collapse_localized_to_radial_segments(survey_34_256):
    # the critical value is a limit point of the preimage sector exactly
    # along the radial segments of the boundary of W
    s = survey_34_256
    tags = np.array(s.tags)
    below = s.closure_margins <= s.closure_cell
    assert below.any()
    assert set(tags[below]) <= {"radial_pos", "radial_neg"}
    arcs = (tags == "outer_arc") | (tags == "inner_arc")
    assert np.all(s.closure_margins[arcs] > s.closure_cell[arcs])


def test_winding_pass_conditions(survey_34_256):
    # the same conditions check_winding applies (that path is exercised
    # end to end by the full-certification tests)
    s = survey_34_256
    excluded = ~s.in_U_hat_prime | (s.ray_slack <= 1e-10)
    assert s.winding == 1
    assert excluded.all()
    assert s.in_U_hat_margin.min() > 0


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def test_report_schema_and_round_trip(center_rs_34):
    results = [
        check_containment(center_rs_34),
        check_degree_two(center_rs_34, samples=120, seed=3),
    ]
    report = CertificationReport(
        n=3, d=4, grid=1, epsilon_policy="quarter-min-delta-then-halve",
        lambda_samples=[center_rs_34.params.lam],
        results=results, overall=all(r.passed for r in results),
    )
    blob = report.to_json()
    data = json.loads(blob)
    assert set(data.keys()) == {"n", "d", "grid", "epsilon_policy", "checks", "overall"}
    for c in data["checks"]:
        assert set(c.keys()) == {"name", "lambda", "passed", "margin", "details"}
    back = CertificationReport.from_json_dict(data)
    assert back.to_json_dict() == data


def test_margins_stable_under_double_sampling(center_params_34):
    rs1 = build_region_system(center_params_34, curve_points=512, steps=256)
    rs2 = build_region_system(center_params_34, curve_points=1024, steps=512)
    m1 = check_containment(rs1).margin
    m2 = check_containment(rs2).margin
    assert m1 > 0 and m2 > 0
    assert abs(m1 - m2) < 0.5 * max(m1, m2)


def test_run_full_certification_34():
    report = run_full_certification(3, 4, grid=5, boundary_steps=256, samples=120)
    assert report.overall
    names = {r.name for r in report.results}
    assert names == {
        "containment", "degree_two", "legacy_error_reproduction",
        "unique_critical_point", "ray_image_lines", "winding",
    }
    assert len(report.lambda_samples) == 25
    # determinism of the serialized report
    report2 = run_full_certification(3, 4, grid=5, boundary_steps=256, samples=120)
    assert report.to_json() == report2.to_json()


def test_run_full_certification_52_n_greater_d():
    report = run_full_certification(5, 2, grid=5, boundary_steps=256, samples=120)
    assert report.overall


def test_run_full_rejects_small_grid():
    with pytest.raises(ValueError):
        run_full_certification(3, 4, grid=3)
