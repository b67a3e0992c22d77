"""Desk-scale certification of the corrected region construction.

Each check returns a CheckResult with a quantitative margin (positive iff
the check passed, for margin-style checks).  The full certification runs
every per-parameter check over an interior grid of W, adds the boundary
winding survey, and aggregates everything into a CertificationReport that
serializes to a stable JSON schema.

The demonstrations of the legacy construction's failure come in two
flavors, matching how the failure actually manifests: for n < d some
targets in the legacy Pac-Man have only one preimage in the legacy
sector, while for n > d the image of the legacy sector overflows the
Pac-Man.  Either failure mode certifies that the legacy restriction is
not a proper 2-to-1 cover of the legacy Pac-Man.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .family import (
    MapParams,
    critical_data,
    eval_derivative,
    eval_map_grid,
    preimages_many,
    validate_pair,
)
from .numerics import Curve, extract_contour, winding_number
from .regions import (
    RegionSystem,
    angle_in_open,
    build_W,
    build_region_system,
    mu_radius,
)

DEFAULT_SEED = 7
EPSILON_POLICY = "quarter-min-delta-then-halve"

_ARC_TOL = 1e-10
_RAY_ANGLE_TOL = 1e-8


@dataclass
class CheckResult:
    name: str
    lam: complex
    passed: bool
    margin: float
    details: str = ""


@dataclass
class CertificationReport:
    n: int
    d: int
    grid: int
    epsilon_policy: str
    lambda_samples: list[complex]
    results: list[CheckResult]
    overall: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "grid": self.grid,
            "epsilon_policy": self.epsilon_policy,
            "checks": [
                {
                    "name": r.name,
                    "lambda": [r.lam.real, r.lam.imag],
                    "passed": bool(r.passed),
                    "margin": float(r.margin),
                    "details": r.details,
                }
                for r in self.results
            ],
            "overall": bool(self.overall),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "CertificationReport":
        results = [
            CheckResult(
                name=c["name"],
                lam=complex(c["lambda"][0], c["lambda"][1]),
                passed=bool(c["passed"]),
                margin=float(c["margin"]),
                details=c.get("details", ""),
            )
            for c in data["checks"]
        ]
        return cls(
            n=int(data["n"]),
            d=int(data["d"]),
            grid=int(data["grid"]),
            epsilon_policy=str(data["epsilon_policy"]),
            lambda_samples=[],
            results=results,
            overall=bool(data["overall"]),
        )

    def summary_rows(self) -> list[tuple[str, int, int, float]]:
        """(check name, #passed, #total, min margin) per check name."""
        rows: dict[str, list[CheckResult]] = {}
        for r in self.results:
            rows.setdefault(r.name, []).append(r)
        return [
            (name, sum(r.passed for r in rs), len(rs), min(r.margin for r in rs))
            for name, rs in rows.items()
        ]


# ---------------------------------------------------------------------------
# Containment of V' in the corrected Pac-Man
# ---------------------------------------------------------------------------

def theta_margins(n: int, d: int, psi) -> tuple[np.ndarray, np.ndarray]:
    """Slacks of the two sector inequalities at angular coordinate psi.

    Returns (theta1 - (psi+pi)/m, (psi-pi)/m - theta2); containment of the
    preimage sector needs both positive.
    """
    psi = np.asarray(psi, dtype=float)
    m = n + d
    theta1 = np.minimum((n * psi + d * np.pi) / m, (n * psi - d * np.pi) / m + np.pi)
    theta2 = np.maximum((n * psi - d * np.pi) / m, (n * psi + d * np.pi) / m - np.pi)
    return theta1 - (psi + np.pi) / m, (psi - np.pi) / m - theta2


def theta_margin_sweep(n: int, d: int, points: int = 1001) -> float:
    """Smallest sector-inequality slack over a sweep of W's angular range."""
    validate_pair(n, d)
    psis = np.linspace(-np.pi / (n - 1), np.pi / (n - 1), points)
    m1, m2 = theta_margins(n, d, psis)
    return float(min(m1.min(), m2.min()))


def check_containment(rs: RegionSystem) -> CheckResult:
    """V' lies inside the corrected Pac-Man.

    Verifies the two argument inequalities exactly and checks that every
    sampled boundary point of V' has modulus below 2 + eps; the margin is
    the smallest slack among all of these.
    """
    p = rs.params
    m1, m2 = theta_margins(p.n, p.d, p.psi)
    slacks = [float(m1), float(m2)]
    modulus_slack = math.inf
    for piece in rs.V_prime_boundary():
        mods = np.abs(piece.as_array())
        modulus_slack = min(modulus_slack, float((rs.U_hat.radius - mods).min()))
    slacks.append(modulus_slack)
    margin = min(slacks)
    return CheckResult(
        name="containment",
        lam=p.lam,
        passed=margin > 0,
        margin=margin,
        details=f"theta_slacks=({slacks[0]:.6g},{slacks[1]:.6g}) "
        f"modulus_slack={slacks[2]:.6g}",
    )


# ---------------------------------------------------------------------------
# Degree-two covering
# ---------------------------------------------------------------------------

def _sample_sector(pac, count: int, rng: np.random.Generator) -> np.ndarray:
    # Area-correct polar sampling of an open sector; draws are pinned
    # away from 0 and 1 so no target lands exactly on the boundary or at
    # the origin (which sits on the prepole rays).
    u = rng.uniform(1e-9, 1.0 - 1e-9, count)
    v = rng.uniform(1e-9, 1.0 - 1e-9, count)
    r = pac.radius * np.sqrt(u)
    theta = pac.theta2 + (pac.theta1 - pac.theta2) * v
    return r * np.exp(1j * theta)


def _count_preimages(rs: RegionSystem, ws: np.ndarray, legacy: bool) -> np.ndarray:
    roots = preimages_many(rs.params, ws)
    member = rs.in_legacy_U_prime if legacy else rs.in_U_hat_prime
    flags = member(roots.ravel()).reshape(roots.shape)
    return flags.sum(axis=1)


def _contour_bbox(rs: RegionSystem) -> tuple[float, float, float, float]:
    half = 1.05 * float(np.abs(rs.gamma_hat_n.as_array()).max())
    return (-half, half, -half, half)


def extract_U_hat_prime_contour(rs: RegionSystem, resolution: int = 256) -> list[Curve]:
    """Marching-squares boundary of the corrected preimage sector.

    Degenerate loops below 16 samples (single-cell predicate noise) are
    dropped; certification operates on curves of at least that size.
    """
    curves = extract_contour(rs.in_U_hat_prime, _contour_bbox(rs), resolution)
    return [c for c in curves if len(c) >= 16]


def check_degree_two(
    rs: RegionSystem,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    contour_resolution: int = 256,
) -> CheckResult:
    """Every sampled target in U_hat has exactly two preimages in U_hat'.

    Also certifies relative compactness: each extracted boundary sample of
    U_hat' maps onto the boundary of U_hat within a grid-scale tolerance
    and itself lies strictly inside U_hat.
    """
    if samples < 100:
        raise ValueError("samples must be >= 100")
    p = rs.params
    rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))
    ws = _sample_sector(rs.U_hat, samples, rng)
    counts = _count_preimages(rs, ws, legacy=False)
    bad = int(np.sum(counts != 2))

    rect = _contour_bbox(rs)
    cell = (rect[1] - rect[0]) / contour_resolution
    diag = cell * math.sqrt(2.0)
    compact_margin = math.inf
    n_contour = 0
    for curve in extract_U_hat_prime_contour(rs, contour_resolution):
        z = curve.as_array()
        n_contour += len(z)
        fz, pole = eval_map_grid(p, z)
        dist = rs.U_hat.boundary_distance(fz)
        dfz = np.abs(p.n * z ** (p.n - 1) - p.d * p.lam / z ** (p.d + 1))
        tol_img = 2.0 * diag * np.maximum(1.0, dfz)
        compact_margin = min(compact_margin, float((tol_img - dist).min()))
        inside = rs.U_hat.margin(z)
        compact_margin = min(compact_margin, float(inside.min()))
        if pole.any():
            compact_margin = -math.inf
    if n_contour == 0:
        compact_margin = -math.inf

    count_margin = 1.0 if bad == 0 else -float(bad)
    margin = min(count_margin, compact_margin)
    return CheckResult(
        name="degree_two",
        lam=p.lam,
        passed=margin > 0,
        margin=margin,
        details=f"targets={samples} bad_counts={bad} "
        f"compactness_margin={compact_margin:.6g} contour_samples={n_contour}",
    )


def check_error_reproduction(
    rs: RegionSystem,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
) -> CheckResult:
    """The legacy construction fails to be a proper 2-to-1 cover.

    Two failure modes are probed: targets in the legacy Pac-Man whose
    preimage count in the legacy sector is not 2 (the n < d symptom), and
    sector points whose image lands strictly outside the closed legacy
    Pac-Man (the n > d symptom).  Reproducing either certifies the error.
    """
    p = rs.params
    rng = np.random.default_rng(np.random.SeedSequence([seed, 3]))
    ws = _sample_sector(rs.legacy_pacman, samples, rng)
    counts = _count_preimages(rs, ws, legacy=True)
    bad_counts = int(np.sum(counts != 2))

    # Image overflow: sample the legacy sector between its radial bounds.
    thetas = rs.ray_lo + (rs.ray_hi - rs.ray_lo) * rng.random(samples)
    r_lo, r_hi = rs.legacy_radii_at(thetas)
    radii = r_lo + (r_hi - r_lo) * rng.random(samples)
    z = radii * np.exp(1j * thetas)
    fz, pole = eval_map_grid(p, z)
    fz = fz[~pole]
    inside_closed = (np.abs(fz) <= rs.legacy_pacman.radius + 1e-12) & (
        angle_in_open(np.angle(fz), rs.legacy_pacman.theta2 - 1e-12,
                      rs.legacy_pacman.theta1 + 1e-12)
    )
    overflow = int(np.sum(~inside_closed))
    escape_margin = float(
        np.max(rs.legacy_pacman.boundary_distance(fz[~inside_closed]))
    ) if overflow else 0.0

    reproduced = bad_counts > 0 or overflow > 0
    margin = float(max(bad_counts, escape_margin)) if reproduced else -1.0
    mode = "count" if bad_counts else ("overflow" if overflow else "none")
    return CheckResult(
        name="legacy_error_reproduction",
        lam=p.lam,
        passed=reproduced,
        margin=margin,
        details=f"bad_counts={bad_counts}/{samples} overflow={overflow}/{samples} "
        f"mode={mode}",
    )


# ---------------------------------------------------------------------------
# Ray-image geometry of the legacy sector boundary
# ---------------------------------------------------------------------------

def _angle_mod_pi_distance(a, b) -> np.ndarray:
    d = np.mod(np.asarray(a) - b, np.pi)
    return np.minimum(d, np.pi - d)


def check_original_ray_error(
    p: MapParams,
    rs: RegionSystem | None = None,
    ray_points: int = 512,
) -> CheckResult:
    """Each bounding ray maps 1-to-1 onto a line through the origin.

    Samples both rays arg z = (psi +- pi)/m between the level curves and
    verifies: the image arguments are congruent mod pi to (n psi -+ d pi)/m,
    the two image lines cross at angle 2 d pi / m mod pi (nonzero since
    n != d), the image argument flips by pi exactly at the prepole, and
    |F| is strictly monotone on each side of it.  Together these refute
    the claim that a ray could cover one Pac-Man edge twice.
    """
    if rs is None:
        rs = build_region_system(p)
    n, d, m, psi = p.n, p.d, p.m, p.psi
    expected = {
        "hi": (n * psi - d * math.pi) / m,  # ray (psi+pi)/m
        "lo": (n * psi + d * math.pi) / m,  # ray (psi-pi)/m
    }
    prepole_mod = abs(p.lam) ** (1.0 / m)
    worst_dev = 0.0
    mono_margin = math.inf
    flip_dev = 0.0
    measured_lines = {}
    for key, ang in (("hi", rs.ray_hi), ("lo", rs.ray_lo)):
        r0, r1 = rs.legacy_radii_at(ang)
        rr = np.linspace(float(r0), float(r1), ray_points)
        keep = np.abs(rr - prepole_mod) > 1e-6 * prepole_mod
        rr = rr[keep]
        z = rr * np.exp(1j * ang)
        fz, _ = eval_map_grid(p, z)
        dev = _angle_mod_pi_distance(np.angle(fz), expected[key])
        worst_dev = max(worst_dev, float(dev.max()))
        # line direction mod pi measured from the data (doubled-angle mean)
        measured_lines[key] = 0.5 * float(np.angle(np.mean(np.exp(2j * np.angle(fz)))))

        inner = rr < prepole_mod
        mods = np.abs(fz)
        for side_mods, decreasing in ((mods[inner], True), (mods[~inner], False)):
            if len(side_mods) >= 2:
                diffs = np.diff(side_mods)
                step = float((-diffs).min() if decreasing else diffs.min())
                mono_margin = min(mono_margin, step)
        # argument flips by pi across the prepole
        a_in = np.angle(fz[inner][-1]) if inner.any() else None
        a_out = np.angle(fz[~inner][0]) if (~inner).any() else None
        if a_in is not None and a_out is not None:
            flip = abs(abs(math.remainder(a_in - a_out, 2 * math.pi)) - math.pi)
            flip_dev = max(flip_dev, flip)

    crossing = _angle_mod_pi_distance(measured_lines["hi"], measured_lines["lo"])
    expected_crossing = float(_angle_mod_pi_distance(2 * d * math.pi / m, 0.0))
    crossing_dev = abs(float(crossing) - expected_crossing)

    checks = [
        _RAY_ANGLE_TOL - worst_dev,
        float(crossing),  # the lines genuinely differ
        _RAY_ANGLE_TOL - crossing_dev,
        mono_margin,
        1e-6 - flip_dev,
    ]
    margin = min(checks)
    return CheckResult(
        name="ray_image_lines",
        lam=p.lam,
        passed=margin > 0,
        margin=margin,
        details=f"max_arg_dev={worst_dev:.3e} crossing={float(crossing):.9f} "
        f"expected={expected_crossing:.9f} mono_step={mono_margin:.3e} "
        f"flip_dev={flip_dev:.3e}",
    )


# ---------------------------------------------------------------------------
# Critical points inside the preimage sector
# ---------------------------------------------------------------------------

def check_unique_critical_point(rs: RegionSystem) -> CheckResult:
    """Exactly one free critical point (c_0) lies in U_hat'."""
    cd = critical_data(rs.params)
    flags = rs.in_U_hat_prime(np.asarray(cd.critical_points))
    count = int(flags.sum())
    ok = count == 1 and bool(flags[0])
    deriv = abs(eval_derivative(rs.params, cd.critical_points[0]))
    return CheckResult(
        name="unique_critical_point",
        lam=rs.params.lam,
        passed=ok,
        margin=1.0 if ok else -abs(count - 1) - (0 if flags[0] else 1),
        details=f"members={count} c0_in={bool(flags[0])} |F'(c0)|={deriv:.2e}",
    )


# ---------------------------------------------------------------------------
# Boundary winding survey
# ---------------------------------------------------------------------------

@dataclass
class WindingSurvey:
    """Per-step data from one traversal of the boundary of W.

    `closure_margins` holds the distance from the critical value to the
    extracted boundary contour of U_hat'; `closure_cell` is the contour
    grid cell size.  The survey records these honestly: on the radial
    segments of the boundary the critical value is a genuine limit point
    of U_hat' (its argument equals the sector's extreme ray while its
    modulus crosses the sector's radial range), so closure margins there
    legitimately fall below the cell size even though the critical value
    never belongs to the open set U_hat'.
    """

    n: int
    d: int
    boundary_steps: int
    ts: np.ndarray
    lams: np.ndarray
    tags: list[str]
    v: np.ndarray
    c: np.ndarray
    in_U_hat_margin: np.ndarray
    in_U_hat_prime: np.ndarray
    ray_slack: np.ndarray
    closure_margins: np.ndarray
    closure_cell: np.ndarray
    outer_arc_dev: np.ndarray
    inner_arc_dev: np.ndarray
    radial_arg_dev: np.ndarray
    legacy_outer_margin: np.ndarray
    winding: int

    def critical_value_loop(self) -> Curve:
        return Curve(tuple(self.v - self.c), closed=True, label="v_minus_c")


def critical_value_winding(n: int, d: int, boundary_steps: int = 256) -> int:
    """Winding of v - c about 0 over one boundary traversal, formulas only.

    Cheap companion to winding_survey for resolution studies: no region
    systems are built, just the critical value and critical point at each
    boundary sample.
    """
    W = build_W(n, d)
    vc = []
    for bp in W.boundary_path(boundary_steps):
        cd = critical_data(MapParams(n, d, bp.lam, psi=bp.psi))
        vc.append(cd.v_lambda - cd.c_lambda)
    return winding_number(Curve(tuple(vc), closed=True, label="v_minus_c"), 0.0)


def winding_survey(
    n: int,
    d: int,
    boundary_steps: int = 256,
    curve_points: int = 512,
    steps: int = 256,
    contour_resolution: int = 192,
) -> WindingSurvey:
    """Track the critical value once around the boundary of W.

    At every boundary sample the full region system is rebuilt and the
    critical value's position relative to U_hat and U_hat' is measured;
    the loop winding number of v - c about 0 uses the co-moving critical
    point c as the interior reference.
    """
    if boundary_steps < 256:
        raise ValueError("boundary_steps must be >= 256")
    W = build_W(n, d)
    path = W.boundary_path(boundary_steps)
    size = len(path)
    ts = np.zeros(size)
    lams = np.zeros(size, dtype=complex)
    tags: list[str] = []
    v_arr = np.zeros(size, dtype=complex)
    c_arr = np.zeros(size, dtype=complex)
    uhat_margin = np.zeros(size)
    in_uhatp = np.zeros(size, dtype=bool)
    ray_slack = np.zeros(size)
    closure = np.zeros(size)
    cells = np.zeros(size)
    outer_dev = np.full(size, np.nan)
    inner_dev = np.full(size, np.nan)
    radial_dev = np.full(size, np.nan)
    legacy_outer = np.full(size, np.nan)

    for i, bp in enumerate(path):
        p = MapParams(n, d, bp.lam, psi=bp.psi)
        rs = build_region_system(p, curve_points=curve_points, steps=steps)
        cd = critical_data(p)
        v, c = cd.v_lambda, cd.c_lambda
        ts[i] = bp.t
        lams[i] = bp.lam
        tags.append(bp.tag)
        v_arr[i] = v
        c_arr[i] = c
        uhat_margin[i] = rs.U_hat.margin(v)
        in_uhatp[i] = rs.in_U_hat_prime(v)
        ray_slack[i] = min(
            abs(math.remainder(np.angle(v) - rs.ray_lo, 2.0 * math.pi)),
            abs(math.remainder(np.angle(v) - rs.ray_hi, 2.0 * math.pi)),
        )

        rect = _contour_bbox(rs)
        cell = (rect[1] - rect[0]) / contour_resolution
        cells[i] = cell
        dist = math.inf
        for curve in extract_U_hat_prime_contour(rs, contour_resolution):
            dist = min(dist, float(np.abs(curve.as_array() - v).min()))
        closure[i] = dist

        if bp.tag == "outer_arc":
            outer_dev[i] = abs(abs(v) - 2.0)
            legacy_outer[i] = rs.legacy_pacman.radius - abs(v)
        elif bp.tag == "inner_arc":
            inner_dev[i] = abs(abs(v) - mu_radius(p))
        else:
            ray = rs.ray_hi if bp.tag == "radial_pos" else rs.ray_lo
            radial_dev[i] = abs(math.remainder(np.angle(v) - ray, 2.0 * math.pi))

    loop = Curve(tuple(v_arr - c_arr), closed=True, label="v_minus_c")
    wind = winding_number(loop, 0.0)
    return WindingSurvey(
        n=n, d=d, boundary_steps=boundary_steps,
        ts=ts, lams=lams, tags=tags, v=v_arr, c=c_arr,
        in_U_hat_margin=uhat_margin, in_U_hat_prime=in_uhatp,
        ray_slack=ray_slack,
        closure_margins=closure, closure_cell=cells,
        outer_arc_dev=outer_dev, inner_arc_dev=inner_dev,
        radial_arg_dev=radial_dev, legacy_outer_margin=legacy_outer,
        winding=wind,
    )


def check_winding(n: int, d: int, boundary_steps: int = 256, **kwargs) -> CheckResult:
    """Certify the boundary behavior of the critical value.

    Passes when, at every boundary step, the critical value lies in U_hat
    (positive margin) but not in the open set U_hat'; its modulus matches
    2 on the outer arc and the inner-circle radius on the inner arc to
    1e-10; its argument sits exactly on the extreme sector ray along the
    radial segments; the radius-2 Pac-Man (the uncorrected region) fails
    to contain it strictly on the outer arc; and v - c winds exactly
    once around 0.

    The distance from the critical value to the extracted boundary of
    U_hat' is reported in the details.  It is not part of the pass
    condition: on the radial segments the critical value is a limit point
    of U_hat', so that distance legitimately collapses there while the
    open-set exclusion above still holds.
    """
    s = winding_survey(n, d, boundary_steps, **kwargs)
    # Exclusion from the open set U_hat': either the predicate rejects v,
    # or v sits on the sector's boundary ray to machine precision (on the
    # radial segments its argument equals the extreme ray exactly, so the
    # strict test may round either way there).
    excluded = ~s.in_U_hat_prime | (s.ray_slack <= _ARC_TOL)
    margins = [
        float(s.in_U_hat_margin.min()),
        1.0 if excluded.all() else 0.0,
        _ARC_TOL - float(np.nanmax(s.outer_arc_dev)),
        _ARC_TOL - float(np.nanmax(s.inner_arc_dev)),
        _ARC_TOL - float(np.nanmax(s.radial_arg_dev)),
        _ARC_TOL - float(np.nanmax(s.legacy_outer_margin)),
    ]
    ok = s.winding == 1 and all(m > 0 for m in margins)
    below_cell = int(np.sum(s.closure_margins <= s.closure_cell))
    bad_tags = sorted({t for t, cm, cc in zip(s.tags, s.closure_margins, s.closure_cell)
                       if cm <= cc})
    offender = ""
    if not ok:
        per_step_bad = (
            (s.in_U_hat_margin <= 0)
            | (s.in_U_hat_prime & (s.ray_slack > _ARC_TOL))
            | (np.nan_to_num(s.outer_arc_dev) > _ARC_TOL)
            | (np.nan_to_num(s.inner_arc_dev) > _ARC_TOL)
            | (np.nan_to_num(s.radial_arg_dev) > _ARC_TOL)
            | (np.nan_to_num(s.legacy_outer_margin) > _ARC_TOL)
        )
        if per_step_bad.any():
            k = int(np.argmax(per_step_bad))
            offender = f" first_offending_t={s.ts[k]:.6f}({s.tags[k]})"
        elif s.winding != 1:
            offender = " (loop winding wrong)"
    return CheckResult(
        name="winding",
        lam=complex(s.lams[0]),
        passed=ok,
        margin=min(margins) if s.winding == 1 else -1.0,
        details=(
            f"winding={s.winding} steps={boundary_steps} "
            f"min_U_hat_margin={s.in_U_hat_margin.min():.6g} "
            f"closure_margin_min={s.closure_margins.min():.6g} "
            f"closure_below_cell={below_cell}@{bad_tags}" + offender
        ),
    )


# ---------------------------------------------------------------------------
# Full certification
# ---------------------------------------------------------------------------

def run_full_certification(
    n: int,
    d: int,
    grid: int = 9,
    boundary_steps: int = 256,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    curve_points: int = 512,
    steps: int = 256,
    tol: float = 1e-10,
) -> CertificationReport:
    """Run every check over an interior grid of W plus the boundary survey."""
    validate_pair(n, d)
    if grid < 5:
        raise ValueError("grid must be >= 5")
    W = build_W(n, d)
    params_grid = W.grid(grid)
    results: list[CheckResult] = []
    for idx, p in enumerate(params_grid):
        rs = build_region_system(p, curve_points=curve_points, steps=steps, tol=tol)
        child_seed = int(np.random.SeedSequence([seed, idx]).generate_state(1)[0])
        results.append(check_containment(rs))
        results.append(check_degree_two(rs, samples=samples, seed=child_seed))
        results.append(check_error_reproduction(rs, samples=samples, seed=child_seed))
        results.append(check_unique_critical_point(rs))
        results.append(check_original_ray_error(p, rs))
    results.append(check_winding(n, d, boundary_steps,
                                 curve_points=curve_points, steps=steps))
    overall = all(r.passed for r in results)
    return CertificationReport(
        n=n,
        d=d,
        grid=grid,
        epsilon_policy=EPSILON_POLICY,
        lambda_samples=[p.lam for p in params_grid],
        results=results,
        overall=overall,
    )
