"""Region construction for the polynomial-like restriction of z^n + lambda/z^d.

Builds the parameter rectangle W, the circles Gamma (|z|=2), mu, and
Gamma_hat (|z|=2+eps), the level curves gamma_n/gamma_d (preimages of
Gamma) and their hatted counterparts at radius 2+eps, selects eps from
the certified curve distances delta1 = d(Gamma, gamma_n) and
delta2 = d(mu, gamma_d), and assembles the corrected membership
predicates V', U_hat (a Pac-Man sector), and U_hat' alongside the legacy
regions used to demonstrate why the uncorrected construction fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .family import MapParams, critical_data, eval_map_grid, preimage_polynomial, validate_pair
from .numerics import (
    DEFAULT_CONTINUATION_STEPS,
    DEFAULT_CURVE_POINTS,
    DEFAULT_TOL,
    ContinuationError,
    Curve,
    CurveSamplingError,
    circle,
    continue_roots,
    curve_distance,
    hausdorff_upper,
    winding_number,
)

# Tracing the level set |F| = R by monodromy fails when a critical value
# lies on the circle |w| = R; stay at least this far away.
_TRACE_GUARD = 1e-4
_MAX_EPS_HALVINGS = 40


class ConstructionError(Exception):
    """A region could not be assembled for the given parameters."""


# ---------------------------------------------------------------------------
# Parameter rectangle W
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamRectangle:
    """Polar rectangle of admissible lambda values."""

    r_inner: float
    r_outer: float
    arg_min: float
    arg_max: float
    n: int
    d: int

    def center(self) -> complex:
        """Geometric-mean radius on the symmetry axis."""
        return complex(math.sqrt(self.r_inner * self.r_outer))

    def contains(self, lam: complex, psi: float | None = None, tol: float = 1e-12) -> bool:
        r = abs(lam)
        if psi is None:
            psi = math.atan2(lam.imag, lam.real)
        return (
            self.r_inner * (1 - tol) <= r <= self.r_outer * (1 + tol)
            and self.arg_min - tol <= psi <= self.arg_max + tol
        )

    def grid(self, size: int, pad: float = 0.5) -> list[MapParams]:
        """size x size interior sample of W (radii log-spaced).

        `pad` in (0, 1] positions the extreme samples `pad` cells away
        from the boundary; pad=0.5 centers them in boundary cells.
        """
        if size < 1:
            raise ValueError("size must be >= 1")
        fracs = (np.arange(size) + pad) / (size + 2 * pad - 1 + (size == 1))
        radii = self.r_inner * (self.r_outer / self.r_inner) ** fracs
        args = self.arg_min + (self.arg_max - self.arg_min) * fracs
        out = []
        for r in radii:
            for a in args:
                out.append(MapParams(self.n, self.d, r * np.exp(1j * a), psi=float(a)))
        return out

    def boundary_path(self, steps: int) -> list["BoundaryPoint"]:
        """Single counterclockwise traversal of the boundary of W.

        Each radial segment receives steps//4 samples; the two arcs split
        the remainder proportionally to arc length.  Radii on the radial
        segments are geometrically spaced (the radius ratio spans orders
        of magnitude).  Points are half-open per segment so the list walks
        the boundary exactly once.
        """
        if steps < 8:
            raise ValueError("steps must be >= 8")
        n_rad = steps // 4
        n_arc = steps - 2 * n_rad
        span = self.arg_max - self.arg_min
        l_out = self.r_outer * span
        l_in = self.r_inner * span
        n_outer = max(1, round(n_arc * l_out / (l_out + l_in)))
        n_inner = max(1, n_arc - n_outer)
        n_outer = n_arc - n_inner

        pts: list[BoundaryPoint] = []

        def add(r: float, psi: float, tag: str):
            t = len(pts) / steps
            pts.append(BoundaryPoint(t=t, lam=r * np.exp(1j * psi), psi=psi, r=r, tag=tag))

        for k in range(n_outer):
            add(self.r_outer, self.arg_min + span * k / n_outer, "outer_arc")
        ratio = self.r_inner / self.r_outer
        for k in range(n_rad):
            add(self.r_outer * ratio ** (k / n_rad), self.arg_max, "radial_pos")
        for k in range(n_inner):
            add(self.r_inner, self.arg_max - span * k / n_inner, "inner_arc")
        for k in range(n_rad):
            add(self.r_inner * (1 / ratio) ** (k / n_rad), self.arg_min, "radial_neg")
        return pts


@dataclass(frozen=True)
class BoundaryPoint:
    t: float
    lam: complex
    psi: float
    r: float
    tag: str


def build_W(n: int, d: int) -> ParamRectangle:
    """The polar rectangle of lambda values used throughout."""
    validate_pair(n, d)
    m = n + d
    r_outer = (n / d) * (2 * d / m) ** (m / n)
    r_inner = (n / d) * (d / (2 * m)) ** ((m * d) / (n * d - m))
    bound = math.pi / (n - 1)
    return ParamRectangle(r_inner, r_outer, -bound, bound, n, d)


# ---------------------------------------------------------------------------
# Pac-Man sectors and angle helpers
# ---------------------------------------------------------------------------

def angle_in_open(a, lo: float, hi: float):
    """Whether angle(s) `a` fall in the open arc from lo to hi (lo < hi).

    Branch-free: `a` is reduced into (lo, lo + 2*pi] first, so callers may
    pass principal arguments regardless of where the arc sits.
    """
    rel = np.mod(np.asarray(a, dtype=float) - lo, 2.0 * np.pi)
    out = (rel > 0.0) & (rel < (hi - lo))
    return out if np.ndim(a) else bool(out)


def angular_slack(a, lo: float, hi: float):
    """Signed distance (radians) from a to the nearer end of the open arc."""
    rel = np.mod(np.asarray(a, dtype=float) - lo, 2.0 * np.pi)
    width = hi - lo
    slack = np.minimum(rel, width - rel)
    return slack if np.ndim(a) else float(slack)


@dataclass(frozen=True)
class PacManRegion:
    """Open sector {|z| < radius, theta2 < Arg z < theta1}."""

    radius: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not (self.theta2 < self.theta1 < self.theta2 + 2.0 * math.pi):
            raise ValueError("need theta2 < theta1 < theta2 + 2*pi")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        ok = (np.abs(z) < self.radius) & angle_in_open(
            np.angle(z), self.theta2, self.theta1
        )
        return ok if z.ndim else bool(ok)

    def margin(self, z):
        """Rough inclusion margin: min(radial slack, |z| * angular slack).

        Positive iff strictly inside; the angular part is scaled by |z| to
        make it commensurate with a distance.
        """
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        ang = angular_slack(np.angle(z), self.theta2, self.theta1)
        inside = angle_in_open(np.angle(z), self.theta2, self.theta1)
        ang = np.where(inside, ang, -ang)
        val = np.minimum(self.radius - r, r * ang)
        return val if z.ndim else float(val)

    def boundary_distance(self, w):
        """Euclidean distance from w to the boundary of the sector."""
        w = np.asarray(w, dtype=complex)
        r = np.abs(w)
        a = np.angle(w)
        # arc part
        in_arc = angle_in_open(a, self.theta2, self.theta1)
        end1 = self.radius * np.exp(1j * self.theta1)
        end2 = self.radius * np.exp(1j * self.theta2)
        d_arc = np.where(
            in_arc, np.abs(r - self.radius),
            np.minimum(np.abs(w - end1), np.abs(w - end2)),
        )
        # segment parts: [0, radius * e^{i theta}]
        d_seg = np.full(w.shape, np.inf)
        for theta in (self.theta1, self.theta2):
            u = np.exp(1j * theta)
            s = np.clip(np.real(w * np.conj(u)), 0.0, self.radius)
            d_seg = np.minimum(d_seg, np.abs(w - s * u))
        out = np.minimum(d_arc, d_seg)
        return out if w.ndim else float(out)


def theta_bounds(p: MapParams) -> tuple[float, float]:
    """Argument bounds (theta1, theta2) of the corrected sector.

    theta1 = min((n psi + d pi)/m, (n psi - d pi)/m + pi) and
    theta2 = max((n psi - d pi)/m, (n psi + d pi)/m - pi).  For n > d the
    first alternative wins in both; for n < d the second does.
    """
    n, d, m, psi = p.n, p.d, p.m, p.psi
    theta1 = min((n * psi + d * math.pi) / m, (n * psi - d * math.pi) / m + math.pi)
    theta2 = max((n * psi - d * math.pi) / m, (n * psi + d * math.pi) / m - math.pi)
    return theta1, theta2


def mu_radius(p: MapParams) -> float:
    return 0.5 * (p.d * abs(p.lam) / p.n) ** (1.0 / p.d)


# ---------------------------------------------------------------------------
# Level-curve tracing
# ---------------------------------------------------------------------------

def trace_preimage_pair(
    p: MapParams,
    R: float,
    steps: int = DEFAULT_CONTINUATION_STEPS,
    tol: float = DEFAULT_TOL,
) -> tuple[Curve, Curve]:
    """The two closed preimage curves of the circle |w| = R.

    Tracks the m roots of z^m - w z^d + lambda around the loop
    w(t) = R e^{2 pi i t}; the monodromy permutation must decompose into
    exactly two cycles, of lengths d (inner curve, moduli below the
    critical circle) and n (outer curve, moduli above it).  Both curves
    wind once around the origin.
    """
    if R < 2.0:
        raise ValueError("R must be >= 2")
    cd = critical_data(p)
    if abs(R - abs(cd.v_lambda)) <= _TRACE_GUARD:
        raise ConstructionError(
            f"R={R} is within {_TRACE_GUARD} of the critical value modulus "
            f"{abs(cd.v_lambda):.6f}; the root tracks would collide"
        )

    def path(t: float):
        return preimage_polynomial(p, R * np.exp(2j * np.pi * t))

    try:
        result = continue_roots(path, steps=steps, tol=tol)
    except ContinuationError as exc:
        raise ConstructionError(f"level-curve tracing failed: {exc}") from exc

    cycles = result.cycles()
    if sorted(len(c) for c in cycles) != sorted((p.n, p.d)):
        raise ConstructionError(
            f"monodromy cycles have lengths {[len(c) for c in cycles]}, "
            f"expected {{{p.n}, {p.d}}}; R may be too close to a critical "
            "value modulus"
        )

    def assemble(cycle: list[int], label: str) -> Curve:
        pts: list[complex] = []
        track_len = len(result.tracks[0])
        for idx in cycle:
            pts.extend(result.tracks[idx].samples[: track_len - 1])
        curve = Curve(tuple(pts), closed=True, label=label)
        # The trap-door side is traced clockwise (F reverses orientation
        # there); normalize both curves to positive orientation.
        w = winding_number(curve, 0.0)
        if w == -1:
            curve = curve.reversed()
        elif w != 1:
            raise ConstructionError(f"curve {label} does not encircle 0 once")
        return curve

    by_len = {len(c): c for c in cycles}
    inner = assemble(by_len[p.d], f"level_{R:g}_inner_d{p.d}")
    outer = assemble(by_len[p.n], f"level_{R:g}_outer_n{p.n}")

    c_mod = abs(cd.c_lambda)
    inner_mods = np.abs(inner.as_array())
    outer_mods = np.abs(outer.as_array())
    if not (inner_mods.max() < c_mod < outer_mods.min()):
        raise ConstructionError(
            "traced curves are not separated by the critical circle "
            f"(inner max {inner_mods.max():.6f}, |c|={c_mod:.6f}, "
            f"outer min {outer_mods.min():.6f})"
        )
    return inner, outer


# ---------------------------------------------------------------------------
# Epsilon selection and the full region system
# ---------------------------------------------------------------------------

@dataclass
class _CurveBundle:
    gamma_d: Curve
    gamma_n: Curve
    gamma_hat_d: Curve
    gamma_hat_n: Curve
    epsilon: float
    delta1: float
    delta2: float
    Gamma: Curve
    mu: Curve
    Gamma_hat: Curve


def _base_level_radius(p: MapParams) -> float:
    # On the outer arc of W the critical value modulus is exactly 2 and
    # the true level-2 preimage degenerates (the two curves touch at a
    # critical point), so those parameters trace a nearby level instead.
    # The offset moves the curves by well under 1e-2, far below every
    # certified distance they feed, and keeps the root tracks separated
    # enough to avoid wholesale step refinement.
    v_mod = abs(critical_data(p).v_lambda)
    if abs(v_mod - 2.0) <= 100.0 * _TRACE_GUARD:
        return v_mod + 100.0 * _TRACE_GUARD
    return 2.0


def _build_curves(
    p: MapParams,
    curve_points: int,
    steps: int,
    tol: float,
) -> _CurveBundle:
    # Families with a short monodromy cycle (n=2 or d=2) produce sparsely
    # sampled level curves; start those denser, and escalate the sampling
    # whenever the certified distance bound would drown in slack.
    if min(p.n, p.d) == 2:
        steps = max(steps, 512)
        curve_points = max(curve_points, 1024)
    last: CurveSamplingError | None = None
    for _ in range(4):
        try:
            return _build_curves_once(p, curve_points, steps, tol)
        except CurveSamplingError as exc:
            last = exc
            curve_points *= 2
            steps *= 2
    raise CurveSamplingError(
        f"sampling escalation exhausted: {last}"
    )


def _build_curves_once(
    p: MapParams,
    curve_points: int,
    steps: int,
    tol: float,
) -> _CurveBundle:
    r0 = _base_level_radius(p)
    gamma_d, gamma_n = trace_preimage_pair(p, r0, steps=steps, tol=tol)
    Gamma = circle(2.0, curve_points, "Gamma")
    mu = circle(mu_radius(p), curve_points, "mu")

    # Distances are computed on subsampled curves; the larger gaps feed
    # the slack terms, so the bounds stay certified, just a bit looser.
    sub = max(256, curve_points // 2)
    delta1 = curve_distance(Gamma.subsampled(sub), gamma_n.subsampled(sub))
    delta2 = curve_distance(mu.subsampled(sub), gamma_d.subsampled(sub))
    if delta1 <= 0.0 or delta2 <= 0.0:
        raise CurveSamplingError(
            f"certified distances collapse (delta1={delta1}, delta2={delta2}); "
            "increase the curve sampling"
        )
    bound = 0.5 * min(delta1, delta2)
    # Each directed Hausdorff bound carries slack of half a (possibly
    # strided) sample gap; reserve a quarter of the bound for it and
    # escalate the sampling when even the full-resolution gap is too wide.
    need = bound / 4.0
    worst_gap = max(gamma_n.max_gap(), gamma_d.max_gap())
    if 0.5 * worst_gap > need:
        raise CurveSamplingError(
            f"curve sampling gap {worst_gap:.3e} exceeds the slack budget "
            f"{need:.3e} of the certified bound; increase the curve sampling"
        )
    sup_pts = max(
        256,
        len(gamma_n.samples) * gamma_n.max_gap() / max(need, 1e-300) // 2 + 1,
        len(gamma_d.samples) * gamma_d.max_gap() / max(need, 1e-300) // 2 + 1,
    )

    eps = min(delta1, delta2) / 4.0
    for _ in range(_MAX_EPS_HALVINGS):
        if eps <= 4.0 * _TRACE_GUARD:
            raise CurveSamplingError(
                f"epsilon fell to {eps:.3e}, inside the tracing guard; "
                "increase the curve sampling"
            )
        gamma_hat_d, gamma_hat_n = trace_preimage_pair(p, 2.0 + eps, steps=steps, tol=tol)
        if (
            hausdorff_upper(gamma_hat_n, gamma_n, int(sup_pts)) < bound
            and hausdorff_upper(gamma_hat_d, gamma_d, int(sup_pts)) < bound
        ):
            break
        eps *= 0.5
    else:
        raise ConstructionError(
            f"epsilon halving cap ({_MAX_EPS_HALVINGS}) exceeded"
        )
    Gamma_hat = circle(2.0 + eps, curve_points, "Gamma_hat")
    return _CurveBundle(
        gamma_d=Curve(gamma_d.samples, True, "gamma_d"),
        gamma_n=Curve(gamma_n.samples, True, "gamma_n"),
        gamma_hat_d=Curve(gamma_hat_d.samples, True, "gamma_hat_d"),
        gamma_hat_n=Curve(gamma_hat_n.samples, True, "gamma_hat_n"),
        epsilon=eps,
        delta1=delta1,
        delta2=delta2,
        Gamma=Gamma,
        mu=mu,
        Gamma_hat=Gamma_hat,
    )


def select_epsilon(
    p: MapParams,
    curve_points: int = DEFAULT_CURVE_POINTS,
    steps: int = DEFAULT_CONTINUATION_STEPS,
    tol: float = DEFAULT_TOL,
) -> tuple[float, float, float]:
    """(epsilon, delta1, delta2) for the hatted construction.

    delta1/delta2 are slack-adjusted lower bounds on d(Gamma, gamma_n)
    and d(mu, gamma_d).  epsilon starts at min(delta1, delta2)/4 and is
    halved until both hatted curves stay within half that minimum of
    their unhatted versions in sampled Hausdorff distance (an upper
    bound, so the acceptance is certified).
    """
    bundle = _build_curves(p, curve_points, steps, tol)
    return bundle.epsilon, bundle.delta1, bundle.delta2


class _RadialTable:
    """Radius-versus-argument interpolation for a star-shaped closed curve."""

    def __init__(self, curve: Curve):
        pts = curve.as_array()
        ang = np.unwrap(np.angle(pts))
        diffs = np.diff(ang)
        sign = 1.0 if ang[-1] > ang[0] else -1.0
        if np.any(sign * diffs < -1e-9):
            raise ConstructionError(
                f"curve {curve.label or '<unnamed>'} is not star-shaped about "
                "the origin at sampling scale"
            )
        base = np.mod(np.angle(pts), 2.0 * np.pi)
        order = np.argsort(base)
        a = base[order]
        r = np.abs(pts)[order]
        keep = np.concatenate(([True], np.diff(a) > 1e-15))
        a, r = a[keep], r[keep]
        self._a = np.concatenate(([a[-1] - 2.0 * np.pi], a, [a[0] + 2.0 * np.pi]))
        self._r = np.concatenate(([r[-1]], r, [r[0]]))

    def radius_at(self, theta):
        t = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
        out = np.interp(t, self._a, self._r)
        return out if np.ndim(theta) else float(out)


@dataclass
class RegionSystem:
    """All regions attached to one parameter value.

    Corrected construction: V' (between the hatted curves, inside the
    sector of width 2 pi / m around arg = psi/m), the Pac-Man U_hat of
    radius 2 + eps, and U_hat' = V' intersected with the F-preimage of
    U_hat (which is the preimage component containing a segment of the
    ray arg z = psi/m, since F maps V' onto a region it covers U_hat
    twice within).  Legacy construction: the region between the unhatted
    curves with the same rays, and the radius-2 Pac-Man with argument
    bounds (n psi +- d pi)/m.
    """

    params: MapParams
    W: ParamRectangle
    Gamma: Curve
    mu: Curve
    Gamma_hat: Curve
    gamma_n: Curve
    gamma_d: Curve
    gamma_hat_n: Curve
    gamma_hat_d: Curve
    epsilon: float
    delta1: float
    delta2: float
    U_hat: PacManRegion
    legacy_pacman: PacManRegion
    ray_lo: float
    ray_hi: float

    def __post_init__(self):
        self._hat_d = _RadialTable(self.gamma_hat_d)
        self._hat_n = _RadialTable(self.gamma_hat_n)
        self._leg_d = _RadialTable(self.gamma_d)
        self._leg_n = _RadialTable(self.gamma_n)
        self._c_mod = abs(critical_data(self.params).c_lambda)

    # -- membership predicates (vectorized; scalar in, bool out) --

    def _between(self, z, lo_table: _RadialTable, hi_table: _RadialTable):
        z = np.asarray(z, dtype=complex)
        a = np.angle(z)
        r = np.abs(z)
        sector = angle_in_open(a, self.ray_lo, self.ray_hi)
        lo = lo_table.radius_at(a)
        hi = hi_table.radius_at(a)
        return sector & (r > lo) & (r < hi)

    def in_V_prime(self, z):
        out = self._between(z, self._hat_d, self._hat_n)
        return out if np.ndim(z) else bool(out)

    def in_legacy_U_prime(self, z):
        out = self._between(z, self._leg_d, self._leg_n)
        return out if np.ndim(z) else bool(out)

    def in_U_hat(self, z):
        return self.U_hat.contains(z)

    def in_U_hat_prime(self, z):
        z = np.asarray(z, dtype=complex)
        ok = self._between(z, self._hat_d, self._hat_n)
        vals, pole = eval_map_grid(self.params, z)
        img = self.U_hat.contains(vals) & ~pole
        out = ok & img
        return out if z.ndim else bool(out)

    def V_prime_boundary(self, points_per_edge: int = 256) -> list[Curve]:
        """Sampled boundary pieces of V': two curve arcs and two rays."""
        pieces = []
        for tab, name in ((self._hat_d, "gamma_hat_d_arc"), (self._hat_n, "gamma_hat_n_arc")):
            angs = np.linspace(self.ray_lo, self.ray_hi, points_per_edge)
            pts = tab.radius_at(angs) * np.exp(1j * angs)
            pieces.append(Curve(tuple(pts), closed=False, label=name))
        for ang, name in ((self.ray_lo, "ray_lo"), (self.ray_hi, "ray_hi")):
            r0 = self._hat_d.radius_at(ang)
            r1 = self._hat_n.radius_at(ang)
            rr = np.linspace(r0, r1, points_per_edge)
            pieces.append(Curve(tuple(rr * np.exp(1j * ang)), closed=False, label=name))
        return pieces

    def hat_radii_at(self, theta) -> tuple[np.ndarray, np.ndarray]:
        return self._hat_d.radius_at(theta), self._hat_n.radius_at(theta)

    def legacy_radii_at(self, theta) -> tuple[np.ndarray, np.ndarray]:
        return self._leg_d.radius_at(theta), self._leg_n.radius_at(theta)

    # -- serialization --

    def to_json_dict(self) -> dict:
        def curve_json(c: Curve):
            return {
                "label": c.label,
                "closed": c.closed,
                "samples": [[s.real, s.imag] for s in c.samples],
            }

        return {
            "params": {
                "n": self.params.n,
                "d": self.params.d,
                "lambda": [self.params.lam.real, self.params.lam.imag],
                "psi": self.params.psi,
            },
            "W": {
                "r_inner": self.W.r_inner,
                "r_outer": self.W.r_outer,
                "arg_min": self.W.arg_min,
                "arg_max": self.W.arg_max,
            },
            "epsilon": self.epsilon,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "U_hat": {
                "radius": self.U_hat.radius,
                "theta1": self.U_hat.theta1,
                "theta2": self.U_hat.theta2,
            },
            "legacy_pacman": {
                "radius": self.legacy_pacman.radius,
                "theta1": self.legacy_pacman.theta1,
                "theta2": self.legacy_pacman.theta2,
            },
            "ray_args": [self.ray_lo, self.ray_hi],
            "curves": {
                name: curve_json(getattr(self, name))
                for name in (
                    "Gamma", "mu", "Gamma_hat",
                    "gamma_n", "gamma_d", "gamma_hat_n", "gamma_hat_d",
                )
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RegionSystem":
        par = data["params"]
        params = MapParams(
            int(par["n"]), int(par["d"]),
            complex(par["lambda"][0], par["lambda"][1]), psi=par["psi"],
        )

        def curve_back(cj) -> Curve:
            return Curve(
                tuple(complex(re, im) for re, im in cj["samples"]),
                closed=bool(cj["closed"]),
                label=str(cj["label"]),
            )

        curves = {k: curve_back(v) for k, v in data["curves"].items()}
        return cls(
            params=params,
            W=build_W(params.n, params.d),
            Gamma=curves["Gamma"],
            mu=curves["mu"],
            Gamma_hat=curves["Gamma_hat"],
            gamma_n=curves["gamma_n"],
            gamma_d=curves["gamma_d"],
            gamma_hat_n=curves["gamma_hat_n"],
            gamma_hat_d=curves["gamma_hat_d"],
            epsilon=float(data["epsilon"]),
            delta1=float(data["delta1"]),
            delta2=float(data["delta2"]),
            U_hat=PacManRegion(**data["U_hat"]),
            legacy_pacman=PacManRegion(**data["legacy_pacman"]),
            ray_lo=float(data["ray_args"][0]),
            ray_hi=float(data["ray_args"][1]),
        )


def build_region_system(
    p: MapParams,
    curve_points: int = DEFAULT_CURVE_POINTS,
    steps: int = DEFAULT_CONTINUATION_STEPS,
    tol: float = DEFAULT_TOL,
    validate_W: bool = True,
) -> RegionSystem:
    """Assemble every region for one parameter value.

    Requires lambda in the closure of W unless `validate_W` is disabled
    (useful only for negative-control experiments; nothing is guaranteed
    outside W).
    """
    W = build_W(p.n, p.d)
    if validate_W and not W.contains(p.lam, p.psi):
        raise ValueError(
            f"lambda={p.lam} (psi={p.psi}) lies outside the closure of W "
            f"(radii [{W.r_inner:.6g}, {W.r_outer:.6g}], "
            f"args [{W.arg_min:.6g}, {W.arg_max:.6g}])"
        )
    bundle = _build_curves(p, curve_points, steps, tol)
    t1, t2 = theta_bounds(p)
    m, psi = p.m, p.psi
    legacy = PacManRegion(
        radius=2.0,
        theta1=(p.n * psi + p.d * math.pi) / m,
        theta2=(p.n * psi - p.d * math.pi) / m,
    )
    return RegionSystem(
        params=p,
        W=W,
        Gamma=bundle.Gamma,
        mu=bundle.mu,
        Gamma_hat=bundle.Gamma_hat,
        gamma_n=bundle.gamma_n,
        gamma_d=bundle.gamma_d,
        gamma_hat_n=bundle.gamma_hat_n,
        gamma_hat_d=bundle.gamma_hat_d,
        epsilon=bundle.epsilon,
        delta1=bundle.delta1,
        delta2=bundle.delta2,
        U_hat=PacManRegion(radius=2.0 + bundle.epsilon, theta1=t1, theta2=t2),
        legacy_pacman=legacy,
        ray_lo=(psi - math.pi) / m,
        ray_hi=(psi + math.pi) / m,
    )
