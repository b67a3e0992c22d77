"""Language-agnostic numeric kernels.

Complex polynomial root solving (simultaneous Aberth-Ehrlich iteration),
root continuation along coefficient paths with monodromy bookkeeping,
discrete winding numbers, certified curve-to-curve distances, and
marching-squares contour extraction from membership predicates.

Everything here is a pure function of its inputs; nothing is mutated and
no module state exists, so concurrent callers on disjoint inputs are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_TOL = 1e-10
DEFAULT_CURVE_POINTS = 1024
DEFAULT_CONTINUATION_STEPS = 512
DEFAULT_HOP_BOUND = 0.1

_MAX_ABERTH_ITERATIONS = 200
_MIN_LEADING = 1e-300


class NumericsError(Exception):
    """Base class for numeric-kernel failures."""


class RootSolveError(NumericsError):
    """Root iteration failed to converge for a specific polynomial."""


class ContinuationError(NumericsError):
    """Root tracking failed; carries the failing step index."""

    def __init__(self, message: str, step: int = -1):
        super().__init__(message)
        self.step = step


class CurveSamplingError(NumericsError):
    """A curve is sampled too coarsely for the requested operation."""


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with complex coefficients, constant term first."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        if len(coeffs) > 1 and abs(coeffs[-1]) <= _MIN_LEADING:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        acc = np.zeros_like(np.asarray(z, dtype=complex)) + self.coefficients[-1]
        for c in self.coefficients[-2::-1]:
            acc = acc * z + c
        return acc if np.ndim(z) else complex(acc)

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        dc = tuple(k * c for k, c in enumerate(self.coefficients) if k >= 1)
        return Polynomial(dc)

    def scale(self) -> float:
        """1 + largest coefficient magnitude; residual normalizer."""
        return 1.0 + max(abs(c) for c in self.coefficients)


@dataclass(frozen=True)
class Curve:
    """Ordered complex samples of a planar curve.

    For closed curves the final sample is distinct from the first; the
    closing edge is implicit.
    """

    samples: tuple[complex, ...]
    closed: bool = True
    label: str = ""

    def __post_init__(self):
        object.__setattr__(
            self, "samples", tuple(complex(s) for s in self.samples)
        )

    def __len__(self) -> int:
        return len(self.samples)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.samples, dtype=complex)

    def max_gap(self) -> float:
        pts = self.as_array()
        if len(pts) < 2:
            return 0.0
        gaps = np.abs(np.diff(pts))
        if self.closed:
            gaps = np.append(gaps, abs(pts[0] - pts[-1]))
        return float(np.max(gaps))

    def reversed(self) -> "Curve":
        return Curve(self.samples[::-1], self.closed, self.label)

    def subsampled(self, max_points: int) -> "Curve":
        """Every k-th sample so that at most `max_points` remain."""
        if len(self.samples) <= max_points:
            return self
        stride = -(-len(self.samples) // max_points)
        return Curve(self.samples[::stride], self.closed, self.label)


# ---------------------------------------------------------------------------
# Root solving
# ---------------------------------------------------------------------------

def _horner_batch(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    # coeffs (B, k), constant first; z (B, deg)
    acc = np.broadcast_to(coeffs[:, -1:], z.shape).copy()
    for j in range(coeffs.shape[1] - 2, -1, -1):
        acc = acc * z + coeffs[:, j : j + 1]
    return acc


def solve_roots_batch(coeffs: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Solve a batch of same-degree polynomials simultaneously.

    `coeffs` has shape (B, degree+1), constant term first.  Returns an
    array of shape (B, degree) of roots in solver order (no sorting, no
    multiplicity clustering).  Raises RootSolveError on non-convergence.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 2 or coeffs.shape[1] < 2:
        raise ValueError("batch must be 2-D with degree >= 1")
    if not (0.0 < tol <= 1e-6):
        raise ValueError("tol must lie in (0, 1e-6]")
    if np.any(np.abs(coeffs[:, -1]) <= _MIN_LEADING):
        raise ValueError("leading coefficient must be nonzero")

    B, k = coeffs.shape
    deg = k - 1
    monic = coeffs / coeffs[:, -1:]
    dcoeffs = monic[:, 1:] * np.arange(1, k)

    scale = 1.0 + np.max(np.abs(monic), axis=1)  # (B,)
    # Aberth start: circle of radius 1+max|c| with an irrational angular
    # offset so no starting point sits on a symmetry axis of the input.
    angles = 2.0 * np.pi * np.arange(deg) / deg + math.sqrt(2.0)
    z = scale[:, None] * np.exp(1j * angles)[None, :]

    target = tol * scale[:, None] * 0.01
    done = np.zeros((B, deg), dtype=bool)
    for _ in range(_MAX_ABERTH_ITERATIONS):
        pz = _horner_batch(monic, z)
        done |= np.abs(pz) <= target
        if done.all():
            break
        dpz = _horner_batch(dcoeffs, z)
        dpz = np.where(np.abs(dpz) < 1e-300, 1e-300, dpz)
        w = pz / dpz
        diff = z[:, :, None] - z[:, None, :]
        idx = np.arange(deg)
        diff[:, idx, idx] = 1.0
        diff = np.where(np.abs(diff) < 1e-300, 1e-300, diff)
        inv = 1.0 / diff
        inv[:, idx, idx] = 0.0
        s = inv.sum(axis=2)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        corr = np.where(done, 0.0, w / denom)
        z = z - corr

    # Guarded Newton polish: accept a step only when it reduces |p|.
    for _ in range(3):
        pz = _horner_batch(monic, z)
        dpz = _horner_batch(dcoeffs, z)
        dpz = np.where(np.abs(dpz) < 1e-300, 1e-300, dpz)
        z_try = z - pz / dpz
        better = np.abs(_horner_batch(monic, z_try)) < np.abs(pz)
        z = np.where(better & np.isfinite(z_try), z_try, z)

    resid = np.abs(_horner_batch(monic, z))
    if np.any(resid > tol * scale[:, None]) or not np.all(np.isfinite(z)):
        bad = int(np.argmax(np.max(resid / scale[:, None], axis=1)))
        raise RootSolveError(
            f"root iteration did not converge for coefficients "
            f"{list(coeffs[bad])} (worst residual {float(np.max(resid[bad])):.3e})"
        )
    return z


def _cluster_multiplicities(roots: np.ndarray, tol: float) -> list[complex]:
    """Merge root clusters and report centroids with multiplicity.

    Two clusters of sizes k1, k2 merge when their centroids are within
    tol**(1/(k1+k2)); a genuine k-fold root computed in floating point
    lands within that distance.
    """
    clusters: list[list[complex]] = [[complex(r)] for r in roots]
    while True:
        best = None
        for i in range(len(clusters)):
            ci = sum(clusters[i]) / len(clusters[i])
            for j in range(i + 1, len(clusters)):
                cj = sum(clusters[j]) / len(clusters[j])
                dist = abs(ci - cj)
                if dist <= tol ** (1.0 / (len(clusters[i]) + len(clusters[j]))):
                    if best is None or dist < best[0]:
                        best = (dist, i, j)
        if best is None:
            break
        _, i, j = best
        clusters[i] = clusters[i] + clusters[j]
        del clusters[j]
    out: list[complex] = []
    for cl in clusters:
        centroid = sum(cl) / len(cl)
        out.extend([centroid] * len(cl))
    return out


def solve_roots(p: Polynomial, tol: float = DEFAULT_TOL) -> list[complex]:
    """All roots of `p`, with multiplicity, |p(root)| <= tol * p.scale().

    Clustered near-coincident roots are reported as a shared centroid
    repeated by multiplicity.  Output is sorted lexicographically by
    (real, imag) for determinism.
    """
    if p.degree < 1:
        raise ValueError("degree must be >= 1 for root solving")
    raw = solve_roots_batch(np.asarray([p.coefficients]), tol)[0]
    clustered = _cluster_multiplicities(raw, tol)
    return sorted(clustered, key=lambda z: (z.real, z.imag))


# ---------------------------------------------------------------------------
# Root continuation / monodromy
# ---------------------------------------------------------------------------

@dataclass
class ContinuationResult:
    tracks: list[Curve]
    permutation: list[int] | None
    steps_taken: int

    def cycles(self) -> list[list[int]]:
        """Cycle decomposition of the monodromy permutation."""
        if self.permutation is None:
            raise ValueError("path was not a loop; no monodromy permutation")
        seen = [False] * len(self.permutation)
        out: list[list[int]] = []
        for start in range(len(self.permutation)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.permutation[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.permutation[nxt]
            out.append(cyc)
        return out


def _horner_vec(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, coeffs[-1])
    for j in range(len(coeffs) - 2, -1, -1):
        acc *= z
        acc += coeffs[j]
    return acc


def _newton_correct(coeffs: np.ndarray, dcoeffs: np.ndarray, z0: np.ndarray,
                    tol: float, scale: float, max_move: float):
    z = z0.copy()
    thresh = tol * scale
    for _ in range(16):
        pz = _horner_vec(coeffs, z)
        if np.abs(pz).max() <= thresh:
            break
        dpz = _horner_vec(dcoeffs, z)
        if np.abs(dpz).min() < 1e-300:
            return z, False
        dz = pz / dpz
        if not np.isfinite(dz).all() or np.abs(dz).max() > max_move:
            return z, False
        z = z - dz
    pz = np.abs(_horner_vec(coeffs, z))
    return z, bool(pz.max() <= 10.0 * thresh and np.isfinite(z).all())


def _min_pairwise(z: np.ndarray) -> float:
    if len(z) < 2:
        return math.inf
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def _match_step(za: np.ndarray, zb: np.ndarray, hop_bound: float,
                collision_tol: float, step: int) -> np.ndarray | None:
    """Alignment of the root set zb to the ordering of za, or None.

    Returns None when the match is ambiguous (a hop exceeds the bound or
    comes too close to the separation scale), which callers resolve by
    bisecting the step.  A genuine root collision raises immediately.
    """
    sep = _min_pairwise(zb)
    if sep < collision_tol:
        raise ContinuationError(
            f"track collision: two roots within {collision_tol:.2e}; a "
            "critical value lies on the path (perturb the path radius)",
            step=step,
        )
    dist = np.abs(za[:, None] - zb[None, :])
    order = np.argmin(dist, axis=1)
    if len(set(order.tolist())) != len(order):
        return None
    moves = dist[np.arange(len(order)), order]
    if float(moves.max()) > min(hop_bound, 0.45 * sep):
        return None
    return order


def continue_roots(
    coeff_path: Callable[[float], Polynomial],
    steps: int = DEFAULT_CONTINUATION_STEPS,
    tol: float = DEFAULT_TOL,
    hop_bound: float = DEFAULT_HOP_BOUND,
) -> ContinuationResult:
    """Track all roots of a continuously varying polynomial over t in [0,1].

    All `steps + 1` uniform path points are solved in one vectorized
    batch and stitched into continuous tracks by nearest-root matching;
    any interval where the matching is ambiguous (a root moves farther
    than `hop_bound` or by a jump comparable to the root separation) is
    bisected until it resolves.  Two tracks approaching within the
    collision threshold signal a critical value on the path and raise a
    ContinuationError; perturb the path radius to avoid it.

    When the coefficient path is a loop the result carries the monodromy
    permutation: track i ends where track permutation[i] starts.
    """
    if steps < 64:
        raise ValueError("steps must be >= 64")
    p0 = coeff_path(0.0)
    deg = p0.degree
    if deg < 1:
        raise ValueError("degree must be >= 1")

    ts = np.arange(steps + 1) / steps
    rows = []
    for k, t in enumerate(ts):
        p = coeff_path(float(t))
        if p.degree != deg:
            raise ContinuationError(
                f"polynomial degree changed along the path at t={t}", step=k
            )
        rows.append(p.coefficients)
    coeffs = np.asarray(rows)
    base = solve_roots_batch(coeffs, tol)  # (steps+1, deg)

    start = base[0]
    collision_tol = max(1e-8, 1e4 * tol) * (1.0 + float(np.max(np.abs(start))))
    if _min_pairwise(start) < collision_tol:
        raise ContinuationError("root collision at the start of the path", step=0)

    def solve_at(t: float, za: np.ndarray) -> np.ndarray:
        p = coeff_path(t)
        c = np.asarray(p.coefficients) / p.coefficients[-1]
        dc = c[1:] * np.arange(1, len(c))
        scale = 1.0 + float(np.max(np.abs(c)))
        z, ok = _newton_correct(c, dc, za, tol, scale, 8.0 * hop_bound)
        if ok and _min_pairwise(z) >= collision_tol:
            return z
        return solve_roots_batch(np.asarray([p.coefficients]), tol)[0]

    accepted: list[np.ndarray] = [start]
    t_cur = 0.0
    z_cur = start
    max_points = steps * 64
    for k in range(1, steps + 1):
        # (t_lo, z_target_unaligned); intervals pending between t_cur and t_hi
        pending: list[tuple[float, np.ndarray]] = [(float(ts[k]), base[k])]
        depth = 0
        while pending:
            t_hi, z_hi = pending[-1]
            order = _match_step(z_cur, z_hi, hop_bound, collision_tol, k)
            if order is not None:
                z_cur = z_hi[order]
                t_cur = t_hi
                accepted.append(z_cur)
                pending.pop()
                if len(accepted) > max_points:
                    raise ContinuationError(
                        "track refinement produced too many points", step=k
                    )
                continue
            depth += 1
            if depth > 48 or (t_hi - t_cur) < 1.0 / (steps * 2**24):
                raise ContinuationError(
                    f"step refinement underflow near t={t_hi:.9f}", step=k
                )
            t_mid = 0.5 * (t_cur + t_hi)
            pending.append((t_mid, solve_at(t_mid, z_cur)))

    pts = np.asarray(accepted)  # (n_accepted, deg)
    tracks = [
        Curve(tuple(pts[:, j]), closed=False, label=f"root_track_{j}")
        for j in range(deg)
    ]

    permutation: list[int] | None = None
    if np.allclose(coeffs[0], coeffs[-1], rtol=1e-9, atol=1e-12):
        ends = pts[-1]
        match_tol = 0.45 * _min_pairwise(start)
        permutation = []
        for i in range(deg):
            dists = np.abs(start - ends[i])
            j = int(np.argmin(dists))
            if dists[j] > match_tol:
                raise ContinuationError(
                    f"cannot match loop endpoints (track {i} ends "
                    f"{dists[j]:.2e} from its nearest start root)",
                    step=steps,
                )
            permutation.append(j)
        if sorted(permutation) != list(range(deg)):
            raise ContinuationError(
                "endpoint matching is not a bijection", step=steps
            )
    return ContinuationResult(tracks, permutation, len(accepted) - 1)


# ---------------------------------------------------------------------------
# Winding numbers and curve distances
# ---------------------------------------------------------------------------

def winding_number(c: Curve, z0: complex) -> int:
    """Winding number of a closed sampled curve about z0.

    Requires every consecutive pair of samples to subtend less than pi/2
    as seen from z0; coarser curves are refused rather than guessed at.
    """
    if not c.closed:
        raise ValueError("winding number requires a closed curve")
    pts = c.as_array()
    if len(pts) < 3:
        raise CurveSamplingError("need at least 3 samples")
    w = pts - complex(z0)
    if float(np.min(np.abs(w))) <= 1e-12:
        raise CurveSamplingError("z0 lies on the curve (within 1e-12)")
    ratios = np.roll(w, -1) / w
    dphi = np.angle(ratios)
    if float(np.max(np.abs(dphi))) >= np.pi / 2:
        raise CurveSamplingError(
            "consecutive samples subtend >= pi/2 from z0; refine the sampling"
        )
    total = float(np.sum(dphi))
    k = round(total / (2.0 * np.pi))
    if abs(total / (2.0 * np.pi) - k) > 1e-2:
        raise CurveSamplingError("argument increments do not sum to a whole turn")
    return int(k)


def _min_dist_sets(a: np.ndarray, b: np.ndarray) -> float:
    best = math.inf
    chunk = max(1, int(4e6) // max(1, len(b)))
    for i in range(0, len(a), chunk):
        d = np.abs(a[i : i + chunk, None] - b[None, :])
        best = min(best, float(d.min()))
    return best


def curve_distance(a: Curve, b: Curve) -> float:
    """Slack-adjusted minimum distance between two sampled curves.

    Subtracts half of each curve's largest inter-sample gap, so a
    positive return value is a certified lower bound on the true
    distance between the underlying continuous curves.
    """
    pa, pb = a.as_array(), b.as_array()
    if len(pa) == 0 or len(pb) == 0:
        raise ValueError("curves must be nonempty")
    raw = _min_dist_sets(pa, pb)
    slack = 0.5 * a.max_gap() + 0.5 * b.max_gap()
    return max(0.0, raw - slack)


def _directed_hausdorff_upper(a: Curve, b: Curve, sup_points: int) -> float:
    # sup over the polyline of `a` of the distance to the polyline of `b`.
    # The sup side is subsampled (every point of the full polyline lies
    # within stride * gap / 2 of a kept sample, walked along the chain);
    # the min side may be capped freely since dropping candidates only
    # loosens the bound upward.
    pa_full = a.as_array()
    stride = max(1, -(-len(pa_full) // sup_points))
    pa = pa_full[::stride]
    slack = 0.5 * stride * a.max_gap()
    pb = b.subsampled(2048).as_array()
    best = np.full(len(pa), np.inf)
    chunk = max(1, int(4e6) // max(1, len(pb)))
    for i in range(0, len(pa), chunk):
        d = np.abs(pa[i : i + chunk, None] - pb[None, :])
        best[i : i + chunk] = d.min(axis=1)
    return float(best.max()) + slack


def hausdorff_upper(a: Curve, b: Curve, sup_points: int = 512) -> float:
    """Upper bound on the Hausdorff distance between two sampled curves.

    `sup_points` caps the subsampling of the sup side of each direction;
    the subsampling slack (half of stride times gap) is added, so larger
    caps tighten the bound at quadratic cost.
    """
    if len(a.samples) == 0 or len(b.samples) == 0:
        raise ValueError("curves must be nonempty")
    return max(
        _directed_hausdorff_upper(a, b, sup_points),
        _directed_hausdorff_upper(b, a, sup_points),
    )


# ---------------------------------------------------------------------------
# Implicit-region contour extraction (marching squares, midpoint rule)
# ---------------------------------------------------------------------------

# Segments per cell case; corners c0=(0,0), c1=(1,0), c2=(1,1), c3=(0,1),
# edges 0=bottom, 1=right, 2=top, 3=left.  Ambiguous cases 5/10 use the
# fixed "separated corners" pairing, which keeps loops non-crossing.
_MS_TABLE: dict[int, list[tuple[int, int]]] = {
    0: [], 15: [],
    1: [(3, 0)], 14: [(3, 0)],
    2: [(0, 1)], 13: [(0, 1)],
    3: [(3, 1)], 12: [(3, 1)],
    4: [(1, 2)], 11: [(1, 2)],
    6: [(0, 2)], 9: [(0, 2)],
    7: [(3, 2)], 8: [(3, 2)],
    5: [(3, 0), (1, 2)],
    10: [(0, 1), (2, 3)],
}


def _edge_key(i: int, j: int, edge: int) -> tuple[int, int]:
    # Midpoint of a cell edge on the doubled integer lattice.
    if edge == 0:
        return (2 * i + 1, 2 * j)
    if edge == 1:
        return (2 * i + 2, 2 * j + 1)
    if edge == 2:
        return (2 * i + 1, 2 * j + 2)
    return (2 * i, 2 * j + 1)


def extract_contour(
    membership: Callable[[np.ndarray], np.ndarray],
    rect: tuple[float, float, float, float],
    resolution: int,
) -> list[Curve]:
    """Closed boundary polylines of a membership predicate on a rectangle.

    `rect` is (xmin, xmax, ymin, ymax); `resolution` is the number of grid
    cells along each axis.  The predicate is evaluated on grid nodes
    (vectorized over a complex array when possible) and the true/false
    boundary is traced with midpoint marching squares.  The grid is padded
    with one outside ring so every contour closes, possibly just outside
    the rectangle.  An empty region yields an empty list.
    """
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    xmin, xmax, ymin, ymax = map(float, rect)
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("degenerate rectangle")
    hx = (xmax - xmin) / resolution
    hy = (ymax - ymin) / resolution
    xs = xmin + hx * (np.arange(resolution + 3) - 1.0)
    ys = ymin + hy * (np.arange(resolution + 3) - 1.0)
    zz = xs[None, :] + 1j * ys[:, None]  # (ny, nx)

    vals = membership(zz)
    vals = np.asarray(vals)
    if vals.shape != zz.shape:
        vec = np.vectorize(lambda z: bool(membership(z)))
        vals = vec(zz)
    grid = vals.astype(bool)
    grid[0, :] = grid[-1, :] = False
    grid[:, 0] = grid[:, -1] = False

    segments: list[tuple[tuple[int, int], tuple[int, int]]] = []
    inside = grid.astype(np.int8)
    case = (
        inside[:-1, :-1]
        + 2 * inside[:-1, 1:]
        + 4 * inside[1:, 1:]
        + 8 * inside[1:, :-1]
    )  # indexed [j, i]: j = y cell, i = x cell
    mixed = np.argwhere((case != 0) & (case != 15))
    for j, i in mixed:
        for e0, e1 in _MS_TABLE[int(case[j, i])]:
            segments.append((_edge_key(i, j, e0), _edge_key(i, j, e1)))
    if not segments:
        return []

    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a, b in segments:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    def to_complex(key: tuple[int, int]) -> complex:
        gx, gy = key
        return complex(xmin + (gx / 2.0 - 1.0) * hx, ymin + (gy / 2.0 - 1.0) * hy)

    loops: list[Curve] = []
    visited: set[tuple[int, int]] = set()
    for start_key in sorted(adj.keys()):
        if start_key in visited:
            continue
        loop = [start_key]
        visited.add(start_key)
        prev = None
        cur = start_key
        while True:
            nbrs = adj[cur]
            nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
            if nxt == start_key:
                break
            loop.append(nxt)
            visited.add(nxt)
            prev, cur = cur, nxt
        loops.append(
            Curve(tuple(to_complex(k) for k in loop), closed=True, label="contour")
        )
    loops.sort(key=lambda c: (min(s.real for s in c.samples),
                              min(s.imag for s in c.samples)))
    return loops


def circle(radius: float, points: int = DEFAULT_CURVE_POINTS, label: str = "") -> Curve:
    """Origin-centered circle sampled counterclockwise."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    ang = 2.0 * np.pi * np.arange(points) / points
    return Curve(tuple(radius * np.exp(1j * ang)), closed=True, label=label)
