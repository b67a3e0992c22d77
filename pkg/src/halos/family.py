"""The rational family F(z) = z^n + lambda/z^d and its structural data.

Critical points and values, prepoles, the m-fold rotational symmetry
F(nu z) = nu^n F(z) with nu = exp(2 pi i / m), and preimage computation
through the cleared-denominator trinomial z^m - w z^d + lambda.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .numerics import DEFAULT_TOL, Polynomial, solve_roots, solve_roots_batch

_POLE_CUTOFF = 1e-150


class PoleError(ArithmeticError):
    """Evaluation at (or numerically indistinguishable from) the pole z=0."""


def validate_pair(n: int, d: int) -> None:
    """Reject exponent pairs outside the admissible range."""
    if not (isinstance(n, int) and isinstance(d, int)):
        raise ValueError("n and d must be integers")
    if n < 2 or d < 2:
        raise ValueError("n and d must both be >= 2")
    if 1.0 / n + 1.0 / d >= 1.0:
        raise ValueError(f"admissibility requires 1/n + 1/d < 1; got n={n}, d={d}")
    if n == d:
        raise ValueError("the construction requires n != d")


@dataclass(frozen=True)
class MapParams:
    """Parameters (n, d, lambda) of the map z^n + lambda/z^d.

    `psi` is the angular coordinate of lambda.  It defaults to the
    principal argument; parameter-space paths that cross the negative
    real axis (which happens for n = 2, where the parameter rectangle
    spans arguments +-pi) may pass an explicit continuous value instead.
    """

    n: int
    d: int
    lam: complex
    psi: float | None = None

    def __post_init__(self):
        validate_pair(self.n, self.d)
        lam = complex(self.lam)
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        object.__setattr__(self, "lam", lam)
        psi = self.psi
        if psi is None:
            psi = math.atan2(lam.imag, lam.real)
        else:
            psi = float(psi)
            if abs(cmath.exp(1j * psi) - lam / abs(lam)) > 1e-9:
                raise ValueError("psi is not an angular coordinate of lambda")
        object.__setattr__(self, "psi", psi)

    @property
    def m(self) -> int:
        return self.n + self.d

    @property
    def nu(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.m)

    @property
    def g(self) -> int:
        return self.m // math.gcd(self.n, self.d)


@dataclass(frozen=True)
class CriticalData:
    """Free critical points/values and prepoles of one family member."""

    c_lambda: complex
    critical_points: tuple[complex, ...]
    v_lambda: complex
    critical_values: tuple[complex, ...]
    prepoles: tuple[complex, ...]


def eval_map(p: MapParams, z: complex) -> complex:
    if abs(z) < _POLE_CUTOFF:
        raise PoleError(f"z={z!r} is numerically at the pole of the map")
    z = complex(z)
    return z**p.n + p.lam / z**p.d


def eval_derivative(p: MapParams, z: complex) -> complex:
    if abs(z) < _POLE_CUTOFF:
        raise PoleError(f"z={z!r} is numerically at the pole of the map")
    z = complex(z)
    return p.n * z ** (p.n - 1) - p.d * p.lam / z ** (p.d + 1)


def eval_map_grid(p: MapParams, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized map evaluation; returns (values, pole_mask).

    Entries whose |z| falls below the pole cutoff are flagged in the mask
    and carry an unspecified value; callers treat them as mapping into the
    forward images of the trap door (escape).
    """
    z = np.asarray(z, dtype=complex)
    pole = np.abs(z) < _POLE_CUTOFF
    safe = np.where(pole, 1.0, z)
    vals = safe**p.n + p.lam / safe**p.d
    return vals, pole


def critical_data(p: MapParams) -> CriticalData:
    n, d, m, psi = p.n, p.d, p.m, p.psi
    base = (d * abs(p.lam) / n) ** (1.0 / m)
    c_lam = base * cmath.exp(1j * psi / m)
    j = np.arange(m)
    rot = np.exp(2j * np.pi * j / m)
    crit_pts = c_lam * rot

    v_lam = (m / d) * (d * abs(p.lam) / n) ** (n / m) * cmath.exp(1j * n * psi / m)
    gcd = math.gcd(n, d)
    # F(c_j) = v * nu^(n j); as j runs, the exponents n*j form the subgroup
    # generated by gcd(n, d) mod m, so the distinct values are spaced by
    # nu^gcd(n,d) and there are m/gcd(n,d) of them.
    k = np.arange(m // gcd)
    crit_vals = v_lam * np.exp(2j * np.pi * gcd * k / m)

    neg = -p.lam
    # adding +0.0 turns a negative-zero imaginary part into +0.0 so the
    # principal argument of a positive real -lambda is pi, not -pi
    p_lam = complex(neg.real + 0.0, neg.imag + 0.0) ** (1.0 / m)
    prepoles = p_lam * rot
    return CriticalData(
        c_lambda=c_lam,
        critical_points=tuple(complex(z) for z in crit_pts),
        v_lambda=v_lam,
        critical_values=tuple(complex(z) for z in crit_vals),
        prepoles=tuple(complex(z) for z in prepoles),
    )


def check_rotational_symmetry(p: MapParams, z: complex) -> float:
    """Residual |F(nu z) - nu^n F(z)| of the rotational symmetry."""
    fz = eval_map(p, z)
    fnz = eval_map(p, p.nu * z)
    return abs(fnz - p.nu**p.n * fz)


def preimage_polynomial(p: MapParams, w: complex) -> Polynomial:
    """The trinomial z^m - w z^d + lambda whose roots are F^{-1}(w)."""
    coeffs = [0j] * (p.m + 1)
    coeffs[0] = complex(p.lam)
    coeffs[p.d] = -complex(w)
    coeffs[p.m] = 1.0 + 0j
    return Polynomial(tuple(coeffs))


def preimages(p: MapParams, w: complex, tol: float = DEFAULT_TOL) -> list[complex]:
    """All m preimages of w under the map, with multiplicity."""
    return solve_roots(preimage_polynomial(p, w), tol)


def preimages_many(p: MapParams, ws: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Preimages of a batch of targets; shape (len(ws), m).

    Rows whose roots nearly collide (a target close to a critical value)
    are re-reported as cluster centroids with multiplicity, matching the
    scalar path.
    """
    ws = np.asarray(ws, dtype=complex).ravel()
    m = p.m
    coeffs = np.zeros((len(ws), m + 1), dtype=complex)
    coeffs[:, 0] = p.lam
    coeffs[:, p.d] = -ws
    coeffs[:, m] = 1.0
    roots = solve_roots_batch(coeffs, tol)
    diff = np.abs(roots[:, :, None] - roots[:, None, :])
    idx = np.arange(m)
    diff[:, idx, idx] = np.inf
    near = np.min(diff, axis=(1, 2)) <= tol ** 0.5
    for row in np.nonzero(near)[0]:
        from .numerics import _cluster_multiplicities

        roots[row] = np.asarray(_cluster_multiplicities(roots[row], tol))
    return roots
