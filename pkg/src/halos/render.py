"""Escape-time rendering of the parameter and dynamical planes.

Parameter-plane renders iterate the critical value per pixel and expose
the non-escaping mask (the connectedness-locus sectors that carry the
small copies of the Mandelbrot set); dynamical-plane renders color escape
time of the seed point and overlay every curve of the region system.
Rendering is deterministic: a fixed 256-entry palette, pure per-pixel
arithmetic, and no accumulation-order effects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy import ndimage

from .family import MapParams
from .numerics import Curve
from .regions import RegionSystem, build_W

_POLE_CUTOFF = 1e-12

# Overlay stroke colors (RGB).
OVERLAY_COLORS = {
    "Gamma": (255, 255, 255),
    "mu": (255, 160, 0),
    "Gamma_hat": (190, 190, 190),
    "gamma_hat_n": (0, 230, 118),
    "gamma_hat_d": (64, 156, 255),
    "rays": (255, 82, 82),
    "U_hat": (255, 235, 59),
    "U_hat_prime": (255, 0, 255),
    "W_boundary": (255, 255, 255),
    "sectors": (255, 140, 0),
    "gamma_n": (0, 121, 66),
    "gamma_d": (24, 80, 128),
    "legacy_pacman": (160, 120, 20),
}

_DASH_ON = 12
_DASH_OFF = 8


def _build_palette() -> np.ndarray:
    # 256-entry banded palette: phase-shifted cosines over four cycles,
    # darkened at the low end.  Entry k colors pixels escaping at
    # iteration k mod 256.
    t = np.arange(256) / 256.0
    r = 0.5 - 0.5 * np.cos(2.0 * np.pi * (4.0 * t + 0.00))
    g = 0.5 - 0.5 * np.cos(2.0 * np.pi * (4.0 * t + 0.33))
    b = 0.5 - 0.5 * np.cos(2.0 * np.pi * (4.0 * t + 0.67))
    lum = 0.25 + 0.75 * t
    pal = np.stack([r * lum, g * lum, b * lum], axis=1)
    return np.round(255.0 * pal).astype(np.uint8)


PALETTE = _build_palette()
NONESCAPE_COLOR = np.zeros(3, dtype=np.uint8)


@dataclass(frozen=True)
class Viewport:
    """Complex-plane window mapped onto a pixel grid (square pixels)."""

    center: complex
    width: float
    height: float
    pixels_x: int
    pixels_y: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("viewport extent must be positive")
        if self.pixels_x < 1 or self.pixels_y < 1:
            raise ValueError("pixel counts must be positive")
        va = self.width / self.height
        pa = self.pixels_x / self.pixels_y
        if abs(va - pa) > 1e-9 * max(va, pa):
            raise ValueError(
                f"pixel aspect {pa} does not match viewport aspect {va}"
            )

    @property
    def pixel_size(self) -> float:
        return self.width / self.pixels_x

    def grid(self) -> np.ndarray:
        """Pixel-center coordinates, row 0 at the top (largest imag)."""
        xs = self.center.real + (np.arange(self.pixels_x) + 0.5 - self.pixels_x / 2.0) * self.pixel_size
        ys = self.center.imag + (self.pixels_y / 2.0 - np.arange(self.pixels_y) - 0.5) * self.pixel_size
        return xs[None, :] + 1j * ys[:, None]

    def to_pixel(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(row, col) indices of complex points; may fall out of range."""
        z = np.asarray(z, dtype=complex)
        col = np.floor((z.real - self.center.real) / self.pixel_size + self.pixels_x / 2.0)
        row = np.floor(self.pixels_y / 2.0 - (z.imag - self.center.imag) / self.pixel_size)
        return row.astype(int), col.astype(int)


def square_viewport(center: complex, half_width: float, pixels: int) -> Viewport:
    return Viewport(center, 2 * half_width, 2 * half_width, pixels, pixels)


def default_parameter_viewport(n: int, d: int, pixels: int = 512) -> Viewport:
    """Window covering all sectors of W with 20% padding."""
    W = build_W(n, d)
    return square_viewport(0.0, 1.2 * W.r_outer, pixels)


def default_dynamical_viewport(rs: RegionSystem, pixels: int = 512) -> Viewport:
    return square_viewport(0.0, 1.2 * (2.0 + rs.epsilon), pixels)


@dataclass
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row-major

    def __post_init__(self):
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError("pixel buffer shape mismatch")

    def ppm_bytes(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + self.pixels.tobytes()


# ---------------------------------------------------------------------------
# Escape-time iteration
# ---------------------------------------------------------------------------

def _escape_iterate(
    z0: np.ndarray,
    lam: np.ndarray,
    n: int,
    d: int,
    max_iter: int,
    escape_radius: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Iterate z -> z^n + lam/z^d; returns (escape iteration, pole mask).

    Escape is tested before each application of the map, so a seed already
    beyond the radius escapes at iteration 0.  Orbits entering the pole
    cutoff count as escaped at that iteration (the trap door maps into the
    basin of infinity) and are flagged in the pole mask.
    """
    shape = z0.shape
    z = z0.ravel().astype(complex).copy()
    lam_flat = np.broadcast_to(np.asarray(lam, dtype=complex).ravel(), z.shape).copy()
    iters = np.full(z.shape, -1, dtype=np.int32)
    pole = np.zeros(z.shape, dtype=bool)
    active = np.arange(z.size)
    for k in range(max_iter + 1):
        za = z[active]
        hit_pole = np.abs(za) < _POLE_CUTOFF
        escaped = np.abs(za) > escape_radius
        done = hit_pole | escaped
        if done.any():
            idx = active[done]
            iters[idx] = k
            pole[idx] = hit_pole[done]
            active = active[~done]
            za = z[active]
        if k == max_iter or active.size == 0:
            break
        la = lam_flat[active]
        z[active] = za**n + la / za**d
    return iters.reshape(shape), pole.reshape(shape)


def parameter_escape_map(
    n: int,
    d: int,
    vp: Viewport,
    max_iter: int = 1000,
    escape_radius: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Escape iterations of the critical orbit for each pixel's lambda.

    The orbit starts at the critical value v = F(c); -1 marks orbits that
    never leave the escape radius within max_iter.
    """
    lam = vp.grid()
    mod = np.abs(lam)
    psi = np.angle(lam)
    m = n + d
    with np.errstate(divide="ignore", invalid="ignore"):
        v = (m / d) * (d * mod / n) ** (n / m) * np.exp(1j * n * psi / m)
    v = np.where(mod == 0.0, 0.0, v)  # lambda=0 column: v=0 hits the pole at once
    return _escape_iterate(v, lam, n, d, max_iter, escape_radius)


def dynamical_escape_map(
    p: MapParams,
    vp: Viewport,
    max_iter: int = 256,
    escape_radius: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Escape iterations of every pixel seed under one family member."""
    z0 = vp.grid()
    return _escape_iterate(z0, np.asarray([p.lam]), p.n, p.d, max_iter, escape_radius)


def colorize(iters: np.ndarray, palette: np.ndarray = PALETTE) -> np.ndarray:
    img = np.zeros(iters.shape + (3,), dtype=np.uint8)
    escaped = iters >= 0
    img[escaped] = palette[iters[escaped] % len(palette)]
    return img


# ---------------------------------------------------------------------------
# Overlay drawing
# ---------------------------------------------------------------------------

def _densify(samples: np.ndarray, closed: bool, max_seg: float) -> np.ndarray:
    pts = np.asarray(samples, dtype=complex)
    if closed and len(pts) > 1:
        pts = np.append(pts, pts[0])
    if len(pts) < 2:
        return pts
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        seg = abs(b - a)
        k = max(1, int(math.ceil(seg / max_seg)))
        out.append(a + (b - a) * (np.arange(k) / k))
    out.append(pts[-1:])
    return np.concatenate(out)


def draw_samples(
    img: np.ndarray,
    vp: Viewport,
    samples: np.ndarray,
    color: tuple[int, int, int],
    closed: bool = False,
    dashed: bool = False,
) -> None:
    """Stamp a polyline onto the pixel buffer as a 1-pixel stroke."""
    dense = _densify(samples, closed, 0.5 * vp.pixel_size)
    if dashed:
        period = _DASH_ON + _DASH_OFF
        keep = (np.arange(len(dense)) % period) < _DASH_ON
        dense = dense[keep]
    row, col = vp.to_pixel(dense)
    ok = (row >= 0) & (row < vp.pixels_y) & (col >= 0) & (col < vp.pixels_x)
    img[row[ok], col[ok]] = color


def draw_curve(img: np.ndarray, vp: Viewport, curve: Curve,
               color: tuple[int, int, int], dashed: bool = False) -> None:
    draw_samples(img, vp, curve.as_array(), color, closed=curve.closed, dashed=dashed)


# ---------------------------------------------------------------------------
# Full renders
# ---------------------------------------------------------------------------

def render_parameter_plane(
    n: int,
    d: int,
    vp: Viewport,
    max_iter: int = 1000,
    escape_radius: float = 10.0,
) -> RasterImage:
    """Escape-time picture of the parameter plane with W and its sectors.

    Overlays the boundary of W and the n-1 sector edges
    arg(lambda) = (2j +- 1) pi / (n - 1); the non-escaping sets inside W's
    radial range are the small Mandelbrot copies, one per sector.
    """
    if max_iter < 100:
        raise ValueError("max_iter must be >= 100")
    if escape_radius < 2.0:
        raise ValueError("escape_radius must be >= 2")
    iters, _ = parameter_escape_map(n, d, vp, max_iter, escape_radius)
    img = colorize(iters)

    W = build_W(n, d)
    bnd = np.asarray([bp.lam for bp in W.boundary_path(4096)])
    draw_samples(img, vp, bnd, OVERLAY_COLORS["W_boundary"], closed=True)
    r_max = abs(vp.center) + 0.75 * (vp.width + vp.height)
    for j in range(n - 1):
        for side in (-1, 1):
            ang = (2 * j + side) * math.pi / (n - 1)
            ray = np.linspace(0.0, r_max, 2048) * np.exp(1j * ang)
            draw_samples(img, vp, ray, OVERLAY_COLORS["sectors"])
    return RasterImage(vp.pixels_x, vp.pixels_y, img)


def render_dynamical_plane(
    rs: RegionSystem,
    vp: Viewport,
    max_iter: int = 256,
    escape_radius: float = 10.0,
    legacy: bool = False,
) -> RasterImage:
    """Escape-time picture of the dynamical plane with region overlays.

    The corrected overlay set shows Gamma, mu, Gamma_hat (dashed), the
    hatted preimage curves, the sector rays, the corrected Pac-Man, and
    the marching-squares boundary of U_hat'.  With `legacy` the unhatted
    curves and the radius-2 Pac-Man are drawn instead.
    """
    from .certify import extract_U_hat_prime_contour  # local: avoids a cycle

    iters, _ = dynamical_escape_map(rs.params, vp, max_iter, escape_radius)
    img = colorize(iters)

    draw_curve(img, vp, rs.Gamma, OVERLAY_COLORS["Gamma"])
    draw_curve(img, vp, rs.mu, OVERLAY_COLORS["mu"])
    if legacy:
        draw_curve(img, vp, rs.gamma_n, OVERLAY_COLORS["gamma_n"])
        draw_curve(img, vp, rs.gamma_d, OVERLAY_COLORS["gamma_d"])
        pac = rs.legacy_pacman
        color = OVERLAY_COLORS["legacy_pacman"]
    else:
        draw_curve(img, vp, rs.Gamma_hat, OVERLAY_COLORS["Gamma_hat"], dashed=True)
        draw_curve(img, vp, rs.gamma_hat_n, OVERLAY_COLORS["gamma_hat_n"])
        draw_curve(img, vp, rs.gamma_hat_d, OVERLAY_COLORS["gamma_hat_d"])
        pac = rs.U_hat
        color = OVERLAY_COLORS["U_hat"]

    for ang in (rs.ray_lo, rs.ray_hi):
        ray = np.linspace(0.0, 1.2 * (2.0 + rs.epsilon), 1024) * np.exp(1j * ang)
        draw_samples(img, vp, ray, OVERLAY_COLORS["rays"])

    arc_angles = np.linspace(pac.theta2, pac.theta1, 1024)
    draw_samples(img, vp, pac.radius * np.exp(1j * arc_angles), color)
    for ang in (pac.theta1, pac.theta2):
        seg = np.linspace(0.0, pac.radius, 512) * np.exp(1j * ang)
        draw_samples(img, vp, seg, color)

    if not legacy:
        for curve in extract_U_hat_prime_contour(rs):
            draw_curve(img, vp, curve, OVERLAY_COLORS["U_hat_prime"])
    return RasterImage(vp.pixels_x, vp.pixels_y, img)


def hstack_images(left: RasterImage, right: RasterImage) -> RasterImage:
    if left.height != right.height:
        raise ValueError("image heights differ")
    pixels = np.concatenate([left.pixels, right.pixels], axis=1)
    return RasterImage(left.width + right.width, left.height, pixels)


# ---------------------------------------------------------------------------
# Image output
# ---------------------------------------------------------------------------

def write_image(img: RasterImage, path: str, format: str = "png") -> None:
    """Write PPM (bit-exact P6) or PNG."""
    fmt = format.lower()
    try:
        if fmt == "ppm":
            with open(path, "wb") as fh:
                fh.write(img.ppm_bytes())
        elif fmt == "png":
            Image.fromarray(img.pixels, mode="RGB").save(path, format="PNG")
        else:
            raise ValueError(f"unsupported image format: {format}")
    except OSError as exc:
        raise OSError(f"cannot write image to {path}: {exc}") from exc


def read_ppm(path: str) -> RasterImage:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P6\n"):
        raise ValueError("not a P6 PPM file")
    parts = data.split(b"\n", 3)
    w, h = map(int, parts[1].split())
    if parts[2] != b"255":
        raise ValueError("unsupported maxval")
    pixels = np.frombuffer(parts[3][: w * h * 3], dtype=np.uint8).reshape(h, w, 3)
    return RasterImage(w, h, pixels.copy())


# ---------------------------------------------------------------------------
# Analysis of the non-escaping set
# ---------------------------------------------------------------------------

def nonescaping_components(iters: np.ndarray) -> tuple[np.ndarray, int]:
    """4-connected component labeling of the non-escaping mask."""
    mask = iters < 0
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    labels, count = ndimage.label(mask, structure=structure)
    return labels, int(count)


def sector_component_witnesses(
    n: int,
    d: int,
    vp: Viewport,
    iters: np.ndarray,
) -> dict[int, int]:
    """Map sector index -> a non-escaping component meeting W's radii.

    A sector j covers arguments ((2j-1) pi/(n-1), (2j+1) pi/(n-1)).  Only
    components with at least one pixel whose modulus lies inside W's
    radial range count as witnesses.
    """
    W = build_W(n, d)
    labels, count = nonescaping_components(iters)
    lam = vp.grid()
    mod = np.abs(lam)
    arg = np.angle(lam)
    in_annulus = (mod >= W.r_inner) & (mod <= W.r_outer)
    witnesses: dict[int, int] = {}
    for j in range(n - 1):
        center = 2 * j * math.pi / (n - 1)
        rel = np.mod(arg - (center - math.pi / (n - 1)), 2 * math.pi)
        in_sector = rel < 2 * math.pi / (n - 1)
        cand = labels[in_sector & in_annulus]
        cand = cand[cand > 0]
        if cand.size:
            vals, freq = np.unique(cand, return_counts=True)
            witnesses[j] = int(vals[np.argmax(freq)])
    return witnesses
