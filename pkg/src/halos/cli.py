"""Command-line interface: certify, render-param, render-dyn, error-demo.

Exit codes: 0 success, 1 a run completed but failed (certification not
overall-pass, expected error pattern absent, or I/O failure), 2 invalid
arguments.  Flag values override config-file entries, which override
defaults.  The output directory defaults to $HALO_OUT_DIR, then ".".
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, fields

from .family import MapParams, validate_pair
from .regions import build_W, build_region_system

_COMPLEX_RE = re.compile(
    r"^\s*([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)?"
    r"(?:\s*([+-]\s*[0-9.]*(?:[eE][+-]?[0-9]+)?)\s*[ij])?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' with optional signs; accepts 'a', 'bi', and 'j' too."""
    s = text.strip().replace(" ", "")
    if s.endswith(("i", "j")) and not s[:-1].strip("+-."):
        # bare "i" / "-i"
        sign = -1.0 if s.startswith("-") else 1.0
        return complex(0.0, sign)
    m = re.match(
        r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
        r"(?:([+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?$",
        s,
    )
    if not m or (m.group(1) is None and m.group(2) is None):
        # pure imaginary without real part, e.g. "0.5i"
        m2 = re.match(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)[ij]$", s)
        if m2:
            return complex(0.0, float(m2.group(1)))
        raise ValueError(f"cannot parse complex number from {text!r}")
    re_part = float(m.group(1)) if m.group(1) else 0.0
    im_text = m.group(2)
    if im_text is None:
        im_part = 0.0
    elif im_text in ("+", "-"):
        im_part = float(im_text + "1")
    else:
        im_part = float(im_text)
    return complex(re_part, im_part)


@dataclass
class Config:
    n: int | None = None
    d: int | None = None
    lam: complex | None = None
    grid: int = 9
    boundary_steps: int = 256
    samples: int = 200
    curve_points: int = 512
    tol: float = 1e-10
    seed: int = 7
    max_iter: int = 1000
    escape_radius: float = 10.0
    pixels: tuple[int, int] = (512, 512)
    viewport: tuple[float, float, float, float] | None = None  # cx, cy, w, h
    out: str | None = None
    format: str = "png"
    out_dir: str | None = None


_CONFIG_PARSERS = {
    "n": int, "d": int, "lam": parse_complex, "grid": int,
    "boundary_steps": int, "samples": int, "curve_points": int,
    "tol": float, "seed": int, "max_iter": int, "escape_radius": float,
    "pixels": lambda s: tuple(int(x) for x in s.lower().split("x")),
    "viewport": lambda s: tuple(float(x) for x in s.split(",")),
    "out": str, "format": str, "out_dir": str,
}


def load_config_file(path: str) -> dict:
    """Flat key=value file; '#' starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key == "lambda":
                key = "lam"
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_PARSERS[key](val.strip())
    return values


def _merge_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    file_values = {}
    if args.config:
        try:
            file_values = load_config_file(args.config)
        except FileNotFoundError as exc:
            raise ValueError(f"config file not found: {args.config}") from exc
    for f in fields(Config):
        if f.name in file_values:
            setattr(cfg, f.name, file_values[f.name])
        cli_val = getattr(args, f.name, None)
        if cli_val is not None:
            setattr(cfg, f.name, cli_val)
    if cfg.out_dir is None:
        cfg.out_dir = os.environ.get("HALO_OUT_DIR", ".")
    return cfg


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--lambda", dest="lam", type=parse_complex, default=None,
                     help="parameter as a+bi")
    sub.add_argument("--grid", type=int, default=None)
    sub.add_argument("--boundary-steps", dest="boundary_steps", type=int, default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--curve-points", dest="curve_points", type=int, default=None)
    sub.add_argument("--tol", type=float, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    sub.add_argument("--escape-radius", dest="escape_radius", type=float, default=None)
    sub.add_argument("--viewport", type=_CONFIG_PARSERS["viewport"], default=None,
                     help="cx,cy,w,h")
    sub.add_argument("--pixels", type=_CONFIG_PARSERS["pixels"], default=None,
                     help="WxH")
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--format", choices=["ppm", "png"], default=None)
    sub.add_argument("--out-dir", dest="out_dir", type=str, default=None)
    sub.add_argument("--config", type=str, default=None,
                     help="flat key=value config file")


def _viewport_from_config(cfg: Config, fallback) -> "Viewport":
    from .render import Viewport

    px, py = cfg.pixels
    if cfg.viewport is not None:
        cx, cy, w, h = cfg.viewport
        return Viewport(complex(cx, cy), w, h, px, py)
    return fallback(px)


def cmd_certify(cfg: Config) -> int:
    from .certify import run_full_certification

    validate_pair(cfg.n, cfg.d)
    report = run_full_certification(
        cfg.n, cfg.d, grid=cfg.grid, boundary_steps=cfg.boundary_steps,
        samples=cfg.samples, seed=cfg.seed, curve_points=cfg.curve_points,
        tol=cfg.tol,
    )
    os.makedirs(cfg.out_dir, exist_ok=True)
    out_path = cfg.out or os.path.join(
        cfg.out_dir, f"certification_n{cfg.n}_d{cfg.d}.json"
    )
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")

    print(f"certification (n={cfg.n}, d={cfg.d}, grid={cfg.grid}) -> {out_path}")
    print("note: sector bounds use arguments (2j+-1)*pi/(n-1), matching the")
    print("      angular extent of the parameter rectangle")
    print(f"{'check':<28}{'passed':>10}{'total':>8}{'min margin':>14}")
    for name, passed, total, margin in report.summary_rows():
        print(f"{name:<28}{passed:>10}{total:>8}{margin:>14.4g}")
    print(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return 0 if report.overall else 1


def cmd_render_param(cfg: Config) -> int:
    from .render import default_parameter_viewport, render_parameter_plane, write_image

    validate_pair(cfg.n, cfg.d)
    vp = _viewport_from_config(
        cfg, lambda px: default_parameter_viewport(cfg.n, cfg.d, px)
    )
    img = render_parameter_plane(cfg.n, cfg.d, vp, cfg.max_iter, cfg.escape_radius)
    out = cfg.out or os.path.join(cfg.out_dir, f"param_n{cfg.n}_d{cfg.d}.{cfg.format}")
    write_image(img, out, cfg.format)
    print(f"wrote {out}")
    return 0


def cmd_render_dyn(cfg: Config) -> int:
    from .render import default_dynamical_viewport, render_dynamical_plane, write_image

    validate_pair(cfg.n, cfg.d)
    if cfg.lam is None:
        raise ValueError("render-dyn requires --lambda")
    p = MapParams(cfg.n, cfg.d, cfg.lam)
    rs = build_region_system(p, curve_points=cfg.curve_points, tol=cfg.tol)
    vp = _viewport_from_config(cfg, lambda px: default_dynamical_viewport(rs, px))
    img = render_dynamical_plane(rs, vp, max_iter=min(cfg.max_iter, 512),
                                 escape_radius=cfg.escape_radius)
    out = cfg.out or os.path.join(
        cfg.out_dir, f"dyn_n{cfg.n}_d{cfg.d}.{cfg.format}"
    )
    write_image(img, out, cfg.format)
    print(f"wrote {out}")
    return 0


def cmd_error_demo(cfg: Config) -> int:
    from .certify import (
        check_degree_two,
        check_error_reproduction,
        check_original_ray_error,
    )
    from .render import (
        default_dynamical_viewport,
        hstack_images,
        render_dynamical_plane,
        write_image,
    )

    validate_pair(cfg.n, cfg.d)
    lam = cfg.lam if cfg.lam is not None else build_W(cfg.n, cfg.d).center()
    p = MapParams(cfg.n, cfg.d, lam)
    rs = build_region_system(p, curve_points=cfg.curve_points, tol=cfg.tol)

    ray = check_original_ray_error(p, rs)
    legacy = check_error_reproduction(rs, samples=cfg.samples, seed=cfg.seed)
    corrected = check_degree_two(rs, samples=cfg.samples, seed=cfg.seed)
    print(f"ray-image geometry:      {'ok' if ray.passed else 'FAIL'} ({ray.details})")
    print(f"legacy failure present:  {'yes' if legacy.passed else 'NO'} ({legacy.details})")
    print(f"corrected degree two:    {'ok' if corrected.passed else 'FAIL'} ({corrected.details})")

    vp = _viewport_from_config(cfg, lambda px: default_dynamical_viewport(rs, px))
    side_by_side = hstack_images(
        render_dynamical_plane(rs, vp, max_iter=min(cfg.max_iter, 512),
                               escape_radius=cfg.escape_radius, legacy=True),
        render_dynamical_plane(rs, vp, max_iter=min(cfg.max_iter, 512),
                               escape_radius=cfg.escape_radius, legacy=False),
    )
    os.makedirs(cfg.out_dir, exist_ok=True)
    out = cfg.out or os.path.join(
        cfg.out_dir, f"error_demo_n{cfg.n}_d{cfg.d}.{cfg.format}"
    )
    write_image(side_by_side, out, cfg.format)
    print(f"wrote {out}")
    reproduced = ray.passed and legacy.passed and corrected.passed
    return 0 if reproduced else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halos",
        description="Region certification and escape-time renders for "
        "the family z^n + lambda/z^d",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("certify", "run the full certification and write a JSON report"),
        ("render-param", "render the parameter plane"),
        ("render-dyn", "render the dynamical plane for one lambda"),
        ("error-demo", "reproduce the legacy construction's failure"),
    ):
        sub = subs.add_parser(name, help=help_text)
        _add_common(sub)
    return parser


_COMMANDS = {
    "certify": cmd_certify,
    "render-param": cmd_render_param,
    "render-dyn": cmd_render_dyn,
    "error-demo": cmd_error_demo,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = _merge_config(args)
        return _COMMANDS[args.command](cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        # I/O failures (unwritable output paths and the like)
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
