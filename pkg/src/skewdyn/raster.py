"""Deterministic raster output: binary PGM (P5) plus CSV and a sidecar meta.

Pixel values map through an affine clamp of the function value onto
0..255, with -inf -> 0, +inf -> 255 and undecided/NaN -> 128.  Reruns
with the same job and config are byte-identical in single-thread mode;
with a worker pool the rows are assembled by index, so the CSV contents
are identical after the stable sort by pixel index that the writer
already applies.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .algebra import SkewProduct
from .fileio import dump_skew_product
from .green import DEFAULT_N_MAX, DEFAULT_TOL, ESTIMATORS, GreenEstimate
from .newton import Classification, classify

MAX_PIXELS = 8192


@dataclass(frozen=True)
class RunConfig:
    n_max: int = DEFAULT_N_MAX
    tol: float = DEFAULT_TOL
    escape_radius: float = 1e12
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.n_max <= 0 or self.tol <= 0 or self.escape_radius <= 0:
            raise ValueError("config values must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class RenderJob:
    function: str                    # key of green.ESTIMATORS
    fiber_z: complex                 # fiber over which the w-grid is swept
    center: complex = 0j             # w-window center
    width: float = 2.0
    height: float = 2.0
    pixels_x: int = 256
    pixels_y: int = 256
    clamp: Optional[tuple[float, float]] = None  # affine range; None = auto
    out_prefix: str = "render"

    def __post_init__(self):
        if not 0 < self.pixels_x <= MAX_PIXELS or not 0 < self.pixels_y <= MAX_PIXELS:
            raise ValueError(f"pixels per side must be in 1..{MAX_PIXELS}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("window must be positive")
        if self.function not in ESTIMATORS:
            raise ValueError(f"unknown function {self.function!r}")

    def w_at(self, ix: int, iy: int) -> complex:
        re = self.center.real + self.width * ((ix + 0.5) / self.pixels_x - 0.5)
        im = self.center.imag + self.height * ((iy + 0.5) / self.pixels_y - 0.5)
        return complex(re, im)


def _render_row(f: SkewProduct, c: Classification, job: RenderJob,
                cfg: RunConfig, iy: int) -> list[GreenEstimate]:
    fn = ESTIMATORS[job.function]
    return [
        fn(f, c, job.fiber_z, job.w_at(ix, iy), cfg.n_max, cfg.tol)
        for ix in range(job.pixels_x)
    ]


def render(f: SkewProduct, job: RenderJob, cfg: RunConfig = RunConfig(),
           out_dir: str | Path = ".") -> dict[str, Path]:
    """Evaluate the grid and write <prefix>.pgm, <prefix>.csv, <prefix>.meta."""
    c = classify(f)
    rows: list[list[GreenEstimate]] = [None] * job.pixels_y  # type: ignore
    if cfg.threads == 1:
        for iy in range(job.pixels_y):
            rows[iy] = _render_row(f, c, job, cfg, iy)
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            futures = {
                iy: pool.submit(_render_row, f, c, job, cfg, iy)
                for iy in range(job.pixels_y)
            }
            for iy, fut in futures.items():
                rows[iy] = fut.result()

    finite = [e.value for row in rows for e in row if math.isfinite(e.value)]
    if job.clamp is not None:
        vmin, vmax = job.clamp
    elif finite:
        vmin, vmax = min(finite), max(finite)
    else:
        vmin, vmax = 0.0, 1.0
    if vmax <= vmin:
        vmax = vmin + 1.0

    def to_byte(est: GreenEstimate) -> int:
        v = est.value
        if math.isnan(v):
            return 128
        if v == -math.inf:
            return 0
        if v == math.inf:
            return 255
        t = (v - vmin) / (vmax - vmin)
        return max(0, min(255, int(round(255 * t))))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pgm_path = out_dir / f"{job.out_prefix}.pgm"
    csv_path = out_dir / f"{job.out_prefix}.csv"
    meta_path = out_dir / f"{job.out_prefix}.meta"

    header = f"P5\n{job.pixels_x} {job.pixels_y}\n255\n".encode("ascii")
    body = bytes(to_byte(e) for row in rows for e in row)
    pgm_path.write_bytes(header + body)

    lines = ["z_re,z_im,w_re,w_im,value,n_used,termination,residual"]
    for iy in range(job.pixels_y):
        for ix in range(job.pixels_x):
            e = rows[iy][ix]
            w = job.w_at(ix, iy)
            lines.append(
                f"{job.fiber_z.real!r},{job.fiber_z.imag!r},{w.real!r},{w.imag!r},"
                f"{e.value!r},{e.n_used},{e.termination},{e.residual!r}"
            )
    csv_path.write_text("\n".join(lines) + "\n")

    map_hash = hashlib.sha256(dump_skew_product(f).encode()).hexdigest()
    meta = [
        f"function: {job.function}",
        f"fiber_z: {job.fiber_z.real!r} {job.fiber_z.imag!r}",
        f"center: {job.center.real!r} {job.center.imag!r}",
        f"window: {job.width!r} x {job.height!r}",
        f"pixels: {job.pixels_x} x {job.pixels_y}",
        f"clamp: {vmin!r} {vmax!r}",
        "palette: affine clamp to 0..255; -inf -> 0, +inf -> 255, nan -> 128",
        f"n_max: {cfg.n_max}",
        f"tol: {cfg.tol!r}",
        f"escape_radius: {cfg.escape_radius!r}",
        f"seed: {cfg.seed}",
        f"map_sha256: {map_hash}",
    ]
    meta_path.write_text("\n".join(meta) + "\n")
    return {"pgm": pgm_path, "csv": csv_path, "meta": meta_path}
