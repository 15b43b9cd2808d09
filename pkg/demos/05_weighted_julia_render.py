"""Raster of the weighted vertical dynamics of a semiconjugate example.

f = (z^4, z w^3 + z^2 w^2) is semiconjugate to (z^4, h(w)) with
h = w^3 + w^2, so on the fiber z = 0.5 the escape rate of the weighted
ratio w/z paints the scaled Julia set 0.5 * J_h.  The render writes a
deterministic PGM image, a CSV of raw values, and a sidecar meta file.
"""

from skewdyn import RenderJob, RunConfig, render
from skewdyn.oracles import example_degenerate, example_cubic_h, julia_membership

f = example_degenerate(alpha=1, delta=4)
job = RenderJob(
    function="Gzap",
    fiber_z=0.5 + 0j,
    center=0j,
    width=1.0,          # the window [-1, 1]^2 scaled by |z|^alpha = 0.5
    height=1.0,
    pixels_x=128,
    pixels_y=128,
    out_prefix="weighted_julia",
)
paths = render(f, job, RunConfig(n_max=200, tol=1e-12), out_dir="out")
for kind, path in paths.items():
    print(f"{kind}: {path}")

# Cross-check four pixels against the scaled one-dimensional picture.
h = example_cubic_h()
for w in (0.05 + 0.0j, 0.35 + 0.0j, 0.1 + 0.3j, -0.45 - 0.2j):
    side = julia_membership(h, w / 0.5, 400)
    print(f"w = {w}: ratio w/z is {side} for h")
print("dark pixels = zero escape rate (filled side), bright = escaping side")
