"""Constructive invariance radii and sampled forward invariance.

For weights l with D_l > delta the wedge {|z| < r1, |w| < r2 |z|^l} maps
into itself once r1 satisfies an explicit coefficient inequality; the
constructive witness is validated by seeded sampling, and a deliberately
inflated radius shows the checker is not vacuous.
"""

from fractions import Fraction

from skewdyn import (
    BiPoly, SkewProduct, UniPoly,
    classify, invariance_radii, verify_invariance,
)
from skewdyn.regions import wedge_u_r1r2

f = SkewProduct(UniPoly({2: 1.0}), BiPoly({(1, 3): 1.0, (5, 0): 1.0}))
c = classify(f)
print("map: (z^2, z w^3 + z^5), case", c.case, "dominant", c.primary.vertex)

l = Fraction(1)
r2 = 0.05
r1 = invariance_radii(f, c, l, r2)
print(f"witness radii for U^{l}: r1 = {r1}, r2 = {r2}")

spec = wedge_u_r1r2(l, r1, r2)
report = verify_invariance(f, spec, samples=10_000, seed=5)
print(f"sampled invariance: {len(report.violations)} exits in {report.samples} points")

# Inflating r1 tenfold breaks the sufficient inequality and, for this map,
# the actual invariance: the report carries explicit witnesses.
bad = verify_invariance(f, wedge_u_r1r2(l, 10 * r1, r2), samples=10_000, seed=6)
print(f"after inflating r1 x10: {len(bad.violations)} exits")
if bad.violations:
    v = bad.violations[0]
    print("  witness point :", v.point)
    print("  image         :", v.image)
