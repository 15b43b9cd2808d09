"""Green-type functions against their closed forms.

Monomial models have explicit formulas for every estimator, split by the
sign of gamma and the order of delta versus d; the estimators reproduce
them to more than ten digits.  For the d = 0 map the identity
G_z = alpha G_p holds on the basin even though no Böttcher coordinate
exists there.
"""

import math

from skewdyn import (
    BiPoly, SkewProduct, UniPoly,
    classify, g_f, g_p, g_z, g_z_alpha, g_z_infty, monomial_skew,
    monomial_reference,
)

point = (0.5 + 0.1j, 0.4 - 0.2j)

print("monomial (z^2, z w^3): delta < d")
f = monomial_skew(2, 1, 3)
c = classify(f)
for name, fn in [("G_z^alpha", g_z_alpha), ("G_z", g_z), ("G_f", g_f)]:
    est = fn(f, c, *point, 72, 1e-12)
    ref = monomial_reference(2, 1, 3, point,
                             {"G_z^alpha": "Gza", "G_z": "Gz", "G_f": "Gf"}[name])
    print(f"  {name}: {est.value:+.12f}  closed form {ref:+.12f}  "
          f"({est.termination}, n={est.n_used})")

print("monomial (z^2, z w^2): delta = d")
f = monomial_skew(2, 1, 2)
c = classify(f)
est = g_z_infty(f, c, *point, 72, 1e-12)
print(f"  G_z^inf: {est.value:+.12f}  closed form {math.log(abs(point[1])):+.12f}")
est = g_z(f, c, *point, 72, 1e-12)
print(f"  G_z diverges: value {est.value}, termination {est.termination}")

print("d = 0 map (z^2, w^4 + z^2 w + z^3): G_z = (3/2) G_p on the basin")
f = SkewProduct(UniPoly({2: 1.0}), BiPoly({(0, 4): 1.0, (2, 1): 1.0, (3, 0): 1.0}))
c = classify(f)
for zw in [(0.4, 0.3), (0.25 + 0.2j, 0.1j), (0.5, 0.45)]:
    gz = g_z(f, c, *zw, 96, 1e-13)
    gp = g_p(f.p, zw[0], 96, 1e-13)
    print(f"  at {zw}: G_z = {gz.value:+.12f}, "
          f"(3/2) G_p = {1.5 * gp.value:+.12f}, "
          f"difference {abs(gz.value - 1.5 * gp.value):.2e}")
