"""Newton polygon, case classification, and weight intervals.

Walks the exact-geometry layer on three maps: a Case 2 map whose dominant
term has fiber degree zero, a boundary map with two dominant terms, and a
Case 4 map with a genuine weight rectangle.
"""

from fractions import Fraction

from skewdyn import (
    BiPoly, SkewProduct, UniPoly,
    classify, d_value, interval_case2, rectangle_case4, weight_interval,
)
from skewdyn.newton import classification_report

# A Case 2 example: f(z, w) = (z^2, w^4 + z^2 w + z^3).
f = SkewProduct(UniPoly({2: 1.0}), BiPoly({(0, 4): 1.0, (2, 1): 1.0, (3, 0): 1.0}))
c = classify(f)
print(classification_report(f, c))
print()

# The polygon has vertices (0,4), (2,1), (3,0) with intercepts 4 > 3, so
# delta = 2 sits below T_{s-1} and the bottom-right vertex (3, 0) dominates.
# The admissible wedge weights form the exact interval [l_1, alpha]:
iv = interval_case2(c)
print("weight interval I_f =", iv)

# D_l = min(i/l + j) drives the invariance radii; the minimum is attained
# at a polygon vertex.
for l in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
    dv = d_value(f.q, l)
    print(f"D_{l} = {dv.d_min} attained at {dv.attaining_vertex} "
          f"by {list(dv.attaining_points)}")
print()

# delta = T_1 boundary: two dominant terms, one per case.
g = SkewProduct(UniPoly({4: 1.0}), BiPoly({(1, 3): 1.0, (2, 2): 1.0}))
cg = classify(g)
for term in cg.terms:
    print(f"dominant {term.vertex}: {term.case}, l1={term.l1}, "
          f"l2={'inf' if term.l2 is None else term.l2}, alpha={term.alpha}")
print()

# Case 4: three vertices, weight rectangle in (l_(1), l_(1)+l_(2)).
h = SkewProduct(UniPoly({3: 1.0}),
                BiPoly({(0, 5): 1.0, (1, 2): 1.0, (3, 1): 1.0}))
ch = classify(h)
rect = rectangle_case4(ch)
print("Case 4 rectangle:", rect)
print("I_f^2 at l_(1) = 1/2:", rect.i2_of(Fraction(1, 2)))
print("generic dispatch:", weight_interval(ch))
