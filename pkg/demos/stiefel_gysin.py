"""Sphere bundles and the Gysin sequence.

Start from a ring we know (CP^2), build a lens space, then recover the
Stiefel manifolds V_{2n+1,2} as circle bundles over G~_{2n+1,2}, and
finally compare the W^{2n}_{2,1} rings against their Gysin computation.
"""

from grasscoh.catalog import get_bundle, w21
from grasscoh.graded_ring import RingPresentation
from grasscoh.spectral import SphereBundleSpec, gysin_total, render_page

cp2 = RingPresentation.build("CP2", "x:2", ["x^3"], top=4)

# Euler class 3x: the circle bundle is the lens space L(3) of dimension 5
lens = gysin_total(SphereBundleSpec(cp2, 1, cp2.poly("3*x")))
print("L^5(3):", {k: str(g) for k, g in lens.nonzero().items()})
print()

for n in range(2, 6):
    res = gysin_total(get_bundle(f"V_{2 * n + 1}_2"))
    print(f"V_{2 * n + 1},2:", ", ".join(f"{g}@{k}" for k, g in sorted(res.nonzero().items())))
print()

# the E2 page for V_5,2, with the one nonzero differential marked *2
print(render_page(gysin_total(get_bundle("V_5_2")).e2))
print()

for n in (3, 4, 5):
    res = gysin_total(get_bundle(f"W{2 * n}_2_1"))
    ring = w21(n).groups()
    same = list(res.total)[: len(ring)] == ring
    print(f"W^{2 * n}_2,1: Gysin and ring agree in {len(ring)} degrees: {same}; ambiguous: {sorted(res.ambiguous)}")
