"""Products in the integral cohomology rings of G~_{8,3} and G~_{10,3}."""

from grasscoh.catalog import G83, G103, PSTAR
from grasscoh.graded_ring import duality_pairing, finite_generating_set, ring_hom_check

for ring in (G83, G103):
    print(ring.name)
    for k in range(ring.top_degree + 1):
        comp = ring.component(k)
        if comp.group.ngens:
            print(f"  {k:2d}  {str(comp.group):8s} {', '.join(comp.labels())}")
    print()

e = G103.element
print("y3*x13 =", e("y3") * e("x13"), "   x4*x12 =", e("x4") * e("x12"))
print("x4^3 =", e("x4^3"))
print("x9*x12 =", e("x9") * e("x12"), "   x4^2*x13 =", e("x4^2") * e("x13"))
print()

# the relation ideal stops needing new generators above the top degree
added = finite_generating_set(G103, G103.top_degree + 1, 34)
print("monomials added above degree 21:", ", ".join(G103.format_monomial(m) for m in added))
print()

for key, (src, dst, images) in PSTAR.items():
    chk = ring_hom_check(src, dst, images)
    print(f"p^* on {key}: well defined {chk.well_defined}, injective in {chk.injective_degrees()}")

pairing = duality_pairing(G103, 8)
print("pairing H^8 x H^13 -> H^21:", pairing.matrix.entries, "unimodular:", pairing.unimodular)
