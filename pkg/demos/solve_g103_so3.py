"""Why G~_{10,3} needs the SO(3)-bundle argument.

Duality, mod-2 counts and the sphere bundle W^10_{2,1} leave T_6 open.
The Stiefel manifold V_{10,3} is an SO(3)-bundle over G~_{10,3} and its
cohomology vanishes in degrees 14, 18 and 19; that decides T_6.
"""

from grasscoh.catalog import get_problem
from grasscoh.solver import CHECK_ORDER, check_so3, cohomology_symbolic, solve
from grasscoh.spectral import render_page, so3_e2_page

p = get_problem("g103")
loose = solve(p, tuple(c for c in CHECK_ORDER if c != "so3"))
print(f"without SO(3): {len(loose.solutions)} solutions")
for a in loose.solutions:
    r = check_so3(a, p)
    verdict = "survives" if r.passed else f"dies at {', '.join(map(str, r.degrees))}"
    print(f"  {a.describe(p)}  -> {verdict}")
print()

# the E2 page with T_6 left symbolic, around total degree 14..20
page = so3_e2_page(cohomology_symbolic(p, {k: loose.solutions[0][k] for k in p.unknowns if k != 6}), (14, 20))
print(render_page(page))
print()

res = solve(p)
print("with SO(3):", res.unique.describe(p))
