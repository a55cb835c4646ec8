"""Pinning down the torsion of G~_{8,3}.

The free part is known from the Poincare polynomial.  The torsion in degrees
4..7 is unknown; the rest follows by duality.  Each check below removes
candidates until one assignment survives.
"""

from grasscoh.catalog import get_problem
from grasscoh.solver import CHECK_ORDER, cohomology_from, cohomology_symbolic, solve

p = get_problem("g83")
print("unknown torsion in degrees", p.unknowns)
print("H^* before solving:", ", ".join(f"{k}:{g}" for k, g in enumerate(cohomology_symbolic(p))))
print()

# add the checks one at a time and watch the survivors shrink
for i in range(len(CHECK_ORDER) + 1):
    checks = CHECK_ORDER[:i]
    res = solve(p, checks)
    print(f"{', '.join(checks) or 'no checks':32s} {len(res.solutions):4d} survivor(s)")
print()

res = solve(p, keep_log=True)
for name, degree, count, _ in res.elimination_summary():
    print(f"{name:9s} rejects {count:3d} assignment(s) at degree {degree}")

a = res.unique
print()
print("answer:", a.describe(p))
print("H^*:", ", ".join(f"{k}:{g}" for k, g in enumerate(cohomology_from(a, p.betti))))
