"""The ten reproducibility checks, runnable from the CLI and from pytest.

Each check returns a :class:`Criterion` whose ``details`` explain what was
compared.  Everything is exact; nothing reads files or the network.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable

from .abelian import ZERO, Z, Z2, AbelianGroup, mod2_dimensions
from .catalog import (
    EXPECTED_TORSION, G83, G83_TABLE, G103, G103_TABLE, PSTAR,
    get_bundle, get_problem, korbas_dims, odd_g2, w21,
)
from .graded_ring import RingClass, duality_pairing, finite_generating_set, ring_hom_check
from .solver import CHECK_ORDER, EXTENDED_CANDIDATES, SolveResult, cohomology_from, mod2_row, solve
from .spectral import gysin_total


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool = True
    details: list[str] = field(default_factory=list)

    def expect(self, ok: bool, message: str) -> None:
        if not ok:
            self.passed = False
            self.details.append("FAIL " + message)
        else:
            self.details.append("ok   " + message)

    def line(self) -> str:
        return f"criterion {self.number:2d} {'PASS' if self.passed else 'FAIL'}  {self.title}"


@lru_cache(maxsize=None)
def solved(name: str, checks: tuple[str, ...] = CHECK_ORDER, candidates: str = "default") -> SolveResult:
    problem = get_problem(name)
    if candidates != "default":
        problem = problem.with_candidates({"narrow": (ZERO, Z2), "extended": EXTENDED_CANDIDATES}[candidates])
    return solve(problem, checks)


def _table(groups) -> str:
    return ", ".join(f"{k}:{g}" for k, g in enumerate(groups))


def generates(c: RingClass) -> bool:
    """True when ``c`` generates its (cyclic) component."""
    g = c.ring.component(c.degree).group
    if g.ngens != 1:
        return False
    x = c.coords[0]
    order = g.moduli[0]
    return abs(x) == 1 if order == 0 else gcd(x, order) == 1


def stiefel() -> Criterion:
    c = Criterion(1, "S^1-bundle over G~_{2n+1,2} gives V_{2n+1,2}")
    for n in range(2, 7):
        res = gysin_total(get_bundle(f"V_{2 * n + 1}_2"))
        want = {0: Z, 2 * n: Z2, 4 * n - 1: Z}
        c.expect(res.nonzero() == want and len(res.total) == 4 * n, f"n={n}: {_fmt(res.nonzero())}")
    return c


def w_two_paths() -> Criterion:
    c = Criterion(2, "Gysin over G~_{2n,2} agrees with the W ring")
    for n in (3, 4, 5):
        res = gysin_total(get_bundle(f"W{2 * n}_2_1"))
        ring = w21(n).groups()
        total = list(res.total) + [ZERO] * (len(ring) - len(res.total))
        ring = ring + [ZERO] * (len(total) - len(ring))
        c.expect(total == ring, f"n={n}: total groups equal ring groups in all {len(total)} degrees")
        c.expect(not res.ambiguous, f"n={n}: no extension ambiguity")
    return c


def _groups_case(c: Criterion, name: str, table: dict[int, AbelianGroup]) -> None:
    res = solved(name)
    c.expect(len(res.solutions) == 1, f"{name}: {len(res.solutions)} solution(s)")
    if res.solutions:
        problem = get_problem(name)
        got = list(cohomology_from(res.solutions[0], problem.betti))
        want = [table[k] for k in range(len(table))]
        c.expect(got == want, f"{name}: {_table(got)}")
        values = tuple(map(str, res.solutions[0].unknown_values(problem)))
        c.expect(values == EXPECTED_TORSION[name], f"{name}: T_4.. = {', '.join(values)}")


def g83_groups() -> Criterion:
    c = Criterion(3, "G~_{8,3}: unique torsion, table in all 16 degrees")
    _groups_case(c, "g83", G83_TABLE)
    return c


def g103_groups() -> Criterion:
    c = Criterion(4, "G~_{10,3}: unique torsion, SO(3) data needed for T_6")
    _groups_case(c, "g103", G103_TABLE)
    loose = solved("g103", tuple(x for x in CHECK_ORDER if x != "so3"))
    c.expect(len(loose.solutions) >= 2, f"without the SO(3) check: {len(loose.solutions)} solutions")
    return c


def ring_fidelity() -> Criterion:
    c = Criterion(5, "ring presentations reproduce the tables and products")
    for ring, name, table in ((G83, "g83", G83_TABLE), (G103, "g103", G103_TABLE)):
        want = [table[k] for k in range(len(table))]
        c.expect(ring.groups() == want, f"{ring.name}: component groups equal the table")
        res = solved(name)
        if res.solutions:
            c.expect(
                ring.groups() == list(cohomology_from(res.solutions[0], get_problem(name).betti)),
                f"{ring.name}: component groups equal the solver's groups",
            )
    e = G83.element
    c.expect((e("y3") * e("x4")).is_zero(), "G83: y3*x4 = 0")
    c.expect(generates(e("x4") * e("x7")), "G83: x4*x7 generates degree 11")
    c.expect(generates(e("x4^2*x7")), "G83: x4^2*x7 generates degree 15")
    e = G103.element
    lhs, rhs = e("y3") * e("x13"), e("x4") * e("x12")
    c.expect(lhs.coords == rhs.coords and not lhs.is_zero(), f"G103: y3*x13 = x4*x12 = {lhs} != 0")
    lhs, rhs = e("x9") * e("x12"), e("x4^2") * e("x13")
    c.expect(lhs.coords == rhs.coords and generates(lhs), "G103: x9*x12 = x4^2*x13 generates degree 21")
    return c


def finite_presentation() -> Criterion:
    c = Criterion(6, "G103 ideal is finitely generated by four extra monomials")
    got = [G103.format_monomial(m) for m in finite_generating_set(G103, 22, 34)]
    c.expect(got == ["x9*x13", "x12^2", "x12*x13", "x13^2"], "added monomials: " + ", ".join(got))
    return c


def pstar() -> Criterion:
    c = Criterion(7, "p^* is a well-defined ring map, injective in the listed degrees")
    want = {"G83": [4, 7, 8, 11, 15], "G103": [4, 8, 9, 12, 13, 17, 21]}
    for key, (src, dst, images) in PSTAR.items():
        chk = ring_hom_check(src, dst, images)
        c.expect(chk.well_defined, f"{key}: well defined" + ("" if chk.well_defined else f" ({chk.violations})"))
        c.expect(chk.injective_degrees() == want[key], f"{key}: injective in {chk.injective_degrees()}")
    return c


def duality() -> Criterion:
    c = Criterion(8, "duality pairings unimodular, T_k ≅ T_{d-k-1}")
    for ring in (G83, G103):
        bad = []
        for k in range(ring.top_degree + 1):
            if ring.component(k).group.rank:
                if not duality_pairing(ring, k).unimodular:
                    bad.append(k)
        c.expect(not bad, f"{ring.name}: every free pairing unimodular" + (f" (fails at {bad})" if bad else ""))
    for name in ("g83", "g103"):
        for res in (solved(name), solved(name, tuple(x for x in CHECK_ORDER if x != "so3"))):
            d = get_problem(name).dim
            ok = all(a[k] == a[d - k - 1] for a in res.solutions for k in range(d))
            c.expect(ok, f"{name}: symmetry holds for {len(res.solutions)} solved assignment(s)")
    return c


def mod2() -> Criterion:
    c = Criterion(9, "mod-2 dimensions")
    res = solved("g83")
    if res.solutions:
        row = mod2_row(res.solutions[0], get_problem("g83"))
        want = [0 if k in (1, 14) else 1 for k in range(16)]
        c.expect(row == want, f"G~_{{8,3}}: {row}")
    else:
        c.expect(False, "G~_{8,3}: no solution to compute from")
    for n in range(2, 7):
        got = mod2_dimensions(odd_g2(n).groups())
        c.expect(got == korbas_dims(n), f"G~_{{{2 * n + 1},2}}: {got}")
    return c


def robustness() -> Criterion:
    c = Criterion(10, "solutions unchanged with a larger candidate set")
    for name in ("g83", "g103"):
        narrow = [a.torsion for a in solved(name, candidates="narrow").solutions]
        for which in ("default", "extended"):
            wide = [a.torsion for a in solved(name, candidates=which).solutions]
            c.expect(narrow == wide, f"{name}: {{0, Z_2}} and {which} candidates give the same {len(wide)} solution(s)")
    return c


def _fmt(groups: dict[int, AbelianGroup]) -> str:
    return ", ".join(f"{g}@{k}" for k, g in sorted(groups.items()))


CRITERIA: dict[int, Callable[[], Criterion]] = {
    1: stiefel,
    2: w_two_paths,
    3: g83_groups,
    4: g103_groups,
    5: ring_fidelity,
    6: finite_presentation,
    7: pstar,
    8: duality,
    9: mod2,
    10: robustness,
}


def run_all(numbers=None) -> list[Criterion]:
    out = []
    for k in sorted(numbers or CRITERIA):
        try:
            out.append(CRITERIA[k]())
        except Exception as exc:  # a crash is a failed criterion, not a crashed suite
            c = Criterion(k, CRITERIA[k].__name__)
            c.expect(False, f"raised {type(exc).__name__}: {exc}")
            out.append(c)
    return out
