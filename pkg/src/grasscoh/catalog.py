"""Built-in data: the spaces, ring presentations and solver problems.

Every record carries a short citation naming where the data comes from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .abelian import ZERO, Z, Z2, AbelianGroup
from .graded_ring import RingPresentation
from .solver import DEFAULT_CANDIDATES, TorsionProblem
from .spectral import SphereBundleSpec

FAMILIES = ("lai_even", "odd_g2", "w21")
FAMILY_RANGE = range(2, 9)


@dataclass(frozen=True)
class SpaceRecord:
    id: str
    citation: str
    integral_groups: Mapping[int, AbelianGroup] | None = None
    mod2_dims: Mapping[int, int] | None = None
    mod2_citations: Mapping[int, str] = field(default_factory=dict)
    poincare: tuple[int, ...] | None = None
    presentation: RingPresentation | None = None
    notes: str = ""

    def __post_init__(self) -> None:
        if not any(x is not None for x in (self.integral_groups, self.mod2_dims, self.poincare, self.presentation)):
            raise ValueError(f"record {self.id} carries no data")

    def __hash__(self) -> int:
        return hash(self.id)

    def groups_list(self) -> list[AbelianGroup]:
        """Dense table 0..top, from the presentation when there is one."""
        if self.presentation is not None:
            return self.presentation.groups()
        if self.integral_groups is None:
            raise ValueError(f"{self.id} has no integral groups")
        top = max(self.integral_groups)
        return [self.integral_groups.get(k, ZERO) for k in range(top + 1)]

    def to_json(self) -> dict:
        out: dict = {"id": self.id, "citation": self.citation}
        if self.integral_groups is not None:
            out["integral_groups"] = {str(k): g.to_json() for k, g in sorted(self.integral_groups.items())}
        if self.mod2_dims is not None:
            out["mod2_dims"] = {str(k): v for k, v in sorted(self.mod2_dims.items())}
            out["mod2_citations"] = {str(k): v for k, v in sorted(self.mod2_citations.items())}
        if self.poincare is not None:
            out["poincare"] = list(self.poincare)
        if self.presentation is not None:
            out["presentation"] = self.presentation.to_json()
        if self.notes:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SpaceRecord":
        groups = data.get("integral_groups")
        mod2 = data.get("mod2_dims")
        return cls(
            id=data["id"],
            citation=data["citation"],
            integral_groups={int(k): AbelianGroup.from_json(v) for k, v in groups.items()} if groups is not None else None,
            mod2_dims={int(k): v for k, v in mod2.items()} if mod2 is not None else None,
            mod2_citations={int(k): v for k, v in data.get("mod2_citations", {}).items()},
            poincare=tuple(data["poincare"]) if "poincare" in data else None,
            presentation=RingPresentation.from_json(data["presentation"]) if "presentation" in data else None,
            notes=data.get("notes", ""),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpaceRecord) and self.to_json() == other.to_json()


# ---------------------------------------------------------------------------
# ring families
# ---------------------------------------------------------------------------


def _signed(coef: int, body: str) -> str:
    if coef == 0:
        return ""
    sign = "+" if coef > 0 else "-"
    mag = abs(coef)
    return f" {sign} {body}" if mag == 1 else f" {sign} {mag}*{body}"


def lai_even(n: int) -> RingPresentation:
    """H^*(G~_{2n,2}) on Ω~ (``Omt``), κ (``kappa``), Ω (``Om``) and the top class ``mu``.

    Ω and μ are kept as generators so the Euler class can be named; their
    defining relations make them redundant.  The signs of κΩ~^{n-1} and
    Ω~^{2n-2} are the ones forced by Ω = 2κ - Ω~^{n-1}, κΩ = μ and the
    value of κ^2.
    """
    s = (-1) ** (n - 1)
    k2 = (1 + (-1) ** (n - 1)) // 2
    rels = [
        f"Om - 2*kappa + Omt^{n - 1}",
        f"Omt^{n} - 2*kappa*Omt",
        f"kappa*Omt^{n - 1}" + _signed(-s, "mu"),
        "kappa*Om - mu",
        "kappa^2" + _signed(-k2, "mu"),
        f"Omt^{2 * n - 2}" + _signed(-2 * s, "mu"),
        "Om^2 - 2*mu",
    ]
    gens = [("Omt", 2), ("kappa", 2 * n - 2), ("Om", 2 * n - 2), ("mu", 4 * n - 4)]
    return RingPresentation.build(f"G~_{2 * n}_2", gens, rels, top=4 * n - 4)


def odd_g2(n: int) -> RingPresentation:
    """H^*(G~_{2n+1,2}) = Z[x_2, x_2n] / (x_2^n - 2 x_2n, x_2n^2)."""
    top = f"x{2 * n}"
    return RingPresentation.build(
        f"G~_{2 * n + 1}_2", [("x2", 2), (top, 2 * n)], [f"x2^{n} - 2*{top}", f"{top}^2"], top=4 * n - 2
    )


def w21(n: int) -> RingPresentation:
    """H^*(W^{2n}_{2,1}) = Z[xb2, xb_{2n-2}, xb_{2n-1}] / (xb2^{n-1} - 2 xb_{2n-2}, squares)."""
    if n < 3:
        raise ValueError("w21 needs n >= 3")
    a, b = f"xb{2 * n - 2}", f"xb{2 * n - 1}"
    return RingPresentation.build(
        f"W{2 * n}_2_1",
        [("xb2", 2), (a, 2 * n - 2), (b, 2 * n - 1)],
        [f"xb2^{n - 1} - 2*{a}", f"{a}^2", f"{b}^2"],
        top=6 * n - 7,
    )


def instantiate_family(family: str, n: int) -> RingPresentation:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n not in FAMILY_RANGE:
        raise ValueError(f"n = {n} outside supported range {FAMILY_RANGE.start}..{FAMILY_RANGE.stop - 1}")
    return {"lai_even": lai_even, "odd_g2": odd_g2, "w21": w21}[family](n)


def lai_euler(n: int) -> str:
    """Euler class of the complement bundle over G~_{2n,2}, Ω = 2κ - Ω~^{n-1}."""
    return "Om"


def korbas_dims(n: int) -> list[int]:
    """mod-2 dims of Z_2[w2]/(w2^n) ⊗ Λ(a_2n), degrees 0..4n-2."""
    dims = [0] * (4 * n - 1)
    for i in range(n):
        for e in (0, 1):
            dims[2 * i + 2 * n * e] += 1
    return dims


# ---------------------------------------------------------------------------
# G~_{8,3} and G~_{10,3}
# ---------------------------------------------------------------------------

G83 = RingPresentation.build(
    "G83", [("y3", 3), ("x4", 4), ("x7", 7)],
    ["2*y3", "y3*x4", "y3^3", "x4^3", "x7^2"], top=15,
)

G103_IDEAL = [
    "2*y3", "y3^3", "y3^2*x4", "y3*x4^2", "x4^3 - 2*x12", "y3*x9", "x4*x9 - 2*x13",
    "y3*x13 - x4*x12", "x9^2", "y3^2*x12", "x4^2*x12", "x9*x12 - x4^2*x13",
]
G103 = RingPresentation.build(
    "G103", [("y3", 3), ("x4", 4), ("x9", 9), ("x12", 12), ("x13", 13)], G103_IDEAL, top=21,
)

W8 = w21(4)
W10 = w21(5)


def _betti(degrees: set[int], top: int) -> tuple[int, ...]:
    return tuple(int(k in degrees) for k in range(top + 1))


G83_BETTI = _betti({0, 4, 7, 8, 11, 15}, 15)
G103_BETTI = _betti({0, 4, 8, 9, 12, 13, 17, 21}, 21)


def _parse_table(text: str) -> dict[int, AbelianGroup]:
    return {k: AbelianGroup.parse(s) for k, s in enumerate(text.split(","))}


G83_TABLE = _parse_table("Z,0,0,Z_2,Z,0,Z_2,Z,Z,0,Z_2,Z,0,Z_2,0,Z")
G103_TABLE = _parse_table("Z,0,0,Z_2,Z,0,Z_2,Z_2,Z,Z,0,0,Z,Z,0,Z_2,Z_2,Z,0,Z_2,0,Z")

KORBAS = "Korbaš, mod-2 cohomology of oriented Grassmannians"
GREUB = "Poincaré polynomial from Greub-Halperin-Vanstone"

# p^*: H^*(G~_{n,3}) -> H^*(W^n_{2,1}) on generators
PSTAR = {
    "G83": (G83, W8, {"y3": "0", "x4": "xb2^2", "x7": "xb7"}),
    "G103": (G103, W10, {"y3": "0", "x4": "xb2^2", "x9": "2*xb9", "x12": "xb2^2*xb8", "x13": "xb2^2*xb9"}),
}


def _records() -> dict[str, SpaceRecord]:
    recs: dict[str, SpaceRecord] = {}

    def add(r: SpaceRecord) -> None:
        recs[r.id] = r

    for n in FAMILY_RANGE:
        add(SpaceRecord(
            f"V_{2 * n + 1}_2", "Stiefel manifold cohomology (standard)",
            integral_groups={0: Z, 2 * n: Z2, 4 * n - 1: Z} | {k: ZERO for k in range(4 * n) if k not in (0, 2 * n, 4 * n - 1)},
        ))
        add(SpaceRecord(f"G~_{2 * n}_2", "Lai's theorem on H^*(G~_{2n,2})", presentation=lai_even(n)))
        korbas = korbas_dims(n)
        add(SpaceRecord(
            f"G~_{2 * n + 1}_2", "sphere-bundle computation over V_{2n+1,2}",
            presentation=odd_g2(n),
            mod2_dims=dict(enumerate(korbas)),
            mod2_citations={k: KORBAS for k in range(len(korbas))},
        ))
        if n >= 3:
            add(SpaceRecord(f"W{2 * n}_2_1", "sphere bundle over G~_{2n,2}", presentation=w21(n)))

    add(SpaceRecord(
        "SO3", "standard; not derived from the other records",
        integral_groups={0: Z, 1: ZERO, 2: Z2, 3: Z},
        notes="H^*(SO(3); Z) = H^*(RP^3; Z), assumed by the SO(3)-bundle pages",
    ))
    add(SpaceRecord(
        "V_10_3_facts", "Stiefel manifold cohomology (Mimura-Toda)",
        integral_groups={14: ZERO, 18: ZERO, 19: ZERO},
        notes="only the vanishing degrees used by the SO(3)-bundle argument",
    ))
    add(SpaceRecord(
        "G~_8_3", "computed by the torsion solver and the ring presentation",
        integral_groups=G83_TABLE,
        mod2_dims={6: 1},
        mod2_citations={6: KORBAS},
        poincare=G83_BETTI,
        presentation=G83,
        notes="full mod-2 row after solving (derived): all 1 except degrees 1 and 14",
    ))
    add(SpaceRecord(
        "G~_10_3", "computed by the torsion solver and the ring presentation",
        integral_groups=G103_TABLE,
        mod2_dims={4: 1, 8: 1, 9: 1, 10: 0, 12: 1, 16: 1},
        mod2_citations={4: f"{KORBAS} (w2^2)", 8: KORBAS, 9: KORBAS, 10: KORBAS,
                        12: f"{KORBAS} (a_12)", 16: f"{KORBAS} (w2^2 a_12)"},
        poincare=G103_BETTI,
        presentation=G103,
    ))
    return recs


_RECORDS = _records()
# short aliases used on the command line
_ALIASES = {"G83": "G~_8_3", "G103": "G~_10_3", "W8": "W8_2_1", "W10": "W10_2_1"}


def space_ids() -> list[str]:
    return sorted(_RECORDS)


def get_space(id: str) -> SpaceRecord:
    key = _ALIASES.get(id, id)
    if key not in _RECORDS:
        raise KeyError(f"unknown space {id!r}")
    return _RECORDS[key]


def get_ring(name: str) -> RingPresentation:
    rec = get_space(name)
    if rec.presentation is None:
        raise KeyError(f"{name} has no ring presentation")
    return rec.presentation


# ---------------------------------------------------------------------------
# solver problems
# ---------------------------------------------------------------------------


def _problem(name: str, n: int, space: str, target: RingPresentation, so3: tuple[int, ...]) -> TorsionProblem:
    rec = get_space(space)
    return TorsionProblem(
        name=name,
        n=n,
        betti=rec.poincare,
        mod2_dims=dict(rec.mod2_dims),
        mod2_citations=dict(rec.mod2_citations),
        sphere_target=tuple(target.groups()),
        sphere_fiber_dim=2,
        so3_vanishing=so3,
        candidates=DEFAULT_CANDIDATES,
    )


# the W ring each problem's sphere-bundle check compares against
PROBLEM_TARGETS = {"g83": "W8_2_1", "g103": "W10_2_1"}

PROBLEMS = {
    "g83": _problem("g83", 8, "G~_8_3", W8, ()),
    "g103": _problem("g103", 10, "G~_10_3", W10, tuple(sorted(get_space("V_10_3_facts").integral_groups))),
}

# expected unknowns T_4.. in the order of TorsionProblem.unknowns
EXPECTED_TORSION = {
    "g83": ("0", "Z_2", "0", "0"),
    "g103": ("0", "Z_2", "Z_2", "0", "0", "0", "0"),
}


def get_problem(name: str) -> TorsionProblem:
    if name not in PROBLEMS:
        raise KeyError(f"unknown problem {name!r}")
    return PROBLEMS[name]


# ---------------------------------------------------------------------------
# sphere bundles, named after their total space
# ---------------------------------------------------------------------------


def _bundles() -> dict[str, SphereBundleSpec]:
    out = {}
    for n in FAMILY_RANGE:
        base = odd_g2(n)
        out[f"V_{2 * n + 1}_2"] = SphereBundleSpec(base, 1, base.poly("x2"))
        if n >= 3:
            base = lai_even(n)
            out[f"W{2 * n}_2_1_gysin"] = SphereBundleSpec(base, 2 * n - 3, base.poly(lai_euler(n)))
    return out


_BUNDLES = _bundles()


def bundle_ids() -> list[str]:
    return sorted(_BUNDLES, key=lambda s: (s[0], len(s), s))


def get_bundle(name: str) -> SphereBundleSpec:
    key = {"W8": "W8_2_1", "W10": "W10_2_1"}.get(name, name)
    if key not in _BUNDLES and key.startswith("W"):
        key += "_gysin"
    if key not in _BUNDLES:
        raise KeyError(f"unknown bundle {name!r}")
    return _BUNDLES[key]
