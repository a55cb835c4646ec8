"""Constraint search for the torsion of H_*(G~_{n,3}).

Unknowns are the homology torsion groups ``T_k`` for ``4 <= k <= d/2``
(``d = 3(n-3)``); Poincaré duality ``T_k ≅ T_{d-k-1}`` fills in the rest and
``H^k = Z^{b_k} ⊕ T_{k-1}`` turns an assignment into cohomology.  Four
families of constraints cut the candidates down:

``uct_mod2``
    known values of ``dim H^k(;Z_2)`` against the universal coefficient count;
``duality``
    the symmetry itself (structural, for hand-made assignments);
``sphere``
    the S^2-bundle ``W^n_{2,1} -> G~_{n,3}`` with its single ``d_3``;
``so3``
    the SO(3)-bundle ``V_{n,3} -> G~_{n,3}`` at degrees where ``H^*(V_{n,3})``
    vanishes.

The last two ask whether *some* differentials make the spectral sequence
converge to the known answer.  Both are decided at the level of isomorphism
types, which is exact because each differential is an independent
homomorphism between the groups involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .abelian import (
    ZERO,
    Z,
    Z2,
    AbelianGroup,
    embeds,
    exists_extension,
    hom_outcomes,
    mod2_dimensions,
    surjects,
    tensor_Z2,
    tor_Z2,
)
from .spectral import SymbolicGroup, mod2_entry

CHECK_ORDER = ("uct_mod2", "duality", "sphere", "so3")
DEFAULT_CANDIDATES = tuple(AbelianGroup.parse(s) for s in ("0", "Z_2", "Z_3", "Z_4", "Z_2 ⊕ Z_2"))
EXTENDED_CANDIDATES = DEFAULT_CANDIDATES + (AbelianGroup.parse("Z_9"),)


@dataclass(frozen=True)
class TorsionProblem:
    """Everything the search knows about one G~_{n,3}."""

    name: str
    n: int
    betti: tuple[int, ...]
    mod2_dims: Mapping[int, int] = field(default_factory=dict)
    mod2_citations: Mapping[int, str] = field(default_factory=dict)
    sphere_target: tuple[AbelianGroup, ...] = ()
    sphere_fiber_dim: int = 2
    so3_vanishing: tuple[int, ...] = ()
    candidates: tuple[AbelianGroup, ...] = DEFAULT_CANDIDATES

    def __post_init__(self) -> None:
        d = self.dim
        if len(self.betti) != d + 1:
            raise ValueError(f"need {d + 1} Betti numbers for n = {self.n}, got {len(self.betti)}")
        if any(self.betti[k] != self.betti[d - k] for k in range(d + 1)):
            raise ValueError("Betti numbers are not symmetric")
        if not self.candidates:
            raise ValueError("candidate set is empty")

    def __hash__(self) -> int:
        return hash((self.name, self.n, self.betti, self.sphere_target, self.so3_vanishing, self.candidates))

    @property
    def dim(self) -> int:
        return 3 * (self.n - 3)

    @property
    def unknowns(self) -> tuple[int, ...]:
        return tuple(range(4, self.dim // 2 + 1))

    def canonical(self, k: int) -> int:
        """Representative index of T_k under T_k ≅ T_{d-k-1}."""
        return min(k, self.dim - k - 1)

    def with_candidates(self, candidates: Iterable[AbelianGroup]) -> "TorsionProblem":
        return TorsionProblem(
            self.name, self.n, self.betti, self.mod2_dims, self.mod2_citations,
            self.sphere_target, self.sphere_fiber_dim, self.so3_vanishing, tuple(candidates),
        )


def _fixed_torsion(d: int) -> dict[int, AbelianGroup]:
    # H_1 = H_3 = 0 and H_2 = Z_2 for every G~_{n,3} with n >= 7, plus duals
    fixed = {0: ZERO, 1: ZERO, 2: Z2, 3: ZERO}
    for k in list(fixed):
        fixed[d - k - 1] = fixed[k]
    fixed[d] = ZERO
    return fixed


@lru_cache(maxsize=None)
def _layout(problem: TorsionProblem) -> tuple[tuple[AbelianGroup | None, int | None], ...]:
    """Per degree k: (fixed group, None) or (None, position among the unknowns)."""
    fixed = _fixed_torsion(problem.dim)
    pos = {k: i for i, k in enumerate(problem.unknowns)}
    return tuple(
        (fixed[k], None) if k in fixed else (None, pos[problem.canonical(k)])
        for k in range(problem.dim + 1)
    )


@dataclass(frozen=True)
class TorsionAssignment:
    """Homology torsion T_k for every k (fixed values included)."""

    n: int
    torsion: tuple[AbelianGroup, ...]

    @classmethod
    def from_unknowns(cls, problem: TorsionProblem, values: Sequence[AbelianGroup] | Mapping[int, AbelianGroup]) -> "TorsionAssignment":
        if not isinstance(values, Mapping):
            if len(values) != len(problem.unknowns):
                raise ValueError(f"expected {len(problem.unknowns)} groups, got {len(values)}")
            values = dict(zip(problem.unknowns, values))
        missing = [k for k in problem.unknowns if k not in values]
        if missing:
            raise ValueError(f"assignment incomplete: missing T_{missing[0]}")
        return cls._fast(problem.n, _layout(problem), tuple(values[k] for k in problem.unknowns))

    @classmethod
    def _fast(cls, n: int, layout: tuple, values: tuple[AbelianGroup, ...]) -> "TorsionAssignment":
        return cls(n, tuple(g if pos is None else values[pos] for g, pos in layout))

    def __getitem__(self, k: int) -> AbelianGroup:
        return self.torsion[k] if 0 <= k < len(self.torsion) else ZERO

    def unknown_values(self, problem: TorsionProblem) -> tuple[AbelianGroup, ...]:
        return tuple(self[k] for k in problem.unknowns)

    def sort_key(self) -> tuple:
        return tuple(g.sort_key() for g in self.torsion)

    def describe(self, problem: TorsionProblem) -> str:
        return ", ".join(f"T_{k}={self[k]}" for k in problem.unknowns)


@dataclass(frozen=True)
class ConstraintResult:
    name: str
    passed: bool
    degree: int | None = None
    reason: str = ""
    degrees: tuple[int, ...] = ()
    witness: tuple = ()

    def line(self) -> str:
        if self.passed:
            return f"{self.name}: pass"
        return f"{self.name}: fail at degree {self.degree}: {self.reason}"


@dataclass(frozen=True)
class ConstraintReport:
    results: tuple[ConstraintResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> ConstraintResult | None:
        return next((r for r in self.results if not r.passed), None)

    def __getitem__(self, name: str) -> ConstraintResult:
        return next(r for r in self.results if r.name == name)


# ---------------------------------------------------------------------------
# cohomology from torsion
# ---------------------------------------------------------------------------


def cohomology_from(assignment: TorsionAssignment, betti: Sequence[int]) -> tuple[AbelianGroup, ...]:
    """H^k = Z^{b_k} ⊕ T_{k-1} for k = 0..d."""
    if len(assignment.torsion) != len(betti):
        raise ValueError("assignment and Betti numbers cover different degree ranges")
    return tuple(AbelianGroup(b, ()).direct_sum(assignment[k - 1]) for k, b in enumerate(betti))


def cohomology_symbolic(problem: TorsionProblem, known: Mapping[int, AbelianGroup] | None = None) -> list:
    """Cohomology with the unknowns left as named summands ``T_k``.

    ``known`` maps canonical indices to groups that should be substituted.
    """
    known = dict(known or {})
    fixed = _fixed_torsion(problem.dim)
    out: list = []
    for k, b in enumerate(problem.betti):
        j = k - 1
        free = AbelianGroup(b, ())
        if j < 0 or j in fixed:
            out.append(free.direct_sum(fixed.get(j, ZERO)))
            continue
        c = problem.canonical(j)
        if c in known:
            out.append(free.direct_sum(known[c]))
        else:
            out.append(SymbolicGroup((free, ("", f"T_{c}"))))
    return out


# ---------------------------------------------------------------------------
# individual constraints
# ---------------------------------------------------------------------------


def check_uct_mod2(assignment: TorsionAssignment, problem: TorsionProblem) -> ConstraintResult:
    """dim H^k(;Z_2) = b_k + dim(T_k ⊗ Z_2) + dim Tor(T_{k-1}, Z_2) for each known k."""
    t = assignment.torsion
    for k in sorted(problem.mod2_dims):
        got = problem.betti[k] + tensor_Z2(t[k]) + (tor_Z2(t[k - 1]) if k else 0)
        want = problem.mod2_dims[k]
        if got != want:
            return ConstraintResult(
                "uct_mod2", False, k, f"dim H^{k}(;Z_2) would be {got}, known to be {want}", (k,)
            )
    return ConstraintResult("uct_mod2", True)


def check_duality(assignment: TorsionAssignment, problem: TorsionProblem) -> ConstraintResult:
    d = problem.dim
    for k in range(d):
        if assignment[k] != assignment[d - k - 1]:
            return ConstraintResult(
                "duality", False, k, f"T_{k} = {assignment[k]} but T_{d - k - 1} = {assignment[d - k - 1]}", (k,)
            )
    return ConstraintResult("duality", True)


@lru_cache(maxsize=None)
def _sphere_dp(H: tuple[AbelianGroup, ...], W: tuple[AbelianGroup, ...], m: int):
    """Chain of differentials d: H^p -> H^{p+m+1} consistent with the total space W.

    State for column p is the (kernel, cokernel) type pair of d at p.  The
    total degree N ties the cokernel at N-m-1 to the kernel at N-m, and these
    are adjacent columns, so a forward sweep decides feasibility exactly.
    Returns (first failing N or None, witness list of states).
    """
    r = m + 1
    d = len(H) - 1

    def h(k: int) -> AbelianGroup:
        return H[k] if 0 <= k <= d else ZERO

    def w(k: int) -> AbelianGroup:
        return W[k] if 0 <= k < len(W) else ZERO

    cols = list(range(-r, d + 1))
    states = {p: sorted(hom_outcomes(h(p), h(p + r), w(p + r)), key=lambda kq: (kq[0].sort_key(), kq[1].sort_key())) for p in cols}
    # a column with no states means its cokernel cannot sit inside W^{p+r}
    if not states[cols[0]]:
        return cols[0] + r, ()
    layers = [{s: None for s in states[cols[0]]}]
    for p in cols[1:]:
        if not states[p]:
            return p + r, ()
        n_deg = p - 1 + r
        prev = layers[-1]
        layer = {}
        for y in states[p]:
            for x in prev:
                if exists_extension(x[1], w(n_deg), y[0]):
                    layer[y] = x
                    break
        if not layer:
            return n_deg, ()
        layers.append(layer)
    # the last constraint (N = d + r) only involves zero groups
    path = []
    state = next(iter(layers[-1]))
    for layer in reversed(layers):
        path.append(state)
        state = layer[state]
    path.reverse()
    return None, tuple(zip(cols, path))


def check_sphere_assembly(assignment: TorsionAssignment, problem: TorsionProblem) -> ConstraintResult:
    """Some d_3 makes the two-row spectral sequence assemble to H^*(W^n_{2,1})."""
    if not problem.sphere_target:
        return ConstraintResult("sphere", True, reason="no sphere-bundle target")
    H = cohomology_from(assignment, problem.betti)
    bad, witness = _sphere_dp(H, tuple(problem.sphere_target), problem.sphere_fiber_dim)
    if bad is not None:
        W = problem.sphere_target[bad] if bad < len(problem.sphere_target) else ZERO
        return ConstraintResult(
            "sphere", False, bad,
            f"no choice of differentials assembles H^{bad}(W) = {W}", (bad,),
        )
    return ConstraintResult("sphere", True, witness=witness)


def _so3_slots(Ns: Iterable[int]):
    d2, d3, d4 = set(), set(), set()
    need_inj3, need_surj4, need_inj4 = set(), set(), set()
    for N in Ns:
        d2 |= {N - 5, N - 4, N - 3}
        d3 |= {N - 3, N - 2}
        d4 |= {N - 4, N - 3}
        need_inj3.add(N - 2)
        need_surj4.add(N - 4)
        need_inj4.add(N - 3)
    return sorted(d2), sorted(d3), sorted(d4), need_inj3, need_surj4, need_inj4


def _so3_feasible(H: tuple[AbelianGroup, ...], Ns: tuple[int, ...]) -> bool:
    """Do differentials d_2, d_3, d_4 exist killing every E_∞ entry on the given anti-diagonals?

    Rows: q = 3 (H^p), q = 2 (H^p(;Z_2)), q = 0 (H^p).  d_2 goes 3 -> 2,
    d_3 goes 2 -> 0, d_4 goes from the d_2-kernel in row 3 to row 0 modulo
    the d_3-image.
    """
    def h(k: int) -> AbelianGroup:
        return H[k] if 0 <= k < len(H) else ZERO

    def m2(k: int) -> AbelianGroup:
        return mod2_entry(h(k), h(k + 1))

    P2, P3, P4, inj3, surj4, inj4 = _so3_slots(Ns)
    domains2 = [sorted(hom_outcomes(h(p), m2(p + 2)), key=str) for p in P2]
    for choice in itertools.product(*domains2):
        kern2 = {p: kc[0] for p, kc in zip(P2, choice)}
        cok2 = {p: kc[1] for p, kc in zip(P2, choice)}
        ok = True
        for p in P3:
            src = cok2[p - 2]  # E_3^{p,2}
            options = [
                (k, q) for k, q in hom_outcomes(src, h(p + 3))
                if not (p in inj3 and not k.is_trivial)
            ]
            # d_4 starting at column p-1 lands in E_4^{p+3,0}, the cokernel above
            s = p - 1
            if s in P4 and (s in surj4 or s in inj4):
                options = [
                    (k, q) for k, q in options
                    if (s not in surj4 or surjects(kern2[s], q))
                    and (s not in inj4 or embeds(kern2[s], q))
                    and (s not in surj4 or s not in inj4 or kern2[s] == q)
                ]
            if not options:
                ok = False
                break
        if ok:
            return True
    return False


def check_so3(assignment: TorsionAssignment, problem: TorsionProblem) -> ConstraintResult:
    """H^N(V_{n,3}) = 0 at the listed N must be reachable by some d_2, d_3, d_4."""
    if not problem.so3_vanishing:
        return ConstraintResult("so3", True, reason="no SO(3) data")
    H = cohomology_from(assignment, problem.betti)
    failing = tuple(N for N in problem.so3_vanishing if not _so3_feasible(H, (N,)))
    if failing:
        return ConstraintResult(
            "so3", False, failing[0],
            "E_inf cannot vanish on anti-diagonal" + ("s " if len(failing) > 1 else " ")
            + ", ".join(map(str, failing)),
            failing,
        )
    if not _so3_feasible(H, tuple(problem.so3_vanishing)):
        Ns = tuple(problem.so3_vanishing)
        return ConstraintResult("so3", False, Ns[0], "anti-diagonals cannot vanish simultaneously", Ns)
    return ConstraintResult("so3", True)


CHECKS = {
    "uct_mod2": check_uct_mod2,
    "duality": check_duality,
    "sphere": check_sphere_assembly,
    "so3": check_so3,
}


def verify(assignment: TorsionAssignment, problem: TorsionProblem, checks: Sequence[str] = CHECK_ORDER) -> ConstraintReport:
    return ConstraintReport(tuple(CHECKS[c](assignment, problem) for c in checks))


@dataclass
class SolveResult:
    solutions: list[TorsionAssignment]
    eliminated: list[tuple[TorsionAssignment, ConstraintResult]]
    examined: int

    @property
    def unique(self) -> TorsionAssignment | None:
        return self.solutions[0] if len(self.solutions) == 1 else None

    def elimination_summary(self) -> list[tuple[str, int, int, TorsionAssignment]]:
        """(constraint, degree, count, first example) grouped in check order."""
        groups: dict[tuple[str, int], list] = {}
        for a, r in self.eliminated:
            groups.setdefault((r.name, r.degree), []).append(a)
        order = {c: i for i, c in enumerate(CHECK_ORDER)}
        return [
            (name, deg, len(v), v[0])
            for (name, deg), v in sorted(groups.items(), key=lambda kv: (order[kv[0][0]], kv[0][1]))
        ]


def solve(
    problem: TorsionProblem,
    checks: Sequence[str] = CHECK_ORDER,
    keep_log: bool = False,
) -> SolveResult:
    """Every assignment of candidates to the unknowns that passes ``checks``.

    Checks run in the cheap-first order of :data:`CHECK_ORDER`, stopping at
    the first failure.  Candidates are ordered canonically so the output is
    deterministic.
    """
    unknown_checks = set(checks) - set(CHECKS)
    if unknown_checks:
        raise ValueError(f"unknown checks: {sorted(unknown_checks)}")
    ordered = [c for c in CHECK_ORDER if c in checks]
    cands = sorted(set(problem.candidates), key=AbelianGroup.sort_key)
    solutions, eliminated = [], []
    examined = 0
    layout = _layout(problem)
    for values in itertools.product(cands, repeat=len(problem.unknowns)):
        examined += 1
        a = TorsionAssignment._fast(problem.n, layout, values)
        for c in ordered:
            r = CHECKS[c](a, problem)
            if not r.passed:
                if keep_log:
                    eliminated.append((a, r))
                break
        else:
            solutions.append(a)
    solutions.sort(key=TorsionAssignment.sort_key)
    return SolveResult(solutions, eliminated, examined)


def mod2_row(assignment: TorsionAssignment, problem: TorsionProblem) -> list[int]:
    return mod2_dimensions(cohomology_from(assignment, problem.betti))
