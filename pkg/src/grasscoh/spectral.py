"""Spectral-sequence pages for sphere bundles and SO(3)-bundles.

The Gysin engine handles a sphere bundle ``S^m -> E -> B`` whose only
differential is ``d_{m+1}(x ⊗ s) = x·e ⊗ 1``.  The SO(3) builder only lays
out the E2 page (rows 0, 2 and 3); the existence questions about its
differentials are answered by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .abelian import (
    Z,
    ZERO,
    AbelianGroup,
    GroupHom,
    IntegerMatrix,
    direct_sum,
    extension_middles,
    tensor_Z2,
    tor_Z2,
)
from .graded_ring import IntPolynomial, RingPresentation, product

# H^q(SO(3); Z) for q = 0..3; standard, not derived here
SO3_COHOMOLOGY = (Z, ZERO, AbelianGroup(0, (2,)), Z)


@dataclass(frozen=True)
class SymbolicGroup:
    """A group with unknown summands, e.g. ``Z ⊕ T_8`` or ``T_6⊗Z_2 ⊕ Z_2``.

    ``parts`` holds concrete groups and ``(functor, name)`` pairs where the
    functor is ``""`` (the unknown itself), ``"tensor"`` or ``"tor"``.
    """

    parts: tuple = ()

    @property
    def unknowns(self) -> tuple[str, ...]:
        return tuple(p[1] for p in self.parts if isinstance(p, tuple))

    @property
    def is_trivial(self) -> bool:
        return all(isinstance(p, AbelianGroup) and p.is_trivial for p in self.parts)

    def resolve(self, values: Mapping[str, AbelianGroup]) -> AbelianGroup:
        out = []
        for p in self.parts:
            if isinstance(p, AbelianGroup):
                out.append(p)
                continue
            functor, name = p
            g = values[name]
            if functor == "tensor":
                g = AbelianGroup(0, (2,) * tensor_Z2(g))
            elif functor == "tor":
                g = AbelianGroup(0, (2,) * tor_Z2(g))
            out.append(g)
        return direct_sum(*out)

    def _fmt(self, concrete, name) -> str:
        pieces = []
        for p in self.parts:
            if isinstance(p, AbelianGroup):
                if not p.is_trivial:
                    pieces.append(concrete(p))
            else:
                pieces.append(name(*p))
        return " ⊕ ".join(pieces) if pieces else "0"

    def __str__(self) -> str:
        def name(functor: str, n: str) -> str:
            return {"": n, "tensor": f"{n}⊗Z_2", "tor": f"Tor({n}, Z_2)"}[functor]

        return self._fmt(str, name)

    def latex(self) -> str:
        def name(functor: str, n: str) -> str:
            base, _, idx = n.partition("_")
            sym = f"{base}_{{{idx}}}" if idx else base
            return {"": sym, "tensor": f"{sym}\\otimes \\mathbb Z_2", "tor": f"\\mathrm{{Tor}}({sym},\\mathbb Z_2)"}[functor]

        return self._fmt(AbelianGroup.latex, name).replace(" ⊕ ", "\\oplus ")


GroupLike = AbelianGroup | SymbolicGroup


def _is_zero(g: GroupLike) -> bool:
    return g.is_trivial


def _latex(g: GroupLike) -> str:
    return g.latex()


@dataclass(frozen=True)
class BigradedEntry:
    p: int
    q: int
    group: GroupLike
    labels: tuple[str, ...] = ()


@dataclass(frozen=True)
class DifferentialRecord:
    source: tuple[int, int]
    target: tuple[int, int]
    hom: GroupHom | None
    note: str = ""


@dataclass
class BigradedPage:
    r: int
    entries: dict[tuple[int, int], BigradedEntry] = field(default_factory=dict)
    differentials: list[DifferentialRecord] = field(default_factory=list)
    title: str = ""

    def group(self, p: int, q: int) -> GroupLike:
        e = self.entries.get((p, q))
        return e.group if e else ZERO

    def add(self, p: int, q: int, group: GroupLike, labels: Sequence[str] = ()) -> None:
        self.entries[(p, q)] = BigradedEntry(p, q, group, tuple(labels))

    def record(self, rec: DifferentialRecord) -> None:
        dp, dq = rec.target[0] - rec.source[0], rec.target[1] - rec.source[1]
        if (dp, dq) != (self.r, 1 - self.r):
            raise ValueError(f"differential {rec.source}->{rec.target} does not have bidegree ({self.r}, {1 - self.r})")
        self.differentials.append(rec)

    def check_dd(self) -> bool:
        """d∘d = 0 wherever two recorded differentials compose."""
        by_source = {d.source: d for d in self.differentials if d.hom is not None}
        for d in self.differentials:
            nxt = by_source.get(d.target)
            if d.hom is None or nxt is None:
                continue
            for j in range(d.hom.source.ngens):
                e = [int(i == j) for i in range(d.hom.source.ngens)]
                if any(nxt.hom(d.hom(e))):
                    return False
        return True

    @property
    def p_range(self) -> range:
        ps = [p for p, _ in self.entries]
        return range(min(ps), max(ps) + 1) if ps else range(0)

    @property
    def q_values(self) -> list[int]:
        qs = {q for _, q in self.entries}
        return list(range(max(qs), -1, -1)) if qs else []


@dataclass(frozen=True)
class SphereBundleSpec:
    """A sphere bundle S^m -> E -> base with Euler class ``euler``."""

    base: RingPresentation
    fiber_dim: int
    euler: IntPolynomial

    def __post_init__(self) -> None:
        if self.fiber_dim <= 0:
            raise ValueError("fiber dimension must be positive")
        d = self.base.poly_degree(self.euler)
        if d is not None and d != self.fiber_dim + 1:
            raise ValueError(f"Euler class has degree {d}, expected {self.fiber_dim + 1}")


@dataclass(frozen=True)
class GysinResult:
    e2: BigradedPage
    e_inf: BigradedPage
    total: tuple[AbelianGroup, ...]
    candidates: dict
    ambiguous: frozenset

    def nonzero(self) -> dict[int, AbelianGroup]:
        return {k: g for k, g in enumerate(self.total) if not g.is_trivial}


def _note(h: GroupHom) -> str:
    if h.source == Z and h.target == Z:
        k = abs(h.matrix[0, 0])
        return "iso" if k == 1 else f"*{k}"
    inj, sur = h.is_injective(), h.is_surjective()
    if inj and sur:
        return "iso"
    return "mono" if inj else "epi" if sur else ""


def gysin_total(spec: SphereBundleSpec) -> GysinResult:
    """Run the two-row spectral sequence of a sphere bundle to E_∞ and assemble."""
    base, m = spec.base, spec.fiber_dim
    top = base.top_degree
    r = m + 1
    e2 = BigradedPage(r, title="E2")
    einf = BigradedPage(r + 1, title="E_inf")
    groups = base.groups()
    labels = [base.component(k).labels() for k in range(top + 1)]
    for p in range(top + 1):
        for q in (0, m):
            e2.add(p, q, groups[p], labels[p])

    euler = base.element(spec.euler, m + 1)
    kernels: list[AbelianGroup] = []
    cokernels: list[AbelianGroup] = [groups[p] for p in range(top + 1)]
    for p in range(top + 1):
        if p + r > top:
            kernels.append(groups[p])
            continue
        src, dst = base.component(p), base.component(p + r)
        cols = [list(product(c, euler).coords) for c in src.generator_classes()]
        mat = IntegerMatrix.from_columns(cols, dst.group.ngens) if cols else IntegerMatrix(dst.group.ngens, 0)
        h = GroupHom(src.group, dst.group, mat)
        e2.record(DifferentialRecord((p, m), (p + r, 0), h, _note(h)))
        kernels.append(h.kernel())
        cokernels[p + r] = h.cokernel()

    for p in range(top + 1):
        einf.add(p, 0, cokernels[p])
        einf.add(p, m, kernels[p])

    total, cands, ambiguous = [], {}, set()
    for n in range(top + m + 1):
        sub = cokernels[n] if n <= top else ZERO
        quot = kernels[n - m] if 0 <= n - m <= top else ZERO
        middles = sorted(extension_middles(sub, quot), key=AbelianGroup.sort_key)
        cands[n] = tuple(middles)
        if len(middles) == 1:
            total.append(middles[0])
        else:
            ambiguous.add(n)
            total.append(sub.direct_sum(quot))
    return GysinResult(e2, einf, tuple(total), cands, frozenset(ambiguous))


# ---------------------------------------------------------------------------
# SO(3)-bundles
# ---------------------------------------------------------------------------


def _as_symbolic(g: GroupLike) -> SymbolicGroup:
    return g if isinstance(g, SymbolicGroup) else SymbolicGroup((g,))


def mod2_entry(hp: GroupLike, hp1: GroupLike) -> GroupLike:
    """H^p(X; Z_2) = H^p ⊗ Z_2 ⊕ Tor(H^{p+1}, Z_2), kept symbolic where needed."""
    if isinstance(hp, AbelianGroup) and isinstance(hp1, AbelianGroup):
        return AbelianGroup(0, (2,) * (tensor_Z2(hp) + tor_Z2(hp1)))
    parts: list = []
    for functor, g in (("tensor", hp), ("tor", hp1)):
        concrete = 0
        for part in _as_symbolic(g).parts:
            if isinstance(part, AbelianGroup):
                concrete += tensor_Z2(part) if functor == "tensor" else tor_Z2(part)
            else:
                parts.append((functor, part[1]))
        if concrete:
            parts.append(AbelianGroup(0, (2,) * concrete))
    return SymbolicGroup(tuple(parts))


def so3_e2_page(base: Sequence[GroupLike], window: range | tuple[int, int]) -> BigradedPage:
    """E2 page of ``SO(3) -> E -> X`` over columns in ``window`` (inclusive bounds).

    ``base[k]`` is H^k(X; Z) for k = 0..dim X; higher degrees are zero.
    """
    lo, hi = (window.start, window.stop - 1) if isinstance(window, range) else window
    if lo < 0 or hi >= len(base) or lo > hi:
        raise ValueError(f"window {lo}..{hi} outside known degrees 0..{len(base) - 1}")

    def h(k: int) -> GroupLike:
        return base[k] if 0 <= k < len(base) else ZERO

    page = BigradedPage(2, title="SO(3) E2")
    for p in range(lo, hi + 1):
        page.add(p, 3, h(p))
        page.add(p, 2, mod2_entry(h(p), h(p + 1)))
        page.add(p, 0, h(p))
    return page


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _cell(entry: BigradedEntry | None, cells: str, fmt: str) -> str:
    if entry is None:
        return ""
    if cells == "labels":
        if _is_zero(entry.group):
            return ""
        text = ", ".join(entry.labels)
        return f"${text}$" if fmt == "latex" and text else text
    if fmt == "latex":
        return f"${_latex(entry.group)}$" if not _is_zero(entry.group) else "0"
    return str(entry.group)


def render_page(page: BigradedPage, format: str = "text", cells: str = "group") -> str:
    """Lay a page out as a grid: rows q (top down), columns p, degree row last."""
    if format not in ("text", "latex"):
        raise ValueError(f"unknown format {format!r}")
    ps = list(page.p_range)
    qs = page.q_values
    rows = [[str(q)] + [_cell(page.entries.get((p, q)), cells, format) for p in ps] for q in qs]
    footer = [""] + [str(p) for p in ps]

    if format == "latex":
        ncol = len(ps) + 1
        lines = ["\\begin{tabular}{" + "|".join("c" * ncol) + "}"]
        for row in rows:
            lines.append(" & ".join(row) + f"\\\\\\cline{{1-{ncol}}}")
        lines.append(" & ".join(footer) + "\\\\")
        lines.append("\\end{tabular}")
        return "\n".join(lines)

    header = ["q\\p"] + footer[1:]
    table = [header] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    out = []
    for i, row in enumerate(table):
        out.append(" | ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
        if i == 0 and rows:
            out.append("-+-".join("-" * w for w in widths))
    for d in page.differentials:
        if d.hom is not None and not any(x for col in d.hom.matrix.columns() for x in col):
            continue
        note = f"  {d.note}" if d.note else ""
        out.append(f"d{page.r}: {d.source} -> {d.target}{note}")
    return "\n".join(out)
