"""Finitely generated abelian groups over exact integers.

Everything here works with Python ints, so intermediate swell in Smith
normal form reductions never overflows.  Groups are kept in invariant-factor
form ``Z^r ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t}`` with ``d_1 | d_2 | ... | d_t``, which
makes structural equality the same as isomorphism.

The decision procedures at the bottom (:func:`exists_extension`,
:func:`exists_hom_with`, :func:`hom_outcomes`) answer the questions a
spectral-sequence argument keeps asking: can these graded pieces assemble to
that group, and can some map between two groups have this kernel and that
cokernel?

>>> G = AbelianGroup.parse("Z + Z_2")
>>> str(G), tensor_Z2(G), tor_Z2(G)
('Z ⊕ Z_2', 2, 1)
>>> exists_extension(AbelianGroup.parse("Z"), AbelianGroup.parse("Z"), Z2)
True
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from sympy import factorint

from .syntax import DslError, TokenStream, parse_group_parts

__all__ = [
    "IntegerMatrix",
    "Lattice",
    "SmithForm",
    "smith_normal_form",
    "AbelianGroup",
    "ZERO",
    "Z",
    "Z2",
    "direct_sum",
    "cokernel",
    "CokernelPresentation",
    "GroupHom",
    "tensor_Z2",
    "tor_Z2",
    "mod2_dimensions",
    "subgroup_types",
    "extension_middles",
    "exists_extension",
    "exists_hom_with",
    "embeds",
    "surjects",
    "hom_outcomes",
]


# ---------------------------------------------------------------------------
# integer matrices and Smith normal form
# ---------------------------------------------------------------------------


class IntegerMatrix:
    """Immutable rows x cols matrix of Python ints."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if entries is None:
            data = tuple((0,) * cols for _ in range(rows))
        else:
            data = tuple(tuple(int(x) for x in row) for row in entries)
        if len(data) != rows or any(len(row) != cols for row in data):
            raise ValueError(f"entry count does not match a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntegerMatrix":
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.entries]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = other.columns()
        return IntegerMatrix(
            self.rows,
            other.cols,
            [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.entries],
        )

    def apply(self, v: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.entries]

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntegerMatrix)
            and (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}, {self.cols}, {[list(r) for r in self.entries]})"


@dataclass(frozen=True)
class SmithForm:
    """Result of :func:`smith_normal_form`: ``U @ m @ V == D``.

    ``U_inv`` is kept because graded components need to lift canonical
    coordinates back to monomial coordinates.
    """

    diagonal: tuple[int, ...]
    U: IntegerMatrix
    V: IntegerMatrix
    U_inv: IntegerMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def D(self, rows: int, cols: int) -> IntegerMatrix:
        return IntegerMatrix(
            rows, cols, [[self.diagonal[i] if i == j else 0 for j in range(cols)] for i in range(rows)]
        )


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms.

    Pivoting is deterministic: the smallest nonzero magnitude in the active
    block, ties going to the leftmost column and then the topmost row.
    """
    R, C = m.rows, m.cols
    a = [list(r) for r in m.entries]
    U = [[int(i == j) for j in range(R)] for i in range(R)]
    Ui = [[int(i == j) for j in range(R)] for i in range(R)]
    V = [[int(i == j) for j in range(C)] for i in range(C)]

    def row_add(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src
        ad, as_ = a[dst], a[src]
        for j in range(C):
            if as_[j]:
                ad[j] += c * as_[j]
        ud, us = U[dst], U[src]
        for j in range(R):
            if us[j]:
                ud[j] += c * us[j]
        for row in Ui:  # inverse: col_src -= c * col_dst
            if row[dst]:
                row[src] -= c * row[dst]

    def row_swap(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for row in Ui:
            row[i], row[k] = row[k], row[i]

    def col_add(dst: int, src: int, c: int) -> None:
        for row in a:
            if row[src]:
                row[dst] += c * row[src]
        for row in V:
            if row[src]:
                row[dst] += c * row[src]

    def col_swap(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(R, C):
        live = [(abs(a[i][j]), j, i) for j in range(t, C) for i in range(t, R) if a[i][j]]
        if not live:
            break
        _, j, i = min(live)
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, R):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
            for j in range(t + 1, C):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
            leftovers = [(abs(a[i][t]), t, i) for i in range(t + 1, R) if a[i][t]]
            leftovers += [(abs(a[t][j]), j, t) for j in range(t + 1, C) if a[t][j]]
            if leftovers:
                _, j, i = min(leftovers)
                if i != t:
                    row_swap(t, i)
                if j != t:
                    col_swap(t, j)
                continue
            bad = next(
                ((i, j) for j in range(t + 1, C) for i in range(t + 1, R) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if a[t][t] < 0:
            for j in range(C):
                a[t][j] = -a[t][j]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1

    diag = tuple(a[i][i] for i in range(min(R, C)))
    return SmithForm(diag, IntegerMatrix(R, R, U), IntegerMatrix(C, C, V), IntegerMatrix(R, R, Ui))


class Lattice:
    """Sub-lattice of Z^n kept as an echelon basis; supports incremental growth.

    Basis vectors are keyed by their pivot column and vanish before it, so a
    membership test is a single pass of exact divisions.
    """

    def __init__(self, n: int, vectors: Iterable[Sequence[int]] = ()):
        self.n = n
        self._basis: dict[int, list[int]] = {}
        for v in vectors:
            self.add(v)

    def add(self, vec: Sequence[int]) -> None:
        v = list(vec)
        basis = self._basis
        for col in range(self.n):
            if not v[col]:
                continue
            b = basis.get(col)
            if b is None:
                if v[col] < 0:
                    v = [-x for x in v]
                basis[col] = v
                return
            g, x, y = _egcd(b[col], v[col])
            bc, vc = b[col] // g, v[col] // g
            basis[col] = [x * p + y * q for p, q in zip(b, v)]
            v = [vc * p - bc * q for p, q in zip(b, v)]

    def __contains__(self, vec: Sequence[int]) -> bool:
        v = list(vec)
        for col in range(self.n):
            if not v[col]:
                continue
            b = self._basis.get(col)
            if b is None or v[col] % b[col]:
                return False
            q = v[col] // b[col]
            v = [p - q * r for p, r in zip(v, b)]
        return True

    def basis(self) -> list[list[int]]:
        return [self._basis[c] for c in sorted(self._basis)]


def _echelon_basis(vectors: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """A Z-basis (row echelon form) of the lattice spanned by ``vectors``."""
    return Lattice(n, vectors).basis()


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t}`` in invariant-factor form."""

    rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        if any(d < 2 for d in factors):
            raise ValueError(f"invariant factors must be >= 2, got {factors}")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise ValueError(f"invariant factors must form a divisor chain, got {factors}")

    # construction -----------------------------------------------------------

    @classmethod
    def from_orders(cls, rank: int = 0, orders: Iterable[int] = ()) -> "AbelianGroup":
        """Normalise an arbitrary direct sum of cyclic groups.

        Order 0 means an infinite cyclic summand and order 1 a trivial one.
        """
        extra = 0
        primary: dict[int, list[int]] = {}
        for d in orders:
            d = abs(int(d))
            if d == 0:
                extra += 1
            elif d > 1:
                for p, e in factorint(d).items():
                    primary.setdefault(p, []).append(e)
        return cls.from_primary(rank + extra, primary)

    @classmethod
    def from_primary(cls, rank: int, primary: dict[int, Sequence[int]]) -> "AbelianGroup":
        parts = {p: sorted((e for e in es if e > 0), reverse=True) for p, es in primary.items()}
        length = max((len(es) for es in parts.values()), default=0)
        factors = []
        for i in range(length):
            factors.append(math.prod(p ** es[i] for p, es in parts.items() if i < len(es)))
        return cls(rank, tuple(sorted(factors)))

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse ``"0"``, ``"Z^2 ⊕ Z_4"``, ``"Z + Z_2"`` and similar."""
        ts = TokenStream.from_text(text)
        parts = parse_group_parts(ts)
        if ts.peek().kind != "EOF":
            raise DslError("syntax", f"trailing input in group {text!r}", ts.peek().line, ts.peek().column)
        return cls._from_parts(parts)

    @classmethod
    def _from_parts(cls, parts: Sequence[tuple[str, int]]) -> "AbelianGroup":
        rank = sum(r for kind, r in parts if kind == "free")
        return cls.from_orders(rank, [d for kind, d in parts if kind == "cyclic"])

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroup":
        return cls.from_orders(int(data["rank"]), data.get("torsion", ()))

    # queries ----------------------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def torsion(self) -> "AbelianGroup":
        return AbelianGroup(0, self.invariant_factors)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Coordinate moduli in canonical order: torsion factors, then 0 per free summand."""
        return self.invariant_factors + (0,) * self.rank

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.rank

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(factorint(self.torsion_order))) if self.invariant_factors else ()

    def primary(self, p: int) -> tuple[int, ...]:
        """Partition (descending exponents) of the p-primary torsion part."""
        out = []
        for d in self.invariant_factors:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                out.append(e)
        return tuple(sorted(out, reverse=True))

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_orders(
            self.rank + other.rank, self.invariant_factors + other.invariant_factors
        )

    __add__ = direct_sum

    # serialisation ----------------------------------------------------------

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z_{d}" for d in self.invariant_factors)
        return " ⊕ ".join(parts)

    def ascii(self) -> str:
        return str(self).replace(" ⊕ ", " + ")

    def latex(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.rank == 1:
            parts.append(r"\mathbb Z")
        elif self.rank > 1:
            parts.append(rf"\mathbb Z^{{{self.rank}}}")
        parts.extend(rf"\mathbb Z_{{{d}}}" if d > 9 else rf"\mathbb Z_{d}" for d in self.invariant_factors)
        return r"\oplus ".join(parts)

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.invariant_factors)}

    def sort_key(self) -> tuple:
        return (self.rank, len(self.invariant_factors), self.invariant_factors)


ZERO = AbelianGroup()
Z = AbelianGroup(1)
Z2 = AbelianGroup(0, (2,))


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    return reduce(AbelianGroup.direct_sum, groups, ZERO)


def tensor_Z2(g: AbelianGroup) -> int:
    """dim over Z_2 of g ⊗ Z_2."""
    return g.rank + tor_Z2(g)


def tor_Z2(g: AbelianGroup) -> int:
    """dim over Z_2 of Tor(g, Z_2)."""
    return sum(1 for d in g.invariant_factors if d % 2 == 0)


def mod2_dimensions(groups: Sequence[AbelianGroup]) -> list[int]:
    """dim H^k(X; Z_2) from the integral groups H^k(X; Z), k = 0..len-1.

    Universal coefficients: H^k(X; Z_2) = H^k ⊗ Z_2 ⊕ Tor(H^{k+1}, Z_2), with
    H^{k+1} taken as 0 past the end of the table.
    """
    out = []
    for k, g in enumerate(groups):
        nxt = groups[k + 1] if k + 1 < len(groups) else ZERO
        out.append(tensor_Z2(g) + tor_Z2(nxt))
    return out


# ---------------------------------------------------------------------------
# cokernels and homomorphisms in canonical coordinates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CokernelPresentation:
    """``Z^n / L`` together with the change of basis to canonical coordinates.

    ``reduce`` sends a vector of Z^n to canonical coordinates of the quotient
    (torsion coordinates reduced mod their order, then free coordinates);
    ``lift`` is a section of it.
    """

    n: int
    group: AbelianGroup
    U: IntegerMatrix
    U_inv: IntegerMatrix
    diagonal: tuple[int, ...]  # length n; 0 marks a free direction

    @property
    def _kept(self) -> list[int]:
        return [i for i, d in enumerate(self.diagonal) if d != 1]

    def reduce(self, vector: Sequence[int]) -> tuple[int, ...]:
        y = self.U.apply(vector)
        return tuple(y[i] % self.diagonal[i] if self.diagonal[i] else y[i] for i in self._kept)

    def lift(self, coords: Sequence[int]) -> list[int]:
        y = [0] * self.n
        for i, c in zip(self._kept, coords):
            y[i] = c
        return self.U_inv.apply(y)

    def contains(self, vector: Sequence[int]) -> bool:
        """True iff ``vector`` lies in the relation lattice L."""
        return not any(self.reduce(vector))


def presentation(n: int, relations: Iterable[Sequence[int]]) -> CokernelPresentation:
    """Cokernel of the relation vectors (each of length n) with transforms."""
    basis = _echelon_basis(relations, n)
    m = IntegerMatrix.from_columns(basis, n) if basis else IntegerMatrix(n, 0)
    snf = smith_normal_form(m)
    diag = list(snf.diagonal) + [0] * (n - len(snf.diagonal))
    group = AbelianGroup(
        sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1)
    )
    return CokernelPresentation(n, group, snf.U, snf.U_inv, tuple(diag))


def cokernel(relations: IntegerMatrix) -> AbelianGroup:
    """Z^n modulo the column span of an n-row relation matrix."""
    return presentation(relations.rows, relations.columns()).group


def _subquotient(lattice: Sequence[Sequence[int]], sub: Sequence[Sequence[int]], n: int) -> AbelianGroup:
    """L / N for lattices N ⊆ L ⊆ Z^n given by spanning vectors."""
    basis = _echelon_basis(lattice, n)
    if not basis:
        return ZERO
    B = IntegerMatrix.from_columns(basis, n)
    snf = smith_normal_form(B)
    coords = []
    for v in sub:
        w = snf.U.apply(v)
        z = []
        for i, wi in enumerate(w):
            d = snf.diagonal[i] if i < len(basis) else 0
            if d == 0:
                if wi:
                    raise ValueError("sub-lattice is not contained in the lattice")
                continue
            if wi % d:
                raise ValueError("sub-lattice is not contained in the lattice")
            z.append(wi // d)
        coords.append(snf.V.apply(z))
    return presentation(len(basis), coords).group


def _nullspace(m: IntegerMatrix) -> list[list[int]]:
    snf = smith_normal_form(m)
    r = snf.rank
    return [snf.V.column(j) for j in range(r, m.cols)]


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between groups written in canonical coordinates.

    ``matrix`` has one row per target coordinate and one column per source
    coordinate (see :attr:`AbelianGroup.moduli`).
    """

    source: AbelianGroup
    target: AbelianGroup
    matrix: IntegerMatrix

    def __post_init__(self) -> None:
        if (self.matrix.rows, self.matrix.cols) != (self.target.ngens, self.source.ngens):
            raise ValueError("matrix shape does not match the groups")
        for j, d in enumerate(self.source.moduli):
            if d and not self._target_zero([d * x for x in self.matrix.column(j)]):
                raise ValueError("matrix does not define a homomorphism")

    @classmethod
    def zero(cls, source: AbelianGroup, target: AbelianGroup) -> "GroupHom":
        return cls(source, target, IntegerMatrix(target.ngens, source.ngens))

    def _target_zero(self, v: Sequence[int]) -> bool:
        return all((x % d == 0) if d else x == 0 for x, d in zip(v, self.target.moduli))

    def _target_relations(self) -> list[list[int]]:
        t = self.target.ngens
        return [[d if i == j else 0 for i in range(t)] for j, d in enumerate(self.target.moduli) if d]

    def _source_relations(self) -> list[list[int]]:
        s = self.source.ngens
        return [[d if i == j else 0 for i in range(s)] for j, d in enumerate(self.source.moduli) if d]

    def __call__(self, coords: Sequence[int]) -> tuple[int, ...]:
        y = self.matrix.apply(coords)
        return tuple(x % d if d else x for x, d in zip(y, self.target.moduli))

    def cokernel(self) -> AbelianGroup:
        return presentation(self.target.ngens, self.matrix.columns() + self._target_relations()).group

    def image(self) -> AbelianGroup:
        return _subquotient(
            self.matrix.columns() + self._target_relations(), self._target_relations(), self.target.ngens
        )

    def kernel(self) -> AbelianGroup:
        s, t = self.source.ngens, self.target.ngens
        rel = self._target_relations()
        if s == 0:
            return ZERO
        big = IntegerMatrix.from_columns(self.matrix.columns() + rel, t) if t else IntegerMatrix(0, s)
        preimage = [v[:s] for v in _nullspace(big)] if t else [
            [int(i == j) for i in range(s)] for j in range(s)
        ]
        return _subquotient(preimage + self._source_relations(), self._source_relations(), s)

    def is_injective(self) -> bool:
        return self.kernel().is_trivial

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial


# ---------------------------------------------------------------------------
# decision procedures
# ---------------------------------------------------------------------------


def _subpartitions(lam: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All partitions mu with mu_i <= lam_i (subgroup types of a p-group of type lam)."""
    out: list[tuple[int, ...]] = []

    def rec(i: int, prefix: list[int], cap: int) -> None:
        if i == len(lam):
            out.append(tuple(x for x in prefix if x))
            return
        for e in range(min(cap, lam[i]), -1, -1):
            rec(i + 1, prefix + [e], e)

    rec(0, [], lam[0] if lam else 0)
    return sorted(set(out))


def subgroup_types(g: AbelianGroup) -> list[AbelianGroup]:
    """Isomorphism types of subgroups of the torsion part of g (also its quotient types)."""
    primes = g.primes()
    choices = [_subpartitions(g.primary(p)) for p in primes]
    return sorted(
        {AbelianGroup.from_primary(0, dict(zip(primes, combo))) for combo in itertools.product(*choices)},
        key=AbelianGroup.sort_key,
    )


def _embeds(g: AbelianGroup, bound: AbelianGroup) -> bool:
    """g is isomorphic to a subgroup of bound."""
    if g.rank > bound.rank:
        return False
    for p in g.primes():
        lam = bound.primary(p)
        mu = g.primary(p)
        if len(mu) > len(lam) or any(a > b for a, b in zip(mu, lam)):
            return False
    return True


@lru_cache(maxsize=None)
def _middles_p(p: int, a: int, alpha: tuple[int, ...], gamma: tuple[int, ...]) -> frozenset:
    """p-torsion types of the middle term of extensions of Z_(p)-modules.

    Extensions of ``⊕ Z/p^gamma_i`` by ``Z^a ⊕ (⊕ Z/p^alpha_j)``; each class
    is a tuple of elements a_i of A / p^gamma_i A, enumerated exhaustively.
    """
    if not gamma:
        return frozenset([alpha])
    nA = a + len(alpha)
    n = nA + len(gamma)
    base_rel = []
    for j, e in enumerate(alpha):
        v = [0] * n
        v[a + j] = p**e
        base_rel.append(v)
    per_factor = []
    for g in gamma:
        ranges = [range(p**g)] * a + [range(p ** min(g, e)) for e in alpha]
        per_factor.append(list(itertools.product(*ranges)))
    out = set()
    for cls in itertools.product(*per_factor):
        rel = list(base_rel)
        for i, (g, coeffs) in enumerate(zip(gamma, cls)):
            v = [0] * n
            v[nA + i] = p**g
            for k, c in enumerate(coeffs):
                v[k] -= c
            rel.append(v)
        out.add(presentation(n, rel).group.primary(p))
    return frozenset(out)


def embeds(g: AbelianGroup, h: AbelianGroup) -> bool:
    """Is there an injective homomorphism g -> h?"""
    return _embeds(g, h)


def surjects(g: AbelianGroup, h: AbelianGroup) -> bool:
    """Is there a surjective homomorphism g -> h?"""
    if h.rank > g.rank:
        return False
    return any(
        exists_extension(AbelianGroup(g.rank - h.rank, t.invariant_factors), g, h)
        for t in subgroup_types(g)
    )


def _primes(*groups: AbelianGroup) -> list[int]:
    return sorted(set().union(*(g.primes() for g in groups)))


@lru_cache(maxsize=None)
def extension_middles(sub: AbelianGroup, quot: AbelianGroup) -> frozenset:
    """Every isomorphism type B admitting 0 -> sub -> B -> quot -> 0."""
    primes = _primes(sub, quot)
    per_prime = [sorted(_middles_p(p, sub.rank, sub.primary(p), quot.primary(p))) for p in primes]
    rank = sub.rank + quot.rank
    return frozenset(
        AbelianGroup.from_primary(rank, dict(zip(primes, combo)))
        for combo in itertools.product(*per_prime)
    )


@lru_cache(maxsize=None)
def exists_extension(sub: AbelianGroup, total: AbelianGroup, quot: AbelianGroup) -> bool:
    """Is there a short exact sequence 0 -> sub -> total -> quot -> 0?"""
    if total.rank != sub.rank + quot.rank:
        return False
    for p in _primes(sub, total, quot):
        if total.primary(p) not in _middles_p(p, sub.rank, sub.primary(p), quot.primary(p)):
            return False
    return True


def _image_types(g: AbelianGroup, h: AbelianGroup) -> list[AbelianGroup]:
    """Candidate image types of maps g -> h: subgroups of h of rank <= rank g."""
    tors = subgroup_types(h)
    return [
        AbelianGroup(r, t.invariant_factors)
        for r in range(min(g.rank, h.rank) + 1)
        for t in tors
    ]


def exists_hom_with(g: AbelianGroup, h: AbelianGroup, kernel: AbelianGroup, cokernel: AbelianGroup) -> bool:
    """Does some homomorphism g -> h have the given kernel and cokernel types?"""
    rank_m = g.rank - kernel.rank
    if rank_m < 0 or h.rank - cokernel.rank != rank_m:
        return False
    for t in subgroup_types(h):
        m = AbelianGroup(rank_m, t.invariant_factors)
        if exists_extension(kernel, g, m) and exists_extension(m, h, cokernel):
            return True
    return False


@lru_cache(maxsize=None)
def hom_outcomes(
    g: AbelianGroup, h: AbelianGroup, coker_bound: AbelianGroup | None = None
) -> frozenset:
    """All (kernel, cokernel) type pairs realised by homomorphisms g -> h.

    When a free part of the image can sit inside a free part of h, the
    cokernel may carry torsion of any order; ``coker_bound`` then restricts
    cokernels to types embeddable in it (and is required).  A bound is also
    applied as a filter in the finite case.
    """
    out = set()
    for m in _image_types(g, h):
        kernels = [
            AbelianGroup(g.rank - m.rank, t.invariant_factors)
            for t in subgroup_types(g)
            if exists_extension(AbelianGroup(g.rank - m.rank, t.invariant_factors), g, m)
        ]
        if not kernels:
            continue
        q_rank = h.rank - m.rank
        if m.rank > 0 and h.rank > 0:
            if coker_bound is None:
                raise ValueError(
                    f"cokernel torsion of maps {g} -> {h} is unbounded; pass coker_bound"
                )
            q_tors = subgroup_types(coker_bound)
        else:
            q_tors = subgroup_types(h)
        quots = []
        for t in q_tors:
            q = AbelianGroup(q_rank, t.invariant_factors)
            if coker_bound is not None and not _embeds(q, coker_bound):
                continue
            if exists_extension(m, h, q):
                quots.append(q)
        out.update((k, q) for k in kernels for q in quots)
    return frozenset(out)
