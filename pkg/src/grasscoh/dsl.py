"""Text format for rings, sphere bundles, solver problems and expectations.

A document is a sequence of blocks::

    ring G83 { gen y3:3; gen x4:4; gen x7:7; rel 2*y3; rel y3*x4; top 15; }
    bundle V_7_2 { base G~_7_2; fiber S 1; euler x2; }
    problem g83 { n 8; betti [1, 0, ...]; mod2 {6: 1}; sphere_target W8_2_1;
                  so3_vanish []; candidates [0, Z_2, Z_3]; }
    expect G83 { 3: Z_2, 4: Z, citation: "computed" }

Names may be used before the block that defines them.  Names that no block
defines are looked up in the built-in catalog.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import AbelianGroup
from .graded_ring import GeneratorSpec, RingPresentation
from .spectral import SphereBundleSpec
from .syntax import DslError, Token, TokenStream, parse_group_parts, parse_poly_terms
from .solver import TorsionProblem

__all__ = [
    "DslError",
    "RingDecl",
    "BundleDecl",
    "ProblemDecl",
    "ExpectBlock",
    "DslDocument",
    "parse",
    "format_document",
    "catalog_document",
    "problem_decl",
]


@dataclass(frozen=True)
class RingDecl:
    name: str
    ring: RingPresentation
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def to_dsl(self) -> str:
        return self.ring.to_dsl()


@dataclass(frozen=True)
class BundleDecl:
    name: str
    base: str
    fiber_dim: int
    euler: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def to_dsl(self) -> str:
        return "\n".join([
            f"bundle {self.name} {{",
            f"  base {self.base};",
            f"  fiber S {self.fiber_dim};",
            f"  euler {self.euler};",
            "}",
        ])


@dataclass(frozen=True)
class ProblemDecl:
    name: str
    n: int
    betti: tuple[int, ...]
    mod2: tuple[tuple[int, int, str], ...]
    sphere_target: str
    so3_vanish: tuple[int, ...]
    candidates: tuple[AbelianGroup, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def to_dsl(self) -> str:
        entries = [f"{k}: {v}" + (f" {_quote(c)}" if c else "") for k, v, c in self.mod2]
        if any(c for _, _, c in self.mod2):
            mod2 = "\n" + ",\n".join(f"    {e}" for e in entries) + "\n  "
        else:
            mod2 = ", ".join(entries)
        return "\n".join([
            f"problem {self.name} {{",
            f"  n {self.n};",
            f"  betti [{', '.join(map(str, self.betti))}];",
            f"  mod2 {{{mod2}}};",
            f"  sphere_target {self.sphere_target};",
            f"  so3_vanish [{', '.join(map(str, self.so3_vanish))}];",
            f"  candidates [{', '.join(str(g) for g in self.candidates)}];",
            "}",
        ])


@dataclass(frozen=True)
class ExpectBlock:
    """Expected groups by degree and/or expected torsion T_k of a solved problem."""

    target: str
    groups: tuple[tuple[int, AbelianGroup], ...] = ()
    torsion: tuple[tuple[int, AbelianGroup], ...] = ()
    citation: str = ""
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def to_dsl(self) -> str:
        items = [f"{k}: {g}" for k, g in self.groups]
        items += [f"T_{k}: {g}" for k, g in self.torsion]
        if self.citation:
            items.append(f"citation: {_quote(self.citation)}")
        if not items:
            return f"expect {self.target} {{ }}"
        lines, cur = [], ""
        for item in items:
            if cur and len(cur) + len(item) > 72:
                lines.append(cur.rstrip())
                cur = ""
            cur += item + ", "
        lines.append(cur.rstrip(", "))
        body = ",\n".join("  " + line.rstrip(",") for line in lines)
        return f"expect {self.target} {{\n{body}\n}}"


Declaration = RingDecl | BundleDecl | ProblemDecl


def _quote(s: str) -> str:
    if '"' in s or "\n" in s:
        raise ValueError(f"cannot quote {s!r}")
    return f'"{s}"'


@dataclass(frozen=True)
class DslDocument:
    declarations: tuple[Declaration, ...] = ()
    expects: tuple[ExpectBlock, ...] = ()

    def names(self) -> list[str]:
        return [d.name for d in self.declarations]

    def find(self, name: str) -> Declaration | None:
        for d in self.declarations:
            if d.name == name:
                return d
        return None

    @property
    def rings(self) -> list[RingDecl]:
        return [d for d in self.declarations if isinstance(d, RingDecl)]

    @property
    def bundles(self) -> list[BundleDecl]:
        return [d for d in self.declarations if isinstance(d, BundleDecl)]

    @property
    def problems(self) -> list[ProblemDecl]:
        return [d for d in self.declarations if isinstance(d, ProblemDecl)]

    def ring(self, name: str) -> RingPresentation:
        d = self.find(name)
        if isinstance(d, RingDecl):
            return d.ring
        if d is not None:
            raise KeyError(f"{name} is not a ring")
        from .catalog import get_ring

        return get_ring(name)

    def bundle(self, name: str) -> SphereBundleSpec:
        d = self.find(name)
        if isinstance(d, BundleDecl):
            base = self.ring(d.base)
            return SphereBundleSpec(base, d.fiber_dim, base.poly(d.euler))
        if d is not None:
            raise KeyError(f"{name} is not a bundle")
        from .catalog import get_bundle

        return get_bundle(name)

    def problem(self, name: str) -> TorsionProblem:
        d = self.find(name)
        if isinstance(d, ProblemDecl):
            return TorsionProblem(
                name=d.name,
                n=d.n,
                betti=d.betti,
                mod2_dims={k: v for k, v, _ in d.mod2},
                mod2_citations={k: c for k, _, c in d.mod2 if c},
                sphere_target=tuple(self.ring(d.sphere_target).groups()),
                so3_vanishing=d.so3_vanish,
                candidates=d.candidates,
            )
        if d is not None:
            raise KeyError(f"{name} is not a problem")
        from .catalog import get_problem

        return get_problem(name)

    def expectations_for(self, name: str) -> list[ExpectBlock]:
        return [e for e in self.expects if e.target == name]

    def to_dsl(self) -> str:
        return format_document(self)


def format_document(doc: DslDocument) -> str:
    blocks = [d.to_dsl() for d in doc.declarations] + [e.to_dsl() for e in doc.expects]
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _int(ts: TokenStream, what: str = "an integer") -> int:
    neg = ts.accept("-") is not None
    v = int(ts.expect_kind("INT", what).text)
    return -v if neg else v


def _name(ts: TokenStream, what: str = "a name") -> Token:
    return ts.expect_kind("NAME", what)


def _group(ts: TokenStream) -> AbelianGroup:
    return AbelianGroup._from_parts(parse_group_parts(ts))


def _int_list(ts: TokenStream) -> tuple[int, ...]:
    ts.expect("[")
    out = []
    while not ts.at("]"):
        out.append(_int(ts))
        if not ts.accept(","):
            break
    ts.expect("]")
    return tuple(out)


def _parse_ring(ts: TokenStream, start: Token) -> RingDecl:
    name = _name(ts, "a ring name")
    ts.expect("{")
    gens: list[GeneratorSpec] = []
    raw_rels = []
    top = None
    sign = "graded"
    while not ts.accept("}"):
        kw = ts.peek()
        if ts.accept("gen"):
            g = _name(ts, "a generator name")
            ts.expect(":")
            d = _int(ts, "a generator degree")
            if d <= 0:
                raise DslError("syntax", "generator degree must be positive", g.line, g.column)
            if any(x.name == g.text for x in gens):
                raise DslError("syntax", f"duplicate generator {g.text!r}", g.line, g.column)
            gens.append(GeneratorSpec(g.text, d))
        elif ts.accept("rel"):
            at = ts.peek()
            raw_rels.append((parse_poly_terms(ts), at))
        elif ts.accept("top"):
            top_tok = ts.peek()
            top = _int(ts, "the top degree")
            if top <= 0:
                raise DslError("syntax", "top degree must be positive", top_tok.line, top_tok.column)
        elif ts.accept("sign"):
            rule = _name(ts, "a sign rule")
            if rule.text not in ("graded", "commutative"):
                raise DslError("syntax", f"unknown sign rule {rule.text!r}", rule.line, rule.column)
            sign = rule.text
        else:
            raise ts.error(f"expected gen, rel, top or sign, found {kw.text or 'end of input'!r}")
        ts.expect(";")
    if not gens:
        raise DslError("syntax", f"ring {name.text} has no generators", name.line, name.column)
    if top is None:
        raise DslError("syntax", f"ring {name.text} has no top degree", name.line, name.column)
    shell = RingPresentation(name.text, tuple(gens), (), top, sign)
    rels = []
    for raw, at in raw_rels:
        f = shell.poly_from_terms(raw)
        degs = sorted({shell.degree_of(m) for m, _ in f.terms})
        if len(degs) > 1:
            raise DslError(
                "non-homogeneous",
                f"relation mixes degrees {', '.join(map(str, degs))}",
                at.line,
                at.column,
            )
        if degs and degs[0] > 2 * top:
            raise DslError("syntax", f"relation degree {degs[0]} exceeds twice the top degree", at.line, at.column)
        rels.append(f)
    ring = RingPresentation(name.text, tuple(gens), tuple(rels), top, sign)
    return RingDecl(name.text, ring, start.line, start.column)


def _parse_bundle(ts: TokenStream, start: Token) -> tuple[BundleDecl, tuple]:
    name = _name(ts, "a bundle name")
    ts.expect("{")
    base = fiber = euler = None
    while not ts.accept("}"):
        kw = ts.peek()
        if ts.accept("base"):
            base = _name(ts, "a ring name")
        elif ts.accept("fiber"):
            tok = _name(ts, "a sphere 'S <dim>'")
            if tok.text == "S":
                fiber = _int(ts, "a sphere dimension")
            elif tok.text[:1] == "S" and tok.text[1:].isdigit():
                fiber = int(tok.text[1:])
            else:
                raise DslError("syntax", f"expected a sphere, found {tok.text!r}", tok.line, tok.column)
            if fiber <= 0:
                raise DslError("syntax", "sphere dimension must be positive", tok.line, tok.column)
        elif ts.accept("euler"):
            euler = (parse_poly_terms(ts), kw)
        else:
            raise ts.error(f"expected base, fiber or euler, found {kw.text or 'end of input'!r}")
        ts.expect(";")
    for field_name, v in (("base", base), ("fiber", fiber), ("euler", euler)):
        if v is None:
            raise DslError("syntax", f"bundle {name.text} has no {field_name}", name.line, name.column)
    decl = BundleDecl(name.text, base.text, fiber, "", start.line, start.column)
    return decl, (base, euler)


def _parse_problem(ts: TokenStream, start: Token) -> tuple[ProblemDecl, Token]:
    name = _name(ts, "a problem name")
    ts.expect("{")
    vals: dict = {}
    target = None
    while not ts.accept("}"):
        kw = ts.peek()
        key = kw.text
        if key in vals or (key == "sphere_target" and target is not None):
            raise DslError("syntax", f"{key} given twice", kw.line, kw.column)
        if ts.accept("n"):
            vals["n"] = _int(ts)
        elif ts.accept("betti"):
            vals["betti"] = _int_list(ts)
        elif ts.accept("mod2"):
            ts.expect("{")
            entries = []
            while not ts.at("}"):
                k = _int(ts, "a degree")
                ts.expect(":")
                v = _int(ts, "a dimension")
                cite = ""
                if ts.peek().kind == "STRING":
                    cite = ts.next().text[1:-1]
                entries.append((k, v, cite))
                if not ts.accept(","):
                    break
            ts.expect("}")
            vals["mod2"] = tuple(sorted(entries))
        elif ts.accept("sphere_target"):
            target = _name(ts, "a ring name")
        elif ts.accept("so3_vanish"):
            vals["so3_vanish"] = _int_list(ts)
        elif ts.accept("candidates"):
            ts.expect("[")
            groups = []
            while not ts.at("]"):
                groups.append(_group(ts))
                if not ts.accept(","):
                    break
            ts.expect("]")
            vals["candidates"] = tuple(groups)
        else:
            raise ts.error(f"unknown problem field {key or 'end of input'!r}")
        ts.expect(";")
    for key in ("n", "betti"):
        if key not in vals:
            raise DslError("syntax", f"problem {name.text} has no {key}", name.line, name.column)
    if target is None:
        raise DslError("syntax", f"problem {name.text} has no sphere_target", name.line, name.column)
    if "candidates" not in vals:
        from .solver import DEFAULT_CANDIDATES

        vals["candidates"] = DEFAULT_CANDIDATES
    decl = ProblemDecl(
        name.text, vals["n"], vals["betti"], vals.get("mod2", ()), target.text,
        vals.get("so3_vanish", ()), vals["candidates"], start.line, start.column,
    )
    return decl, target


def _parse_expect(ts: TokenStream, start: Token) -> ExpectBlock:
    target = _name(ts, "a target name")
    ts.expect("{")
    groups, torsion, citation = {}, {}, ""
    while not ts.at("}"):
        tok = ts.peek()
        if tok.kind == "INT":
            k = int(ts.next().text)
            ts.expect(":")
            if k in groups:
                raise DslError("syntax", f"degree {k} given twice", tok.line, tok.column)
            groups[k] = _group(ts)
        elif tok.kind == "NAME" and tok.text == "citation":
            ts.next()
            ts.expect(":")
            citation = ts.expect_kind("STRING", "a quoted citation").text[1:-1]
        elif tok.kind == "NAME" and tok.text.startswith("T_") and tok.text[2:].isdigit():
            ts.next()
            ts.expect(":")
            torsion[int(tok.text[2:])] = _group(ts)
        else:
            raise ts.error(f"expected a degree, T_k or citation, found {tok.text or 'end of input'!r}")
        if not (ts.accept(",") or ts.accept(";")):
            break
    ts.expect("}")
    return ExpectBlock(
        target.text, tuple(sorted(groups.items())), tuple(sorted(torsion.items())),
        citation, start.line, start.column,
    )


def parse(text: str) -> DslDocument:
    """Parse a document, then resolve cross references in a second pass."""
    ts = TokenStream.from_text(text)
    decls: list[Declaration] = []
    expects: list[ExpectBlock] = []
    pending_bundles = []
    pending_problems = []
    seen: dict[str, Token] = {}
    while ts.peek().kind != "EOF":
        start = ts.peek()
        if ts.accept("ring"):
            d = _parse_ring(ts, start)
        elif ts.accept("bundle"):
            d, refs = _parse_bundle(ts, start)
            pending_bundles.append((len(decls), refs))
        elif ts.accept("problem"):
            d, target = _parse_problem(ts, start)
            pending_problems.append(target)
        elif ts.accept("expect"):
            expects.append(_parse_expect(ts, start))
            continue
        else:
            raise ts.error(f"expected ring, bundle, problem or expect, found {start.text!r}")
        if d.name in seen:
            raise DslError("syntax", f"{d.name} is already defined", start.line, start.column)
        seen[d.name] = start
        decls.append(d)

    doc = DslDocument(tuple(decls), tuple(expects))

    def ring_or_error(tok: Token) -> RingPresentation:
        try:
            return doc.ring(tok.text)
        except KeyError:
            raise DslError("unresolved", f"no ring named {tok.text!r}", tok.line, tok.column) from None

    # second pass: everything that refers to other names
    for i, (base_tok, (raw, at)) in pending_bundles:
        base = ring_or_error(base_tok)
        euler = base.poly_from_terms(raw)
        degs = sorted({base.degree_of(m) for m, _ in euler.terms})
        if len(degs) > 1:
            raise DslError("non-homogeneous", f"Euler class mixes degrees {', '.join(map(str, degs))}", at.line, at.column)
        b = decls[i]
        if degs and degs[0] != b.fiber_dim + 1:
            raise DslError(
                "syntax", f"Euler class has degree {degs[0]}, expected {b.fiber_dim + 1}", at.line, at.column
            )
        decls[i] = BundleDecl(b.name, b.base, b.fiber_dim, base.format(euler), b.line, b.column)
    for target in pending_problems:
        ring_or_error(target)
    doc = DslDocument(tuple(decls), tuple(expects))
    for d in doc.problems:
        try:
            doc.problem(d.name)
        except ValueError as exc:
            raise DslError("syntax", str(exc), d.line, d.column) from None
    for e in doc.expects:
        if doc.find(e.target) is None and not _catalog_knows(e.target):
            raise DslError("unresolved", f"nothing named {e.target!r}", e.line, e.column)
    return doc


def _catalog_knows(name: str) -> bool:
    from . import catalog

    for getter in (catalog.get_space, catalog.get_bundle, catalog.get_problem):
        try:
            getter(name)
            return True
        except KeyError:
            pass
    return False


# ---------------------------------------------------------------------------
# catalog export
# ---------------------------------------------------------------------------


def problem_decl(problem: TorsionProblem, sphere_target: str) -> ProblemDecl:
    return ProblemDecl(
        problem.name, problem.n, problem.betti,
        tuple((k, v, problem.mod2_citations.get(k, "")) for k, v in sorted(problem.mod2_dims.items())),
        sphere_target, problem.so3_vanishing, problem.candidates,
    )


def catalog_document() -> DslDocument:
    """Every built-in ring, bundle and problem, with the known tables as expectations."""
    from . import catalog

    decls: list[Declaration] = []
    expects: list[ExpectBlock] = []
    for sid in catalog.space_ids():
        rec = catalog.get_space(sid)
        if rec.presentation is not None:
            decls.append(RingDecl(rec.presentation.name, rec.presentation))
        if rec.integral_groups is not None:
            expects.append(ExpectBlock(
                rec.presentation.name if rec.presentation is not None else sid,
                tuple(sorted(rec.integral_groups.items())),
                citation=rec.citation,
            ))
    for bid in catalog.bundle_ids():
        spec = catalog.get_bundle(bid)
        decls.append(BundleDecl(bid, spec.base.name, spec.fiber_dim, spec.base.format(spec.euler)))
    for pname, target in catalog.PROBLEM_TARGETS.items():
        problem = catalog.get_problem(pname)
        decls.append(problem_decl(problem, target))
        expects.append(ExpectBlock(
            pname,
            torsion=tuple(zip(problem.unknowns, map(AbelianGroup.parse, catalog.EXPECTED_TORSION[pname]))),
            citation="torsion forced by the constraints",
        ))
    return DslDocument(tuple(decls), tuple(expects))
