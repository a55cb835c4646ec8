"""Command-line front end.

Exit codes: 0 success, 1 an expectation did not match, 2 parse error or
unknown name, 3 the solver found no solution or several (without ``--all``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .abelian import AbelianGroup, mod2_dimensions
from .dsl import DslDocument, ExpectBlock, catalog_document, parse
from .graded_ring import RingPresentation, duality_pairing, finite_generating_set
from .solver import CHECK_ORDER, TorsionProblem, cohomology_from, cohomology_symbolic, solve
from .spectral import gysin_total, render_page, so3_e2_page
from .syntax import DslError

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str | None) -> DslDocument:
    if path is None:
        return DslDocument()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _lookup(kind: str, getter, name: str):
    try:
        return getter(name)
    except KeyError:
        raise UsageError(f"unknown {kind} {name!r}") from None


def _compare(blocks: list[ExpectBlock], groups: Sequence[AbelianGroup], out: TextIO) -> bool:
    ok = True
    for b in blocks:
        for k, want in b.groups:
            if not 0 <= k < len(groups):
                print(f"expectation for {b.target}: degree {k} outside 0..{len(groups) - 1}", file=out)
                ok = False
            elif groups[k] != want:
                print(f"mismatch in {b.target} degree {k}: got {groups[k]}, expected {want}", file=out)
                ok = False
    return ok


def _group_table_latex(rows: list[tuple[int, AbelianGroup, list[str]]]) -> str:
    lines = ["\\begin{tabular}{c|c|c}", "$k$ & $H^k$ & generators\\\\\\hline"]
    for k, g, gens in rows:
        lines.append(f"{k} & ${g.latex()}$ & ${', '.join(gens)}$\\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines)


# commands -------------------------------------------------------------------


def cmd_groups(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    ring = _lookup("ring", doc.ring, args.name)
    top = ring.top_degree if args.max_deg is None else min(args.max_deg, ring.top_degree)
    rows = []
    for k in range(top + 1):
        c = ring.component(k)
        rows.append((k, c.group, [ring.format(g) for g in c.generator_polys()]))
    if args.format == "json":
        data = {"ring": ring.name, "table": {str(k): {"group": str(g), "generators": gens} for k, g, gens in rows}}
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    elif args.format == "latex":
        print(_group_table_latex(rows), file=out)
    else:
        width = max(len(str(g)) for _, g, _ in rows)
        for k, g, gens in rows:
            print(f"{k:3d}  {str(g).ljust(width)}  {', '.join(gens)}".rstrip(), file=out)
    ok = _compare(doc.expectations_for(args.name), ring.groups(), err)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_gysin(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    spec = _lookup("bundle", doc.bundle, args.name)
    res = gysin_total(spec)
    if args.format == "json":
        data = {
            "bundle": args.name,
            "base": spec.base.name,
            "fiber_dim": spec.fiber_dim,
            "total": {str(k): str(g) for k, g in enumerate(res.total)},
            "ambiguous": sorted(res.ambiguous),
            "candidates": {str(k): [str(g) for g in v] for k, v in res.candidates.items() if len(v) > 1},
        }
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    else:
        fmt = "latex" if args.format == "latex" else "text"
        for page in (res.e2, res.e_inf):
            print(page.title, file=out)
            print(render_page(page, fmt), file=out)
            print(file=out)
        print("total", file=out)
        for k, g in enumerate(res.total):
            flag = "  (extension ambiguous)" if k in res.ambiguous else ""
            print(f"{k:3d}  {g}{flag}", file=out)
    ok = _compare(doc.expectations_for(args.name), res.total, err)
    return EXIT_OK if ok else EXIT_MISMATCH


def _so3_problem(name: str, doc: DslDocument) -> TorsionProblem | None:
    # V_n_3 is the SO(3)-bundle over G~_{n,3}; its page uses the symbolic table
    parts = name.split("_")
    if len(parts) == 3 and parts[0] == "V" and parts[2] == "3" and parts[1].isdigit():
        try:
            return doc.problem(f"g{parts[1]}3")
        except KeyError:
            return None
    return None


def cmd_page(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    fmt = "latex" if args.format == "latex" else "text"
    problem = _so3_problem(args.name, doc)
    if problem is not None:
        H = cohomology_symbolic(problem)
        lo, hi = args.window if args.window else (0, len(H) - 1)
        try:
            page = so3_e2_page(H, (lo, hi))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        page = gysin_total(_lookup("bundle", doc.bundle, args.name)).e2
    if args.format == "json":
        data = {
            "page": page.r,
            "entries": [
                {"p": p, "q": q, "group": str(e.group)} for (p, q), e in sorted(page.entries.items())
            ],
        }
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    else:
        print(render_page(page, fmt), file=out)
    return EXIT_OK


def cmd_solve(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    problem = _lookup("problem", doc.problem, args.name)
    checks = tuple(c for c in CHECK_ORDER if c not in (args.skip or ()))
    res = solve(problem, checks, keep_log=args.explain)
    if args.format == "json":
        data = {
            "problem": problem.name,
            "examined": res.examined,
            "solutions": [
                {
                    "torsion": {f"T_{k}": str(a[k]) for k in problem.unknowns},
                    "cohomology": [str(g) for g in cohomology_from(a, problem.betti)],
                }
                for a in res.solutions
            ],
        }
        if args.explain:
            data["eliminated"] = [
                {"assignment": a.describe(problem), "check": r.name, "degree": r.degree,
                 "degrees": list(r.degrees), "reason": r.reason}
                for a, r in res.eliminated
            ]
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    else:
        print(f"{problem.name}: {res.examined} assignments examined, {len(res.solutions)} solution(s)", file=out)
        for a in res.solutions:
            print("  " + a.describe(problem), file=out)
            groups = cohomology_from(a, problem.betti)
            print("  H^*: " + ", ".join(f"{k}:{g}" for k, g in enumerate(groups)), file=out)
        if args.explain:
            print("eliminated:", file=out)
            for a, r in res.eliminated:
                extra = f" (also {', '.join(map(str, r.degrees[1:]))})" if len(r.degrees) > 1 else ""
                print(f"  {a.describe(problem)}: {r.name} at degree {r.degree}{extra}: {r.reason}", file=out)
            print("summary:", file=out)
            for name, deg, count, _ in res.elimination_summary():
                print(f"  {name:9s} degree {deg:3d}  {count} assignment(s)", file=out)
            cited = sorted({d for _, r in res.eliminated for d in (r.degrees or (r.degree,)) if d is not None})
            print("degrees cited: " + ", ".join(map(str, cited)), file=out)
    code = EXIT_OK
    blocks = doc.expectations_for(args.name)
    for b in blocks:
        if b.torsion and (len(res.solutions) != 1 or any(res.solutions[0][k] != g for k, g in b.torsion)):
            print(f"solution of {args.name} differs from the expected torsion", file=err)
            code = EXIT_MISMATCH
        if b.groups and len(res.solutions) == 1:
            if not _compare([b], cohomology_from(res.solutions[0], problem.betti), err):
                code = EXIT_MISMATCH
    if len(res.solutions) != 1 and not args.all:
        print(f"{args.name}: expected a unique solution, found {len(res.solutions)}", file=err)
        return EXIT_SOLVER
    return code


def cmd_verify(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    from .verify import run_all

    results = run_all(args.only)
    if args.format == "json":
        data = [{"criterion": c.number, "title": c.title, "passed": c.passed, "details": c.details} for c in results]
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    else:
        for c in results:
            print(c.line(), file=out)
            if args.verbose or not c.passed:
                for d in c.details:
                    print("      " + d, file=out)
        print(f"{sum(c.passed for c in results)}/{len(results)} criteria pass", file=out)
    return EXIT_OK if all(c.passed for c in results) else EXIT_MISMATCH


def cmd_finite(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    ring = _lookup("ring", doc.ring, args.name)
    start = ring.top_degree + 1
    if args.scan_to < start:
        raise UsageError(f"--scan-to must be at least {start}")
    monos = finite_generating_set(ring, start, args.scan_to)
    names = [ring.format_monomial(m) for m in monos]
    if args.format == "json":
        data = {"ring": ring.name, "scan": [start, args.scan_to],
                "added": [{"monomial": s, "degree": ring.degree_of(m)} for s, m in zip(names, monos)]}
        print(json.dumps(data, indent=2), file=out)
    else:
        for s, m in zip(names, monos):
            print(f"{ring.degree_of(m):3d}  {s}", file=out)
    return EXIT_OK


def cmd_duality(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    ring = _lookup("ring", doc.ring, args.name)
    try:
        pairings = [duality_pairing(ring, k) for k in range(ring.top_degree + 1) if ring.component(k).group.rank]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        data = [{"degree": p.degree, "matrix": [list(r) for r in p.matrix.entries], "unimodular": p.unimodular}
                for p in pairings]
        print(json.dumps(data, indent=2), file=out)
    else:
        for p in pairings:
            rows = "; ".join(" ".join(map(str, r)) for r in p.matrix.entries)
            print(f"{p.degree:3d} x {ring.top_degree - p.degree:3d}  [{rows}]  "
                  f"{'unimodular' if p.unimodular else 'NOT unimodular'}", file=out)
    return EXIT_OK if all(p.unimodular for p in pairings) else EXIT_MISMATCH


def cmd_mod2(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    ring = _lookup("ring", doc.ring, args.name)
    dims = mod2_dimensions(ring.groups())
    if args.format == "json":
        print(json.dumps({"ring": ring.name, "mod2_dims": dims}), file=out)
    else:
        for k, d in enumerate(dims):
            print(f"{k:3d}  {d}", file=out)
    return EXIT_OK


def cmd_export(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    src = doc if args.file else catalog_document()
    if args.format == "json":
        data = {"rings": {r.name: r.ring.to_json() for r in src.rings}}
        print(json.dumps(data, indent=2, ensure_ascii=False), file=out)
    else:
        out.write(src.to_dsl())
    return EXIT_OK


def cmd_check(args, doc: DslDocument, out: TextIO, err: TextIO) -> int:
    """Evaluate every expect block of the input file."""
    if not doc.expects:
        print("no expect blocks", file=out)
        return EXIT_OK
    code = EXIT_OK
    for b in doc.expects:
        groups = _expect_groups(b.target, doc)
        ok = groups is not None and _compare([b], groups, err)
        if b.torsion:
            res = solve(doc.problem(b.target))
            ok = ok and len(res.solutions) == 1 and all(res.solutions[0][k] == g for k, g in b.torsion)
        print(f"{b.target}: {'ok' if ok else 'MISMATCH'}" + (f"  [{b.citation}]" if b.citation else ""), file=out)
        if not ok:
            code = EXIT_MISMATCH
    return code


def _expect_groups(name: str, doc: DslDocument) -> list[AbelianGroup] | None:
    from .catalog import get_space

    d = doc.find(name)
    for getter in (doc.ring, lambda n: doc.bundle(n), doc.problem):
        try:
            obj = getter(name)
        except KeyError:
            continue
        if isinstance(obj, RingPresentation):
            return obj.groups()
        if isinstance(obj, TorsionProblem):
            res = solve(obj)
            return list(cohomology_from(res.solutions[0], obj.betti)) if len(res.solutions) == 1 else []
        return list(gysin_total(obj).total)
    if d is None:
        try:
            rec = get_space(name)
        except KeyError:
            return None
        if rec.integral_groups is not None:
            top = max(rec.integral_groups)
            return [rec.integral_groups.get(k, AbelianGroup()) for k in range(top + 1)]
    return None


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", help="DSL file with extra rings, bundles, problems and expectations")
    common.add_argument("--format", choices=("text", "json", "latex"), default="text")

    parser = argparse.ArgumentParser(prog="grasscoh", description="Integral cohomology of oriented Grassmannians.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("groups", parents=[common], help="graded table of a ring")
    p.add_argument("name")
    p.add_argument("--max-deg", type=int)
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("gysin", parents=[common], help="E-pages and total cohomology of a sphere bundle")
    p.add_argument("name")
    p.set_defaults(func=cmd_gysin)

    p = sub.add_parser("page", parents=[common], help="E2 page of a sphere bundle or of V_n_3")
    p.add_argument("name")
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.set_defaults(func=cmd_page)

    p = sub.add_parser("solve", parents=[common], help="search torsion assignments")
    p.add_argument("name")
    p.add_argument("--explain", action="store_true", help="list the first failing check of every rejected assignment")
    p.add_argument("--all", action="store_true", help="exit 0 even when the solution is not unique")
    p.add_argument("--skip", action="append", choices=CHECK_ORDER, help="disable a check (repeatable)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-paper", parents=[common], help="run the ten reproducibility criteria")
    p.add_argument("--only", type=int, action="append", metavar="N")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("finite-presentation", parents=[common], help="monomials to add above the top degree")
    p.add_argument("name")
    p.add_argument("--scan-to", type=int, required=True)
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("duality", parents=[common], help="cup-product pairings into the top class")
    p.add_argument("name")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("mod2-dims", parents=[common], help="dimensions of H^k(;Z_2)")
    p.add_argument("name")
    p.set_defaults(func=cmd_mod2)

    p = sub.add_parser("export", parents=[common], help="print the catalog (or the input file) as DSL")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("check", parents=[common], help="evaluate the expect blocks of a file")
    p.set_defaults(func=cmd_check)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        doc = _load(args.file)
        return args.func(args, doc, out, err)
    except DslError as exc:
        print(f"{args.file or '<input>'}:{exc}", file=err)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())
