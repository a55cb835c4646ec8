import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscoh.abelian import Z, Z2
from grasscoh.catalog import G83, G83_TABLE
from grasscoh.cli import EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, EXIT_SOLVER, run
from grasscoh.dsl import DslDocument, catalog_document, parse
from grasscoh.graded_ring import RingPresentation
from grasscoh.syntax import DslError

G83_SRC = "ring G83 { gen y3:3; gen x4:4; gen x7:7; rel 2*y3; rel y3*x4; rel y3^3; rel x4^3; rel x7^2; top 15; }"


# parsing -------------------------------------------------------------------------


def test_parse_g83_ring():
    doc = parse(G83_SRC)
    assert doc.names() == ["G83"]
    ring = doc.ring("G83")
    assert ring.groups() == G83.groups()
    assert doc.rings[0].line == 1 and doc.rings[0].column == 1


def test_non_homogeneous_relation():
    with pytest.raises(DslError) as info:
        parse("ring Bad { gen a:2; rel a + 1; top 4; }")
    e = info.value
    assert e.kind == "non-homogeneous"
    assert (e.line, e.column) == (1, 25)
    assert "2" in e.message and "0" in e.message


def test_empty_document():
    assert parse("") == DslDocument()
    assert parse("  \n# only a comment\n").declarations == ()


@pytest.mark.parametrize("src, kind", [
    ("ring R { gen a:2; top 4; } ring R { gen b:2; top 4; }", "syntax"),
    ("ring R { gen a:2 top 4; }", "syntax"),
    ("ring R { gen a:2; top 4; } $", "lexical"),
    ("bundle B { base Nowhere; fiber S 1; euler x; }", "unresolved"),
    ("expect Nothing { 0: Z }", "unresolved"),
    ("ring R { gen a:2; top 4; } bundle B { base R; fiber S 2; euler a; }", "syntax"),
    ("ring R { gen a:2; top 4; } bundle B { base R; fiber S 1; euler a + a^2; }", "non-homogeneous"),
])
def test_error_kinds(src, kind):
    with pytest.raises(DslError) as info:
        parse(src)
    assert info.value.kind == kind
    assert info.value.line >= 1 and info.value.column >= 1


def test_forward_reference_and_catalog_fallback():
    doc = parse("""
        bundle L { base P; fiber S 1; euler 3*x; }
        ring P { gen x:2; rel x^3; top 4; }
        expect G83 { 3: Z_2, citation: "table" }
    """)
    spec = doc.bundle("L")
    assert spec.base.name == "P"
    assert doc.ring("G103").groups()[6] == Z2
    assert doc.expectations_for("G83")[0].groups == ((3, Z2),)


def test_catalog_export_roundtrip_is_fixed_point():
    doc = catalog_document()
    text = doc.to_dsl()
    again = parse(text)
    assert again == doc
    assert parse(again.to_dsl()).to_dsl() == again.to_dsl()


names = st.sampled_from(["a", "b", "c"])


@st.composite
def rings(draw):
    gens = draw(st.lists(st.tuples(names, st.integers(1, 4)), min_size=1, max_size=3, unique_by=lambda g: g[0]))
    top = draw(st.integers(1, 8))
    rels = []
    for name, deg in gens:
        e = draw(st.integers(1, 3))
        if draw(st.booleans()) and deg * e <= 2 * top:
            rels.append(f"{draw(st.integers(1, 4))}*{name}^{e}")
    return RingPresentation.build("R", gens, rels, top=top)


@given(rings())
@settings(max_examples=40, deadline=None)
def test_random_ring_roundtrip(ring):
    doc = parse(ring.to_dsl())
    assert doc.ring("R").groups() == ring.groups()
    assert parse(doc.to_dsl()) == doc


@given(st.text(alphabet="ring{}gen:;rel^*+-0123456789 xZ_\n\"", max_size=60))
@settings(max_examples=150, deadline=None)
def test_malformed_input_never_crashes(text):
    try:
        parse(text)
    except DslError as e:
        assert e.line >= 1 and e.column >= 1


# command line --------------------------------------------------------------------


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_groups_g83():
    code, out, _ = cli("groups", "G83")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and len(lines) == 16
    for k, line in enumerate(lines):
        assert line.split()[0] == str(k)
        assert line.split()[1] == str(G83_TABLE[k]).split()[0]


def test_groups_json_and_max_deg():
    code, out, _ = cli("groups", "G83", "--format", "json", "--max-deg", "4")
    data = json.loads(out)
    assert code == EXIT_OK and "Z_2" in json.dumps(data)
    code, out, _ = cli("groups", "G83", "--max-deg", "4")
    assert len(out.strip().splitlines()) == 5


def test_solve_g103_explain():
    code, out, _ = cli("solve", "g103", "--explain")
    assert code == EXIT_OK
    assert "1 solution(s)" in out
    assert "T_4=0, T_5=Z_2, T_6=Z_2, T_7=0, T_8=0, T_9=0, T_10=0" in out
    cited = out.split("degrees cited: ")[1].split()[0:]
    cited = {int(x.strip(",")) for x in cited}
    assert {5, 6, 8, 9, 10, 14, 18, 19} <= cited


def test_solve_without_so3_is_not_unique():
    code, out, err = cli("solve", "g103", "--skip", "so3")
    assert code == EXIT_SOLVER and "unique" in err
    code, _, _ = cli("solve", "g103", "--skip", "so3", "--all")
    assert code == EXIT_OK


def test_finite_presentation():
    code, out, _ = cli("finite-presentation", "G103", "--scan-to", "34")
    assert code == EXIT_OK
    assert [line.split()[1] for line in out.strip().splitlines()] == ["x9*x13", "x12^2", "x12*x13", "x13^2"]
    code, _, err = cli("finite-presentation", "G103", "--scan-to", "3")
    assert code == EXIT_PARSE


def test_gysin_page_duality_mod2():
    assert cli("gysin", "V_7_2")[0] == EXIT_OK
    code, out, _ = cli("page", "V_5_2", "--format", "latex")
    assert code == EXIT_OK and out.startswith("\\begin{tabular}")
    assert cli("page", "V_10_3", "--window", "12", "20")[0] == EXIT_OK
    assert cli("duality", "G103")[0] == EXIT_OK
    code, out, _ = cli("mod2-dims", "G83")
    assert code == EXIT_OK


def test_verify_command_subset():
    code, out, _ = cli("verify-paper", "--only", "1", "--only", "6")
    assert code == EXIT_OK
    assert "criterion  1 PASS" in out and "criterion  6 PASS" in out


def test_unknown_names_and_bad_usage():
    assert cli("groups", "Nope")[0] == EXIT_PARSE
    assert cli("solve", "g999")[0] == EXIT_PARSE
    assert cli("frobnicate")[0] == EXIT_PARSE
    assert cli("groups", "G83", "-f", "/nonexistent/file.gc")[0] == EXIT_PARSE


def test_parse_error_from_file(tmp_path):
    f = tmp_path / "bad.gc"
    f.write_text("ring Bad { gen a:2; rel a + 1; top 4; }")
    code, _, err = cli("groups", "Bad", "-f", str(f))
    assert code == EXIT_PARSE and "1:25" in err and "non-homogeneous" in err


def test_expectations_from_file(tmp_path):
    good = tmp_path / "good.gc"
    good.write_text(G83_SRC.replace("G83", "Mine") + "\nexpect Mine { 3: Z_2, 15: Z }\n")
    assert cli("groups", "Mine", "-f", str(good))[0] == EXIT_OK
    assert cli("check", "-f", str(good))[0] == EXIT_OK
    bad = tmp_path / "bad.gc"
    bad.write_text(G83_SRC.replace("G83", "Mine") + "\nexpect Mine { 3: Z_4 }\n")
    code, _, err = cli("groups", "Mine", "-f", str(bad))
    assert code == EXIT_MISMATCH and "degree 3" in err
    torsion = tmp_path / "t.gc"
    torsion.write_text("expect g83 { T_5: Z_4 }\n")
    assert cli("solve", "g83", "-f", str(torsion))[0] == EXIT_MISMATCH


def test_export_parses_back():
    code, out, _ = cli("export")
    assert code == EXIT_OK
    assert parse(out) == catalog_document()
