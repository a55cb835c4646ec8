import pytest

from grasscoh.abelian import ZERO, Z, Z2, AbelianGroup, GroupHom, IntegerMatrix
from grasscoh.catalog import get_bundle, lai_euler, lai_even, w21
from grasscoh.graded_ring import RingPresentation
from grasscoh.spectral import (
    SO3_COHOMOLOGY, BigradedPage, DifferentialRecord, SphereBundleSpec, SymbolicGroup,
    gysin_total, mod2_entry, render_page, so3_e2_page,
)

Z3 = AbelianGroup(0, (3,))


def _cp(n):
    return RingPresentation.build(f"CP{n}", "x:2", [f"x^{n + 1}"], top=2 * n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hopf_bundle_gives_sphere(n):
    cp = _cp(n)
    res = gysin_total(SphereBundleSpec(cp, 1, cp.poly("x")))
    assert res.nonzero() == {0: Z, 2 * n + 1: Z}
    assert not res.ambiguous


@pytest.mark.parametrize("k", [2, 3, 5])
def test_lens_space(k):
    cp = _cp(2)
    res = gysin_total(SphereBundleSpec(cp, 1, cp.poly(f"{k}*x")))
    zk = AbelianGroup(0, (k,))
    assert res.nonzero() == {0: Z, 2: zk, 4: zk, 5: Z}


def test_trivial_bundle_is_product_up_to_extension():
    cp = _cp(1)
    res = gysin_total(SphereBundleSpec(cp, 1, cp.poly("0*x")))
    # Euler class zero: S^2 x S^1
    assert res.nonzero() == {0: Z, 1: Z, 2: Z, 3: Z}


def test_euler_degree_is_checked():
    cp = _cp(2)
    with pytest.raises(ValueError):
        SphereBundleSpec(cp, 2, cp.poly("x"))
    with pytest.raises(ValueError):
        SphereBundleSpec(cp, 0, cp.poly("x"))


@pytest.mark.parametrize("n", range(2, 7))
def test_stiefel_from_odd_grassmannian(n):
    res = gysin_total(get_bundle(f"V_{2 * n + 1}_2"))
    assert res.nonzero() == {0: Z, 2 * n: Z2, 4 * n - 1: Z}


@pytest.mark.parametrize("n", [3, 4, 5])
def test_w_two_paths(n):
    base = lai_even(n)
    res = gysin_total(SphereBundleSpec(base, 2 * n - 3, base.poly(lai_euler(n))))
    ring = w21(n).groups()
    assert list(res.total) == ring + [ZERO] * (len(res.total) - len(ring))
    assert not res.ambiguous


def test_gysin_page_records_differentials():
    res = gysin_total(get_bundle("V_7_2"))
    notes = [d.note for d in res.e2.differentials]
    assert "*2" in notes
    assert res.e2.check_dd()
    assert res.e_inf.group(6, 0) == Z2


def test_extension_ambiguity_is_flagged():
    # total degree 3 sits between Z_2<y> in row 0 and Z_2<a> in row 1: two possible middles
    base = RingPresentation.build("B", "y:3, a:2", ["2*y", "2*a", "a^2", "y^2"], top=5)
    res = gysin_total(SphereBundleSpec(base, 1, base.poly("0*a")))
    assert res.ambiguous == {3}
    assert set(map(str, res.candidates[3])) == {"Z_4", "Z_2 ⊕ Z_2"}
    # the split extension is reported as the representative
    assert res.total[3] == AbelianGroup(0, (2, 2))


def test_record_checks_bidegree():
    page = BigradedPage(2)
    h = GroupHom(Z, Z, IntegerMatrix.from_rows([[1]]))
    page.record(DifferentialRecord((0, 1), (2, 0), h))
    with pytest.raises(ValueError):
        page.record(DifferentialRecord((0, 1), (3, 0), h))


def test_symbolic_groups():
    g = mod2_entry(SymbolicGroup((("", "T_6"),)), SymbolicGroup((Z2,)))
    assert str(g) == "T_6⊗Z_2 ⊕ Z_2"
    assert g.resolve({"T_6": Z2}) == AbelianGroup(0, (2, 2))
    assert g.resolve({"T_6": Z3}) == Z2
    h = mod2_entry(Z, SymbolicGroup((Z, ("", "T_10"))))
    assert str(h) == "Z_2 ⊕ Tor(T_10, Z_2)"
    assert "\\mathrm{Tor}(T_{10}" in h.latex()


def test_mod2_entry_concrete():
    assert mod2_entry(Z, Z2) == AbelianGroup(0, (2, 2))
    assert mod2_entry(Z3, ZERO) == ZERO


def test_so3_page():
    H = [Z, ZERO, ZERO, Z2, Z]
    page = so3_e2_page(H, (0, 4))
    assert page.group(0, 3) == Z and page.group(2, 2) == Z2 and page.group(3, 2) == Z2
    assert page.group(1, 1) == ZERO
    with pytest.raises(ValueError):
        so3_e2_page(H, (0, 9))
    assert SO3_COHOMOLOGY == (Z, ZERO, Z2, Z)


def test_render_page_text_and_latex():
    res = gysin_total(get_bundle("V_5_2"))
    text = render_page(res.e2)
    lines = text.splitlines()
    assert lines[0].startswith("q\\p | 0 | 1")
    assert any(line.startswith("d2: (2, 1) -> (4, 0)  *2") for line in lines)
    latex = render_page(res.e2, "latex")
    assert latex.startswith("\\begin{tabular}") and "\\cline" in latex
    assert render_page(BigradedPage(2)) == "q\\p"
    with pytest.raises(ValueError):
        render_page(res.e2, "html")
