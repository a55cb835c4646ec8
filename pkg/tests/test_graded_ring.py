import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscoh.abelian import ZERO, Z, Z2, AbelianGroup
from grasscoh.catalog import G83, G103, G83_TABLE, G103_TABLE, PSTAR, W8, lai_even, odd_g2, w21
from grasscoh.graded_ring import (
    IntPolynomial, RingPresentation, duality_pairing, finite_generating_set, hilbert_vector,
    ring_hom_check,
)
from grasscoh.syntax import DslError


def test_truncated_polynomial_ring():
    cp3 = RingPresentation.build("CP3", "x:2", ["x^4"], top=6)
    assert cp3.groups() == [Z, ZERO, Z, ZERO, Z, ZERO, Z]
    assert hilbert_vector(cp3) == [1, 0, 1, 0, 1, 0, 1]


def test_exterior_generator_squares_to_two_torsion():
    # an odd generator anticommutes with itself, so 2 y^2 = 0
    r = RingPresentation.build("E", "y:3", [], top=6)
    assert r.groups()[6] == Z2
    c = RingPresentation.build("C", "y:3", [], top=6, sign_rule="commutative")
    assert c.groups()[6] == Z


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        RingPresentation.build("R", "a:2", ["a + a^2"], top=4)
    with pytest.raises(DslError):
        RingPresentation.build("R", "a:2", ["b"], top=4)
    with pytest.raises(ValueError):
        RingPresentation.build("R", "a:2, a:3", [], top=4)


def test_g83_table_and_generators():
    assert G83.groups() == [G83_TABLE[k] for k in range(16)]
    labels = {k: G83.component(k).labels() for k in range(16)}
    assert labels[3] == ["y3"] and labels[11] == ["x4*x7"] and labels[15] == ["x4^2*x7"]


def test_g103_table():
    assert G103.groups() == [G103_TABLE[k] for k in range(22)]


def test_g83_products():
    e = G83.element
    assert (e("y3") * e("x4")).is_zero()
    assert not (e("x4") * e("x7")).is_zero()
    assert (e("y3") * e("y3")).coords == (1,)
    # product above the top degree is zero
    assert (e("x7") * e("x4^2*x7")).is_zero()


def test_g103_products():
    e = G103.element
    assert (e("y3") * e("x13")).coords == (e("x4") * e("x12")).coords
    assert not (e("y3") * e("x13")).is_zero()
    assert (e("x9") * e("x12")).coords == (e("x4^2") * e("x13")).coords
    assert (e("x4") * e("x9")).coords == (2 * e("x13").coords[0],)


def test_ring_class_arithmetic():
    e = G103.element
    x = e("x4^2")
    assert (x + (-x)).is_zero()
    assert G103.element("0", 8).is_zero()
    assert str(e("x4^3")) == "2*x12"


MONOS = {
    "G83": ["y3", "x4", "x7", "y3^2", "x4^2", "y3*x7"],
    "G103": ["y3", "x4", "x9", "x12", "x13", "y3^2", "x4*x9"],
}


@given(st.sampled_from(["G83", "G103"]), st.data())
@settings(max_examples=60, deadline=None)
def test_graded_commutativity_and_associativity(name, data):
    ring = G83 if name == "G83" else G103
    a, b, c = (ring.element(data.draw(st.sampled_from(MONOS[name]))) for _ in range(3))
    ab, ba = a * b, b * a
    sign = -1 if (a.degree * b.degree) % 2 else 1
    assert ring.element(ring.mul(ab.lift(), ring.one()), ab.degree).coords == ab.coords
    assert (ab + ring.element(ba.lift().scale(-sign), ba.degree)).is_zero()
    assert ((a * b) * c).coords == (a * (b * c)).coords


def test_finite_generating_sets():
    added = finite_generating_set(G103, 22, 34)
    assert [G103.format_monomial(m) for m in added] == ["x9*x13", "x12^2", "x12*x13", "x13^2"]
    assert finite_generating_set(G83, 16, 29) == []
    with pytest.raises(ValueError):
        finite_generating_set(G83, 10, 20)


def test_pstar_injectivity():
    want = {"G83": [4, 7, 8, 11, 15], "G103": [4, 8, 9, 12, 13, 17, 21]}
    for key, (src, dst, images) in PSTAR.items():
        chk = ring_hom_check(src, dst, images)
        assert chk.well_defined
        assert chk.injective_degrees() == want[key]


def test_ring_hom_check_detects_bad_images():
    src = RingPresentation.build("A", "a:2", ["a^2"], top=4)
    dst = RingPresentation.build("B", "b:2", ["b^3"], top=4)
    chk = ring_hom_check(src, dst, {"a": "b"})
    assert not chk.well_defined and chk.violations == ("a^2",)
    ok = ring_hom_check(src, dst, {"a": "0"})
    assert ok.well_defined and ok.injective_degrees() == []
    with pytest.raises(ValueError):
        ring_hom_check(G83, W8, {"y3": "0", "x4": "xb2", "x7": "xb7"})


@pytest.mark.parametrize("ring", [G83, G103, W8])
def test_duality_pairings_unimodular(ring):
    for k in range(ring.top_degree + 1):
        if ring.component(k).group.rank:
            assert duality_pairing(ring, k).unimodular


def test_duality_requires_infinite_cyclic_top():
    r = RingPresentation.build("R", "y:3", ["2*y"], top=3)
    with pytest.raises(ValueError):
        duality_pairing(r, 0)


@pytest.mark.parametrize("n", range(2, 7))
def test_odd_g2_hilbert_vector(n):
    # rank one in every even degree 0..4n-2
    hv = hilbert_vector(odd_g2(n))
    assert hv == [1 - k % 2 for k in range(4 * n - 1)]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_w21_top_is_z(n):
    w = w21(n)
    assert w.top_degree == 6 * n - 7
    assert w.groups()[-1] == Z


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lai_ring_top_and_euler_characteristic(n):
    r = lai_even(n)
    hv = hilbert_vector(r)
    # G~_{2n,2} has Euler characteristic 2n and cohomology only in even degrees
    assert sum(hv) == 2 * n
    assert r.groups()[-1] == Z
    assert all(g.is_free for g in r.groups())


def test_json_and_dsl_export_roundtrip():
    assert RingPresentation.from_json(G103.to_json()) == G103
    table = G83.graded_table_json()["table"]
    assert table["11"] == {"group": "Z", "generators": ["x4*x7"]}
    assert "rel x4^3 - 2*x12;" in G103.to_dsl()


def test_ideal_member():
    assert G103.ideal_member("x4^3 - 2*x12")
    assert not G103.ideal_member("x12")
    assert G83.ideal_member(IntPolynomial())
