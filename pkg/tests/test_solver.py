import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasscoh.abelian import ZERO, Z, Z2, AbelianGroup, exists_extension, hom_outcomes
from grasscoh.catalog import EXPECTED_TORSION, G83_TABLE, G103_TABLE, get_problem
from grasscoh.solver import (
    CHECK_ORDER, DEFAULT_CANDIDATES, EXTENDED_CANDIDATES, TorsionAssignment, TorsionProblem,
    check_duality, check_so3, check_sphere_assembly, check_uct_mod2, cohomology_from,
    cohomology_symbolic, mod2_row, solve, verify,
)

G83P = get_problem("g83")
G103P = get_problem("g103")
g = AbelianGroup.parse


def assign(problem, *values):
    return TorsionAssignment.from_unknowns(problem, [g(v) for v in values])


def test_problem_shape():
    assert G83P.dim == 15 and G83P.unknowns == (4, 5, 6, 7)
    assert G103P.dim == 21 and G103P.unknowns == tuple(range(4, 11))
    assert G103P.canonical(14) == 6
    with pytest.raises(ValueError):
        TorsionProblem("bad", 8, (1,) * 15)
    with pytest.raises(ValueError):
        TorsionProblem("bad", 8, (1,) + (0,) * 15)


def test_cohomology_from_shifts_torsion_up_one_degree():
    a = assign(G83P, "0", "Z_2", "0", "0")
    H = cohomology_from(a, G83P.betti)
    assert list(H) == [G83_TABLE[k] for k in range(16)]
    assert a[2] == Z2 and a[12] == Z2 and a[13] == ZERO and a[15] == ZERO


def test_symbolic_cohomology():
    H = [str(x) for x in cohomology_symbolic(G83P)]
    assert H[:8] == ["Z", "0", "0", "Z_2", "Z", "T_4", "T_5", "Z ⊕ T_6"]
    assert H[8] == "Z ⊕ T_7"
    known = cohomology_symbolic(G83P, {6: ZERO})
    assert str(known[7]) == "Z"


def test_assignment_from_mapping_and_errors():
    a = TorsionAssignment.from_unknowns(G83P, {4: ZERO, 5: Z2, 6: ZERO, 7: ZERO})
    assert a == assign(G83P, "0", "Z_2", "0", "0")
    with pytest.raises(ValueError):
        TorsionAssignment.from_unknowns(G83P, [ZERO])
    assert a.describe(G83P) == "T_4=0, T_5=Z_2, T_6=0, T_7=0"


# individual checks on the documented examples -----------------------------------------


def test_uct_check_g83_degree_6():
    r = check_uct_mod2(assign(G83P, "0", "Z_2", "Z_2", "0"), G83P)
    assert not r.passed and r.degree == 6


def test_uct_check_g103_degree_10():
    r = check_uct_mod2(assign(G103P, "0", "Z_2", "Z_2", "0", "0", "0", "Z_2"), G103P)
    assert not r.passed and r.degree == 10


def test_sphere_check_g83():
    assert check_sphere_assembly(assign(G83P, "0", "Z_2", "0", "0"), G83P).passed
    r = check_sphere_assembly(assign(G83P, "Z_2", "Z_2", "0", "0"), G83P)
    assert not r.passed and r.degree == 5
    r = check_sphere_assembly(assign(G83P, "0", "Z_2", "0", "Z_2"), G83P)
    assert not r.passed and r.degree == 8


def test_so3_check_g103():
    assert check_so3(assign(G103P, "0", "Z_2", "Z_2", "0", "0", "0", "0"), G103P).passed
    r = check_so3(assign(G103P, "0", "Z_2", "0", "0", "0", "0", "0"), G103P)
    assert not r.passed and 19 in r.degrees
    r = check_so3(assign(G103P, "0", "Z_2", "Z_2", "0", "0", "0", "Z_4"), G103P)
    assert not r.passed and r.degree == 14


def test_so3_check_is_vacuous_without_data():
    assert check_so3(assign(G83P, "Z_3", "Z_3", "Z_3", "Z_3"), G83P).passed


def test_duality_check_detects_asymmetry():
    a = assign(G83P, "0", "Z_2", "0", "0")
    bad = TorsionAssignment(a.n, a.torsion[:8] + (Z2,) + a.torsion[9:])
    r = check_duality(bad, G83P)
    assert not r.passed
    assert check_duality(a, G83P).passed


# the sphere chain DP against exhaustive search -----------------------------------------


def _h(H, k):
    return H[k] if 0 <= k < len(H) else ZERO


def _brute_sphere(H, W, r=3):
    d = len(H) - 1
    cols = list(range(-r, d + 1))
    opts = [sorted(hom_outcomes(_h(H, p), _h(H, p + r), _h(W, p + r)), key=str) for p in cols]
    if any(not o for o in opts):
        return False
    for combo in itertools.product(*opts):
        state = dict(zip(cols, combo))
        if all(
            exists_extension(state[N - r][1], _h(W, N), state[N - r + 1][0])
            for N in range(0, d + 1)
            if N - r in state and N - r + 1 in state
        ):
            return True
    return False


values = st.sampled_from(["0", "Z_2", "Z_4"])


@given(st.tuples(values, values, values, values))
@settings(max_examples=40, deadline=None)
def test_sphere_dp_matches_exhaustive_search(vals):
    a = assign(G83P, *vals)
    H = cohomology_from(a, G83P.betti)
    got = check_sphere_assembly(a, G83P).passed
    assert got == _brute_sphere(H, G83P.sphere_target)


def test_sphere_witness_is_consistent():
    a = assign(G83P, "0", "Z_2", "0", "0")
    H = cohomology_from(a, G83P.betti)
    W = G83P.sphere_target
    w = dict(check_sphere_assembly(a, G83P).witness)
    for p, (k, q) in w.items():
        assert (k, q) in hom_outcomes(_h(H, p), _h(H, p + 3), _h(W, p + 3))
        if p + 1 in w:
            assert exists_extension(q, _h(W, p + 3), w[p + 1][0])


# whole searches -----------------------------------------------------------------------


def test_solve_g83():
    res = solve(G83P, keep_log=True)
    assert len(res.solutions) == 1
    assert tuple(map(str, res.unique.unknown_values(G83P))) == EXPECTED_TORSION["g83"]
    assert res.examined == len(DEFAULT_CANDIDATES) ** 4
    assert res.examined == len(res.solutions) + len(res.eliminated)
    degrees = {(name, deg) for name, deg, _, _ in res.elimination_summary()}
    assert ("uct_mod2", 6) in degrees and ("sphere", 5) in degrees and ("sphere", 8) in degrees


def test_solve_g103_needs_so3():
    res = solve(G103P)
    assert res.unique is not None
    assert list(cohomology_from(res.unique, G103P.betti)) == [G103_TABLE[k] for k in range(22)]
    loose = solve(G103P, tuple(c for c in CHECK_ORDER if c != "so3"))
    assert len(loose.solutions) >= 2
    assert res.unique in loose.solutions
    assert {str(s[6]) for s in loose.solutions} >= {"0", "Z_2"}


def test_solve_is_deterministic_and_sorted():
    a = solve(G103P, ("uct_mod2", "duality", "sphere"))
    b = solve(G103P, ("uct_mod2", "duality", "sphere"))
    assert [s.torsion for s in a.solutions] == [s.torsion for s in b.solutions]
    keys = [s.sort_key() for s in a.solutions]
    assert keys == sorted(keys)


def test_extended_candidates_do_not_change_answers():
    for p in (G83P, G103P):
        base = [s.torsion for s in solve(p).solutions]
        wide = [s.torsion for s in solve(p.with_candidates(EXTENDED_CANDIDATES)).solutions]
        assert base == wide


def test_unknown_check_name():
    with pytest.raises(ValueError):
        solve(G83P, ("nope",))


def test_verify_report():
    rep = verify(assign(G83P, "0", "Z_2", "0", "0"), G83P)
    assert rep.passed and rep.first_failure is None
    assert rep["sphere"].passed
    rep = verify(assign(G83P, "0", "Z_2", "Z_2", "0"), G83P)
    assert rep.first_failure.name == "uct_mod2"


def test_mod2_row_after_solving():
    row = mod2_row(solve(G83P).unique, G83P)
    assert row == [0 if k in (1, 14) else 1 for k in range(16)]
