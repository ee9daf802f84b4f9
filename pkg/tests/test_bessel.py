from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwahori_zeta.bessel import (
    FAMILY_OF_T, InconsistentSystem, UnsupportedCharacterValue, bessel_table, certify,
    closed_form_family, closed_form_table, hecke_relations, psi_value, solve_recursion, vanishes,
    verify_hecke_matrix_identities)
from iwahori_zeta.cosets import cells
from iwahori_zeta.exactring import SymPoly, sym
from iwahori_zeta.quadratic import derive_params
from iwahori_zeta.symplectic import eta

LAM = sym("lam")


def test_psi_values():
    assert psi_value(0) == SymPoly.const(1)
    assert psi_value(-1) == sym("zeta1")
    with pytest.raises(UnsupportedCharacterValue):
        psi_value(-2)


def test_vanishing_rule_boundaries():
    assert vanishes("a0", -2, 3) and not vanishes("a0", -1, 3)
    assert vanishes("binf", -1, 0) and not vanishes("binf", -1, 1)
    assert vanishes("c0", -1, 2)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("w", [1, -1])
def test_solver_reproduces_closed_forms(p, w):
    grid = solve_recursion(p, w, 4, 3)
    for l in range(5):
        for m in range(4):
            table = closed_form_table(p, w, l, m)
            for i in cells(m):
                assert grid.value(i, l, m) == table[i]


def test_normalization_and_a_known_value():
    table = closed_form_table(3, 1, 0, 0)
    assert table[5] == SymPoly.const(1)
    assert table[7] == LAM * Fraction(-1, 27)
    # l = 1 multiplies by -p w p^-4
    assert closed_form_table(3, -1, 1, 0)[5] == SymPoly.const(Fraction(3, 81))


def test_certify_passes():
    r = certify(3, -1, 5, 5)
    assert r.ok, r.witness


def test_perturbed_relation_is_inconsistent():
    rels = hecke_relations(3, 1)
    rels[11] = replace(rels[11], coeff=lambda l, m: SymPoly.const(Fraction(1, 3 ** 3)))
    with pytest.raises(InconsistentSystem) as exc:
        solve_recursion(3, 1, 3, 3, rels)
    assert exc.value.witness


@given(st.integers(0, 6), st.integers(0, 6), st.sampled_from([3, 5, 7]), st.sampled_from([1, -1]))
def test_family_matches_table(l, m, p, w):
    table = closed_form_table(p, w, l, m)
    for i in cells(m):
        assert closed_form_family(i, m > 0, p, w).at(l, m) == table[i]


@given(st.integers(0, 6), st.integers(1, 6), st.sampled_from([3, 5]))
def test_m_step_is_p_minus_4(l, m, p):
    a, b = closed_form_table(p, 1, l, m), closed_form_table(p, 1, l, m + 1)
    assert all(b[i] == a[i] * Fraction(1, p ** 4) for i in cells(m))


def test_lam_only_at_t7_m0():
    for m in range(3):
        for i, v in closed_form_table(5, 1, 2, m).items():
            assert v.uses("lam") == (m == 0 and i == 7)
            assert not v.uses("zeta1")


def test_family_labels_cover_all_cells():
    assert sorted(FAMILY_OF_T) == list(range(1, 9))


def test_hecke_identities_up_to_iwahori():
    r = verify_hecke_matrix_identities(3, derive_params(7, 3), range(3), range(3), mode="coset")
    assert r.ok, [f.witness for f in r.failures()][:1]


def test_hecke_identities_as_displayed_have_known_failures():
    r = verify_hecke_matrix_identities(3, derive_params(4, 3), range(2), range(2), mode="printed")
    names = {f.check.split(" =")[0] for f in r.failures()}
    assert "(h(l+1,m) B^inf)^-1 h(l,m) A^0 eta" in names
    assert "B^0 R_inf" in names
    assert not any(n.startswith("A^0 R_") or n.startswith("U_(0,0,p)") for n in names)


def test_wrong_eta_breaks_the_coset_identities():
    r = verify_hecke_matrix_identities(3, None, range(2), range(2), mode="coset", eta_p=eta(3).T)
    assert not r.ok


def test_bessel_table_keys():
    tab = bessel_table(3, 1, range(2), range(2))
    assert len(tab) == 2 * 4 + 2 * 8
