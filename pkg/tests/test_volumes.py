from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwahori_zeta.cosets import cells
from iwahori_zeta.quadratic import derive_params
from iwahori_zeta.volumes import (
    A_EXPONENT, GAMMA_LOWER, GAMMA_UPPER, H_TAG, assembled_volume, compute_At_Ht_by_enumeration,
    gamma_orders, order_level, order_level_from_torus, unit_index_oracle, verify_volumes, volume,
    volume_family)


@pytest.mark.parametrize("p", [3, 5])
def test_enumerated_indices_match_the_tables(p):
    prof = compute_At_Ht_by_enumeration(p)
    for i in range(1, 9):
        assert prof.A[i] == p ** A_EXPONENT[i] * (p + 1)
        assert prof.tag[i] == H_TAG[i]
    assert prof.tag[1] == GAMMA_UPPER and prof.tag[3] == GAMMA_LOWER


def test_gamma_orders():
    assert gamma_orders(5) == (5 * 16, 5 * 16)


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)])
def test_unit_index(p, k):
    assert unit_index_oracle(p, k) == p ** (k - 1) * (p + 1)


def test_unit_index_does_not_depend_on_the_form():
    prm = derive_params(7, 3)
    assert unit_index_oracle(3, 2, form=(1, prm.b, prm.a * prm.c)) == unit_index_oracle(3, 2)


@pytest.mark.parametrize("d,p", [(4, 3), (7, 3), (7, 5)])
def test_order_level_from_the_torus(d, p):
    prm = derive_params(d, p)
    for m in range(4):
        for i in cells(m):
            assert order_level_from_torus(i, m, p, prm) == order_level(i, m)


def test_m0_volume_of_the_identity_cell():
    # I_p itself: 1 / [K : I_p]
    assert volume(0, 0, 5, 3) == Fraction(1, 4 * 10)


@given(st.integers(0, 5), st.integers(0, 5), st.sampled_from([3, 5, 7]))
def test_family_matches_pointwise(l, m, p):
    for i in cells(m):
        assert volume_family(i, m > 0, p).at(l, m) == volume(l, m, i, p)


@given(st.integers(0, 5), st.integers(0, 5), st.sampled_from([3, 5, 7]))
def test_product_route_agrees_except_t6(l, m, p):
    for i in cells(m):
        got = assembled_volume(l, m, i, p)
        if i == 6:
            assert got * p ** 2 == volume(l, m, i, p)
        else:
            assert got == volume(l, m, i, p)


def test_verify_volumes_modes():
    assert verify_volumes(3, range(3), range(3), derive_params(4, 3), mode="corrected").ok
    printed = verify_volumes(3, range(3), range(3), derive_params(4, 3), mode="printed")
    assert not printed.ok
    assert printed.witness is None
    assert {f.witness["t"] for f in printed.failures()} == {6}
