from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwahori_zeta.cosets import cells
from iwahori_zeta.exactring import SymPoly, complete_homogeneous, sym
from iwahori_zeta.quadratic import derive_params
from iwahori_zeta.symplectic import GMat
from iwahori_zeta.whittaker import (
    CaseTag, UnsupportedArgument, gl2_newvector_value, gl2_whittaker, printed_decompositions,
    support, value_from_decomposition, verify_decompositions, whittaker_family, whittaker_value)

T, A, B = sym("T"), sym("A"), sym("B")
CASES = ["unram-st", "st-st", "st-unram"]


def test_case_parsing():
    assert CaseTag.parse("st-st") is CaseTag.StPi_StSigma
    assert CaseTag.parse("StPi_UnramSigma") is CaseTag.StPi_UnramSigma
    with pytest.raises(ValueError):
        CaseTag.parse("st")


def test_supports():
    assert support("unram-st", 0) == (1, 5)
    assert support("st-st", 0) == ()
    assert support("st-unram", 0) == (5,)
    assert support("st-unram", 2) == (3, 5)


@given(st.sampled_from(CASES), st.integers(0, 5), st.integers(0, 4), st.sampled_from([3, 5]),
       st.sampled_from([1, -1]))
def test_values_vanish_off_support(case, l, m, p, a):
    for i in cells(m):
        v = whittaker_value(case, p, l, m, i, a)
        assert v.zero == (i not in support(case, m))


def test_value_examples():
    assert whittaker_value("st-unram", 3, 2, 0, 5).poly == (A * A + A * B + B * B) * T ** 2 / 9
    assert whittaker_value("unram-st", 3, 1, 1, 3, a_p=-1).poly == \
        SymPoly.monomial(Fraction(1, 3 * 81), T=3)
    assert whittaker_value("st-st", 5, 0, 1, 6).poly == SymPoly.monomial(Fraction(1, 25), T=2)


@given(st.sampled_from(CASES), st.integers(0, 5), st.integers(0, 4), st.sampled_from([3, 7]),
       st.sampled_from([1, -1]))
def test_family_matches_pointwise(case, l, m, p, a):
    for i in cells(m):
        fam = whittaker_family(case, i, m > 0, p, a)
        assert fam.at(l, m) == whittaker_value(case, p, l, m, i, a).poly


def test_gl2_newvectors():
    assert gl2_newvector_value("unramified", 2) == complete_homogeneous(2, [A, B])
    assert gl2_newvector_value("unramified", -1).is_zero()
    assert gl2_newvector_value("steinberg", 1, p=3, a_p=-1) == SymPoly.const(Fraction(-1, 3))
    assert gl2_newvector_value("steinberg", -1, weyl=True, p=3) == SymPoly.const(-1)
    assert gl2_newvector_value("steinberg", -2, weyl=True, p=3).is_zero()


def test_gl2_whittaker_reduces_to_diagonal():
    g = GMat([[9, 0], [0, 1]])
    assert gl2_whittaker("unramified", g, 3) == complete_homogeneous(2, [A, B])
    with pytest.raises(UnsupportedArgument):
        gl2_whittaker("steinberg", GMat([[1, Fraction(1, 3)], [0, 1]]), 3)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("d,p", [(4, 3), (7, 3), (7, 5)])
def test_corrected_decompositions(case, d, p):
    r = verify_decompositions(case, p, derive_params(d, p), range(3), range(3), mode="corrected")
    assert r.ok, [f.witness for f in r.failures()][:1]


@pytest.mark.parametrize("case,bad", [("unram-st", {5, 7}), ("st-st", {4, 5, 6}),
                                      ("st-unram", {5})])
def test_printed_decompositions_fail_where_recorded(case, bad):
    r = verify_decompositions(case, 3, derive_params(7, 3), range(2), range(3), mode="printed")
    failing = {int(f.check.split("_")[1]) for f in r.failures()}
    assert failing == bad
    assert all(f.witness["required_k_in_compact"] for f in r.failures())


@given(st.integers(0, 4), st.integers(1, 4))
def test_decomposition_values_equal_table(l, m):
    prm = derive_params(7, 3)
    for case in CASES:
        for i, dec in printed_decompositions(case, l, m, 3, prm.alpha).items():
            got = value_from_decomposition(case, dec, l, m, 3).poly
            assert got == whittaker_value(case, 3, l, m, i).poly
