from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from iwahori_zeta.exactring import (
    DegenerateRatio, GeometricFamily, NonUnitConstantTerm, NotIntegral, QuadElement, SymPoly,
    SymRatFn, SymSeries, complete_homogeneous, complete_homogeneous_monomials, geometric_sum_closed,
    mod_p, qvp, ratfn_eq, series_invert, sym, vp)

T, A, B = sym("T"), sym("A"), sym("B")
rationals = st.builds(Fraction, st.integers(-99, 99), st.integers(1, 50))
names = st.sampled_from(["lam", "A", "B", "b1", "T"])


@st.composite
def polys(draw, max_terms=4):
    out = SymPoly.const(draw(rationals))
    for _ in range(draw(st.integers(0, max_terms))):
        out = out + SymPoly.monomial(draw(rationals), **{draw(names): draw(st.integers(-3, 3))})
    return out


def test_vp_examples():
    assert vp(Fraction(18, 5), 3) == 2
    assert vp(Fraction(5, 27), 3) == -3
    assert vp(0, 3) is None


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6), st.sampled_from([3, 5, 7]))
def test_vp_is_a_valuation(a, b, p):
    assert vp(a * b, p) == vp(a, p) + vp(b, p)
    assert vp(Fraction(a, b), p) == vp(a, p) - vp(b, p)
    assert vp(a + b, p) >= min(vp(a, p), vp(b, p))


def test_mod_p_rejects_non_integral():
    assert mod_p(Fraction(1, 2), 3) == 2
    with pytest.raises(NotIntegral):
        mod_p(Fraction(1, 3), 3)


@given(rationals, rationals, rationals, rationals)
def test_quadratic_norm_is_multiplicative(a, b, c, e):
    x, y = QuadElement(a, b, 7), QuadElement(c, e, 7)
    assert (x * y).norm() == x.norm() * y.norm()
    if x:
        assert x * x.inverse() == 1
        assert x / x == 1


def test_qvp_takes_the_smaller_component():
    assert qvp(QuadElement(9, 3, 4), 3) == 1
    assert qvp(QuadElement(Fraction(1, 3), 3, 4), 3) == -1


@given(polys(), polys(), polys())
def test_laurent_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == SymPoly.const(0)


@given(polys())
def test_monomials_are_units(x):
    m = SymPoly.monomial(Fraction(-2, 3), T=2, A=-1)
    assert m * m.inverse_monomial() == SymPoly.const(1)
    assert (x * m) * m.inverse_monomial() == x


def test_complete_homogeneous_two_ways():
    for k in range(6):
        assert complete_homogeneous(k, [A, B]) == complete_homogeneous_monomials(k, ("A", "B"))
    # h_2(A, B) = A^2 + AB + B^2
    assert complete_homogeneous(2, [A, B]) == A * A + A * B + B * B


def test_series_invert_geometric():
    s = SymSeries.from_poly(SymPoly.const(1) - A * T, 12)
    inv = series_invert(s)
    assert all(inv.coeffs[k] == A ** k for k in range(13))


def test_series_invert_needs_a_unit():
    with pytest.raises(NonUnitConstantTerm):
        series_invert(SymSeries.from_poly(A + B + T, 5))


@given(polys(2), st.integers(1, 3))
def test_ratfn_series_times_denominator_is_numerator(num, k):
    num = num.subs(T=1)
    den = SymPoly.const(1) - A * T - SymPoly.monomial(Fraction(1, 9), T=k)
    order = 15
    f = SymRatFn(num, den)
    expanded = f.to_series(order) * SymSeries.from_poly(den, order)
    assert expanded == SymSeries.from_poly(num, order)


def test_ratfn_equality_is_cross_multiplication():
    x = SymRatFn(A * A - B * B, A - B)
    assert x == A + B
    assert SymRatFn(T, T * T) == SymRatFn(SymPoly.const(1), T)
    assert x != A


def test_geometric_sum_closed():
    r = T * Fraction(1, 3)
    assert geometric_sum_closed(r, 2) == SymRatFn(SymPoly.const(2), 1 - r)
    with pytest.raises(DegenerateRatio):
        geometric_sum_closed(SymPoly.const(1), 1)


@given(st.integers(0, 6), st.integers(0, 4))
def test_geometric_family_matches_pointwise(l, m):
    fam = GeometricFamily.single(Fraction(2, 5), T * Fraction(1, 3), T * T) \
        + GeometricFamily.h_sequence(A, B, T)
    want = Fraction(2, 5) * (T * Fraction(1, 3)) ** l * (T * T) ** m
    if m == 0:
        want = want + complete_homogeneous(l, [A, B]) * T ** l
    else:
        want = want + complete_homogeneous(l, [A, B]) * T ** l
    assert fam.at(l, m) == want


def test_geometric_family_total_against_truncated_sum():
    fam = GeometricFamily.single(Fraction(1, 7), T * Fraction(1, 3), T * T * Fraction(1, 9))
    order = 20
    closed = fam.total(0, 1).to_series(order)
    direct = SymSeries([0], order)
    for m in range(1, 11):
        for l in range(21):
            direct = direct + fam.at(l, m).to_series(order)
    assert closed == direct
