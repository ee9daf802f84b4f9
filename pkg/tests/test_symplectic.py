from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from iwahori_zeta.quadratic import derive_params
from iwahori_zeta.symplectic import (
    GMat, J, count_gsp4_fp, diag, embed_gl2, eta, gsp4_order, h, identity, in_iwahori,
    in_borel_fp, is_gsp, is_gu, m2, reduce_mod_p, similitude, t, theta)

gl2 = st.tuples(*[st.integers(-6, 6)] * 4).filter(lambda x: x[0] * x[3] - x[1] * x[2] != 0)


def _gl2(x):
    return GMat([[x[0], x[1]], [x[2], x[3]]])


@pytest.mark.parametrize("i", range(1, 9))
def test_cell_representatives_are_integral_symplectic(i):
    g = t(i)
    assert is_gsp(g) and similitude(g) in (1, -1)
    assert g @ g.inv() == identity()
    assert all(Fraction(e).denominator == 1 for e in g.entries())


@given(st.integers(0, 4), st.integers(0, 4), st.sampled_from([3, 5]))
def test_h_is_a_similitude(l, m, p):
    g = h(l, m, p)
    assert is_gsp(g)
    assert similitude(g) == Fraction(p) ** (2 * m + l)


@given(gl2, gl2)
def test_levi_embedding_is_a_homomorphism(x, y):
    a, b = _gl2(x), _gl2(y)
    assert embed_gl2(a @ b) == embed_gl2(a) @ embed_gl2(b)
    assert is_gsp(embed_gl2(a))
    assert similitude(embed_gl2(a)) == a.det()


@given(gl2, gl2)
def test_similitude_is_multiplicative(x, y):
    g1, g2 = embed_gl2(_gl2(x)) @ t(4), m2(_gl2(y)) @ eta(3)
    assert similitude(g1 @ g2) == similitude(g1) * similitude(g2)


def test_theta_lies_in_the_unitary_group():
    prm = derive_params(4, 3)
    th = theta(prm.alpha)
    assert is_gu(th)
    assert not th.is_rational()


def test_eta_has_similitude_minus_p():
    assert is_gsp(eta(5)) and similitude(eta(5)) == -5


@pytest.mark.parametrize("p", [3])
def test_gsp4_enumeration_counts(p):
    total, sim_one, borel = count_gsp4_fp(p)
    assert total == gsp4_order(p)
    assert sim_one * (p - 1) == total
    assert borel == p ** 4 * (p - 1) ** 3


def test_iwahori_membership():
    assert in_iwahori(identity(), 3)
    assert not in_iwahori(diag(1, 1, 3, 3), 3)
    assert not in_iwahori(t(7), 3)
    assert in_iwahori(t(5), 3)
    assert in_borel_fp(reduce_mod_p(identity(), 3), 3)


def test_J_form():
    assert J @ J == identity().scale(-1)
