import pytest
from hypothesis import given, strategies as st

from iwahori_zeta.quadratic import ConfigError, derive_params, is_inert, legendre

primes = st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23])
discs = st.integers(3, 200).filter(lambda d: d % 4 in (0, 3))


@given(st.integers(-500, 500), primes)
def test_legendre_matches_square_search(a, p):
    squares = {x * x % p for x in range(1, p)}
    want = 0 if a % p == 0 else (1 if a % p in squares else -1)
    assert legendre(a, p) == want


@given(discs, primes)
def test_derived_forms_have_the_right_discriminant(d, p):
    if not is_inert(d, p):
        with pytest.raises(ConfigError):
            derive_params(d, p)
        return
    prm = derive_params(d, p)
    assert prm.b * prm.b - 4 * prm.a * prm.c == -d
    assert prm.a % p and prm.c % p
    # alpha is a root of c x^2 - b x + a
    x = prm.alpha
    assert prm.c * x * x - prm.b * x + prm.a == 0


def test_examples():
    assert is_inert(4, 3) and is_inert(7, 3) and is_inert(7, 5)
    assert not is_inert(4, 5)
    with pytest.raises(ConfigError):
        derive_params(5, 11)
    with pytest.raises(ConfigError):
        derive_params(-4, 3)
