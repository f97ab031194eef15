from functools import lru_cache
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chord_oracle import Quotient, image, line_diagram, wheel_diagram
from vassiliev_ubr.perm import PermError
from vassiliev_ubr.rho import _prefix_prime, rho_A, rho_A_terms, rho_B, rho_B_terms, upsilon, upsilon_terms


@lru_cache(maxsize=None)
def quotient(m):
    return Quotient(m)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_rho_A_images_vanish(m):
    q = quotient(m)
    for p in permutations(range(1, m)):
        assert q.is_zero(image(rho_A_terms(p), line_diagram)), p


@pytest.mark.parametrize("m", [3, 4, 5])
def test_rho_B_images_vanish(m):
    q = quotient(m)
    build = lambda x: wheel_diagram(x, m)  # noqa: E731
    for n in range(3, m + 1):
        for p in permutations(range(1, n + 1)):
            assert q.is_zero(image(rho_B_terms(m, p), build)), p


def test_oracle_is_not_trivial():
    # the diagrams themselves mostly survive, so vanishing above means something
    q = quotient(5)
    alive = sum(not q.is_zero(image({p: 1}, line_diagram)) for p in permutations(range(1, 5)))
    assert alive > 0


@given(st.integers(1, 7).flatmap(lambda n: st.permutations(range(1, n + 1)).map(tuple)))
def test_rho_A_stays_in_the_same_group(p):
    terms = rho_A_terms(p)
    assert all(len(q) == len(p) for q in terms)
    assert rho_A(p, 2) == rho_A(p).reduce(2)


def test_rho_A_small():
    assert rho_A_terms((1,)) == {}
    assert rho_A_terms((1, 2)) == {(2, 1): 1}
    # the diagram of 21 vanishes rationally, so twice it is a valid relation
    assert rho_A_terms((2, 1)) == {(2, 1): 2}
    assert quotient(3).is_zero(image({(2, 1): 1}, line_diagram))


def test_upsilon_range():
    assert upsilon_terms((1, 2), 5) == {}
    with pytest.raises(PermError):
        upsilon_terms((1, 2), -1)
    t = upsilon_terms((1, 3, 2), 0)
    assert t and all(len(q) == 4 for q in t)
    assert upsilon((1, 3, 2), 0) == upsilon((1, 3, 2), 0, 0)


def test_prefix_prime_is_a_permutation():
    for n in range(4, 8):
        for p in permutations(range(1, n + 1)):
            if p[0] != 1 or p == tuple(range(1, n + 1)):
                continue
            P, q, prime = _prefix_prime(p)
            assert P >= 1 and p[q - 1] == P + 1
            assert sorted(prime) == list(range(1, n))


def test_rho_B_cases():
    # identity relation among small identities
    assert rho_B_terms(5, (1, 2, 3, 4, 5)) == {(1, 2, 4, 5, 3): 1, (1, 2, 3, 4, 5): 1, (1, 2, 3, 4): -2, (1, 2, 3): 1}
    # permutations not fixing 1 give nothing
    assert rho_B_terms(6, (2, 1, 3, 4)) == {}
    # last value 2 or n is excluded in the top size
    assert rho_B_terms(5, (1, 3, 4, 5, 2)) == {}
    assert rho_B_terms(5, (1, 3, 2, 4, 5)) == {}
    # smaller sizes always give pi - Upsilon(pi, 0)
    small = rho_B_terms(6, (1, 3, 2, 4))
    assert small[(1, 3, 2, 4)] == 1
    with pytest.raises(PermError):
        rho_B_terms(4, (1, 2, 3, 4, 5))
    assert rho_B(5, (1, 2, 3, 4, 5), 2) == rho_B(5, (1, 2, 3, 4, 5)).reduce(2)
