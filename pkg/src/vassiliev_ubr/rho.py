"""Null maps: combinations of permutations whose diagrams vanish.

``rho_A`` and ``rho_B`` send a permutation to a signed combination that maps
to zero in the space of diagrams.  Reduced to normal form, their images span
the relations among irreducibles that the reduction moves miss.
"""

from __future__ import annotations

from typing import Dict

from .perm import (
    LinComb,
    PermError,
    PermLike,
    Values,
    as_values,
    chi_values,
    compose_values,
    group_ring_product,
    identity_values,
    sharp_values,
    theta_values,
    transposition_values,
)

Terms = Dict[Values, int]

# the special relation among identities, starting from degree five
_CYCLE_345 = (1, 2, 4, 5, 3)


def _clean(terms: Terms) -> Terms:
    return {q: c for q, c in terms.items() if c}


def _lin(terms: Terms, characteristic: int) -> LinComb:
    return LinComb.from_values(terms, characteristic)


def rho_A_terms(p: PermLike) -> Terms:
    v = as_values(p)
    n = len(v)
    k = n + 1 - (v.index(1) + 1)
    prime = [0] * n
    for i in range(1, n + 1):
        if i < k:
            prime[i - 1] = v[n - k + i] - 1
        elif i == k:
            prime[i - 1] = n
        else:
            prime[i - 1] = v[n - i] - 1
    prime_t = tuple(prime)
    sign = -1 if (n - k) % 2 else 1
    out: Terms = {v: 1}
    for t, c in theta_values(k, n).items():
        q = compose_values(t, prime_t)
        out[q] = out.get(q, 0) - sign * c
    return _clean(out)


def rho_A(p: PermLike, characteristic: int = 0) -> LinComb:
    """``pi - (-1)^(n-k) Theta_k pi'`` with ``k = n + 1 - pi^{-1}(1)``.

    ``pi'`` rotates the entries after the position of 1 to the front, puts
    ``n`` at position ``k`` and appends the remaining entries reversed, all
    lowered by one.
    """
    return _lin(rho_A_terms(p), characteristic)


def upsilon_terms(sigma: PermLike, k: int) -> Terms:
    s_vals = as_values(sigma)
    s = len(s_vals)
    N = s + 1
    L = s - k - 1
    if k < 0:
        raise PermError(f"upsilon needs k >= 0, got {k}")
    if L < 0 or L + k + 1 > N:
        return {}
    ident = identity_values(N)
    factors = [
        {chi_values(1, L, N): 1},
        theta_values(max(L, 1), N),
        {chi_values(L, k + 1, N): 1},
        {ident: 1, transposition_values(s, N): -1},
        {sharp_values(s_vals): 1},
    ]
    return group_ring_product(*factors)


def upsilon(sigma: PermLike, k: int, characteristic: int = 0) -> LinComb:
    """Element of the group ring of ``S_{s+1}`` built from ``sigma`` in ``S_s``.

    With ``L = s - k - 1`` it is
    ``chi_{1,L} Theta_L chi_{L,k+1} (1 - tau_s) sigma^#``; a block that does not
    fit gives zero and ``Theta_0`` is read as 1.
    """
    return _lin(upsilon_terms(sigma, k), characteristic)


def _prefix_prime(v: Values) -> tuple:
    """Length ``P`` of the fixed prefix, ``q = pi^{-1}(P+1)`` and ``pi'``."""
    n = len(v)
    P = 0
    while P < n and v[P] == P + 1:
        P += 1
    q = v.index(P + 1) + 1
    prime = [0] * (n - 1)
    for i in range(1, n):
        if i == 1 or n - P < i <= n - 1:
            prime[i - 1] = i
        elif 2 <= i <= q - P:
            prime[i - 1] = v[q - i] - P
        else:
            prime[i - 1] = v[i + P - 1] - P
    return P, q, tuple(prime)


def rho_B_terms(m: int, p: PermLike) -> Terms:
    v = as_values(p)
    n = len(v)
    if n > m:
        raise PermError(f"S_{n} lies outside the degree-{m} universe")
    if v == identity_values(m) and m >= 5:
        return {_CYCLE_345: 1, identity_values(5): 1, identity_values(4): -2, identity_values(3): 1}
    if v[0] != 1:
        return {}
    if n == m and v != identity_values(n) and v[-1] not in (2, n):
        P, q, prime = _prefix_prime(v)
        if sorted(prime) != list(range(1, n)):
            raise AssertionError(f"pi' of {v} is not a permutation: {prime}")
        out: Terms = {v: 1}
        t = compose_values(v, transposition_values(P, n))
        out[t] = out.get(t, 0) - 1
        sign = -1 if (q - P) % 2 else 1
        for x, c in upsilon_terms(prime, q - P - 1).items():
            out[x] = out.get(x, 0) + sign * c
        return _clean(out)
    if 3 <= n < m:
        out = {v: 1}
        for x, c in upsilon_terms(v, 0).items():
            out[x] = out.get(x, 0) - c
        return _clean(out)
    return {}


def rho_B(m: int, p: PermLike, characteristic: int = 0) -> LinComb:
    """Null map of the degree-``m`` universe of algorithm B.

    Three cases: the identity of ``S_m`` (``m >= 5``) gives a fixed relation
    among small identities; a non-identity ``pi`` of ``S_m`` fixing 1 with
    ``pi(m)`` not in ``{2, m}`` gives ``pi - pi tau_P`` plus an ``Upsilon``
    term; a ``pi`` fixing 1 in a smaller ``S_n`` gives ``pi - Upsilon(pi, 0)``.
    Everything else maps to zero.
    """
    return _lin(rho_B_terms(m, p), characteristic)
