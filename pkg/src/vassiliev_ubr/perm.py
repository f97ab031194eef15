"""Permutations, their total order and the group-ring elements used by both algorithms.

Permutations are stored as 1-based value tuples: entry ``i`` (counting from 1)
holds the image of ``i``.  Products follow the convention

    (a * b)(i) = b(a(i)),

so ``compose(a, b)`` first applies ``a`` and then ``b``.  Every formula in this
package is evaluated under this single convention.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations as _iter_permutations
from math import factorial
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Values = Tuple[int, ...]


class PermError(ValueError):
    """Raised on invalid permutation data or out-of-range indices."""


def _check(values: Values) -> None:
    n = len(values)
    if n < 1:
        raise PermError("a permutation needs at least one entry")
    if sorted(values) != list(range(1, n + 1)):
        raise PermError(f"{values!r} is not a permutation of 1..{n}")


class Perm:
    """A permutation of ``{1..n}``.

    Ordering is by size first and lexicographically within a size, which is
    the total order both reduction algorithms rely on.
    """

    __slots__ = ("values",)

    def __init__(self, values: Iterable[int], check: bool = True):
        vals = tuple(int(v) for v in values)
        if check:
            _check(vals)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.values):
            raise PermError(f"index {i} out of range for S_{len(self.values)}")
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __hash__(self) -> int:
        return hash(self.values)

    def __eq__(self, other) -> bool:
        if isinstance(other, Perm):
            return self.values == other.values
        return NotImplemented

    def __lt__(self, other: "Perm") -> bool:
        return sort_key(self.values) < sort_key(other.values)

    def __le__(self, other: "Perm") -> bool:
        return sort_key(self.values) <= sort_key(other.values)

    def __gt__(self, other: "Perm") -> bool:
        return sort_key(self.values) > sort_key(other.values)

    def __ge__(self, other: "Perm") -> bool:
        return sort_key(self.values) >= sort_key(other.values)

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(compose_values(self.values, other.values), check=False)

    def inverse(self) -> "Perm":
        return Perm(inverse_values(self.values), check=False)

    def __repr__(self) -> str:
        return f"Perm({self.values})"

    def __str__(self) -> str:
        if len(self.values) < 10:
            return "".join(str(v) for v in self.values)
        return "(" + ",".join(str(v) for v in self.values) + ")"


PermLike = Union[Perm, Values]


def as_values(p: PermLike) -> Values:
    return p.values if isinstance(p, Perm) else tuple(p)


def sort_key(values: Values) -> Tuple[int, Values]:
    """Key realizing the total order over all sizes."""
    return (len(values), values)


# ---------------------------------------------------------------------------
# tuple-level arithmetic (hot paths use these directly)


def compose_values(a: Values, b: Values) -> Values:
    if len(a) != len(b):
        raise PermError(f"size mismatch: S_{len(a)} vs S_{len(b)}")
    return tuple(b[x - 1] for x in a)


def inverse_values(a: Values) -> Values:
    inv = [0] * len(a)
    for i, v in enumerate(a, 1):
        inv[v - 1] = i
    return tuple(inv)


def identity_values(n: int) -> Values:
    return tuple(range(1, n + 1))


def standardize(seq) -> Values:
    """Replace distinct sortable keys by their ranks 1..n."""
    order = sorted(seq)
    rank = {v: r for r, v in enumerate(order, 1)}
    return tuple(rank[v] for v in seq)


# ---------------------------------------------------------------------------
# public operations


def identity(n: int) -> Perm:
    if n < 1:
        raise PermError("n must be positive")
    return Perm(identity_values(n), check=False)


def compare(a: PermLike, b: PermLike) -> int:
    """Return -1, 0 or 1 according to the total order."""
    ka, kb = sort_key(as_values(a)), sort_key(as_values(b))
    return (ka > kb) - (ka < kb)


def compose(a: PermLike, b: PermLike) -> Perm:
    """Product ``a * b`` with ``(a * b)(i) = b(a(i))``."""
    return Perm(compose_values(as_values(a), as_values(b)), check=False)


def transposition_values(i: int, n: int) -> Values:
    if not 1 <= i < n:
        raise PermError(f"transposition index {i} out of range for S_{n}")
    v = list(range(1, n + 1))
    v[i - 1], v[i] = v[i], v[i - 1]
    return tuple(v)


def transposition(i: int, n: int) -> Perm:
    """The elementary transposition swapping ``i`` and ``i + 1``."""
    return Perm(transposition_values(i, n), check=False)


def chi_values(r: int, s: int, n: int) -> Values:
    if r < 0 or s < 0 or r + s > n:
        raise PermError(f"chi({r}, {s}) needs r + s <= n = {n}")
    out = []
    for i in range(1, n + 1):
        if i <= r:
            out.append(i + s)
        elif i <= r + s:
            out.append(i - r)
        else:
            out.append(i)
    return tuple(out)


def chi(r: int, s: int, n: int) -> Perm:
    """Block exchange moving the first ``r`` points up by ``s``."""
    return Perm(chi_values(r, s, n), check=False)


def sharp_values(p: Values) -> Values:
    """Double the last strand: result has one more entry, last two adjacent."""
    v = p[-1]
    return tuple(x if x <= v else x + 1 for x in p) + (v + 1,)


def sharp(p: PermLike) -> Perm:
    return Perm(sharp_values(as_values(p)), check=False)


# ---------------------------------------------------------------------------
# linear combinations


class LinComb:
    """Finite formal sum of permutations with integer or ``F_p`` coefficients.

    Sizes may be mixed.  ``characteristic`` 0 keeps integers; a prime reduces
    every coefficient into ``[0, p)``.  Zero coefficients are never stored.
    """

    __slots__ = ("terms", "characteristic")

    def __init__(self, terms: Mapping[PermLike, int] | None = None, characteristic: int = 0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise PermError(f"characteristic {characteristic} is not prime")
        self.characteristic = characteristic
        self.terms: Dict[Perm, int] = {}
        if terms:
            for p, c in terms.items():
                self._add(p if isinstance(p, Perm) else Perm(p), c)

    def _norm(self, c: int) -> int:
        return c % self.characteristic if self.characteristic else c

    def _add(self, p: Perm, c: int) -> None:
        c = self._norm(self.terms.get(p, 0) + c)
        if c:
            self.terms[p] = c
        else:
            self.terms.pop(p, None)

    @classmethod
    def from_values(cls, terms: Mapping[Values, int], characteristic: int = 0) -> "LinComb":
        out = cls(characteristic=characteristic)
        for v, c in terms.items():
            out._add(Perm(v, check=False), c)
        return out

    def value_terms(self) -> Dict[Values, int]:
        return {p.values: c for p, c in self.terms.items()}

    def reduce(self, characteristic: int) -> "LinComb":
        return LinComb(self.terms, characteristic)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, p: PermLike) -> int:
        p = p if isinstance(p, Perm) else Perm(p)
        return self.terms.get(p, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self.terms == other.terms
        return NotImplemented

    def _combine(self, other: "LinComb", sign: int) -> "LinComb":
        out = LinComb(self.terms, self.characteristic or other.characteristic)
        for p, c in other.terms.items():
            out._add(p, sign * c)
        return out

    def __add__(self, other: "LinComb") -> "LinComb":
        return self._combine(other, 1)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self._combine(other, -1)

    def __neg__(self) -> "LinComb":
        return LinComb({p: -c for p, c in self.terms.items()}, self.characteristic)

    def scale(self, k: int) -> "LinComb":
        return LinComb({p: k * c for p, c in self.terms.items()}, self.characteristic)

    def __mul__(self, other: "LinComb") -> "LinComb":
        """Group-ring product under the compose convention."""
        if isinstance(other, Perm):
            other = LinComb({other: 1})
        out = LinComb(characteristic=self.characteristic or other.characteristic)
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                out._add(Perm(compose_values(a.values, b.values), check=False), ca * cb)
        return out

    def augmentation(self) -> int:
        return self._norm(sum(self.terms.values()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for p, c in self:
            parts.append(f"{c:+d}*{p}")
        return " ".join(parts)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def group_ring_product(*factors: Mapping[Values, int]) -> Dict[Values, int]:
    """Multiply dicts ``values -> coefficient`` left to right."""
    acc: Dict[Values, int] = dict(factors[0])
    for f in factors[1:]:
        nxt: Dict[Values, int] = {}
        for a, ca in acc.items():
            for b, cb in f.items():
                q = compose_values(a, b)
                nxt[q] = nxt.get(q, 0) + ca * cb
        acc = {q: c for q, c in nxt.items() if c}
    return acc


@lru_cache(maxsize=None)
def _theta_items(k: int, n: int) -> Tuple[Tuple[Values, int], ...]:
    if not 1 <= k <= n:
        raise PermError(f"theta needs 1 <= k <= n, got k={k}, n={n}")
    ident = identity_values(n)
    acc: Dict[Values, int] = {ident: 1}
    for i in range(1, k):
        g = ident
        for j in range(1, k - i + 1):
            g = compose_values(g, transposition_values(k - j, n))
        acc = group_ring_product(acc, {ident: 1, g: -1})
    return tuple(sorted(acc.items()))


def theta_values(k: int, n: int) -> Dict[Values, int]:
    return dict(_theta_items(k, n))


def theta(k: int, n: int) -> LinComb:
    """Signed expansion of the product of ``(1 - tau_{k-1} ... tau_i)``, ``i = 1..k-1``."""
    return LinComb.from_values(theta_values(k, n))


# ---------------------------------------------------------------------------
# the G = Z/n x Z/2 x Z/n action and orbit minimization


def act_values(a: int, b: int, c: int, p: Values) -> Values:
    """``nu^a mu^b p nu^c`` with nu the full cycle and mu the reversal."""
    n = len(p)
    # left factors permute positions, the right factor shifts values
    pos = [(i + a) % n for i in range(n)]
    if b:
        pos = [n - 1 - x for x in pos]
    return tuple((p[x] - 1 + c) % n + 1 for x in pos)


def act(a: int, b: int, c: int, p: PermLike) -> Perm:
    return Perm(act_values(a % len(as_values(p)), b % 2, c % len(as_values(p)), as_values(p)), check=False)


def orbit_minimize_values(p: Values) -> Tuple[Values, int, Tuple[int, int, int]]:
    """Orbit minimum, its sign and the chosen group element.

    Among group elements reaching the minimum, ``beta = 0`` is preferred, then
    the smallest ``(alpha, gamma)``.
    """
    n = len(p)
    best = None
    for b in (0, 1):
        for a in range(n):
            for c in range(n):
                q = act_values(a, b, c, p)
                if best is None or q < best[0]:
                    best = (q, (a, b, c))
    q, g = best
    sign = -1 if (n * g[1]) % 2 else 1
    return q, sign, g


def orbit_minimize(p: PermLike) -> Tuple[Perm, int]:
    vals = as_values(p)
    if len(vals) < 3:
        raise PermError("orbit minimization is defined for n >= 3")
    q, sign, _ = orbit_minimize_values(vals)
    return Perm(q, check=False), sign


def orbit_sign_conflict(p: PermLike) -> bool:
    """True when the orbit minimum is reached with both values of beta and odd n.

    Such a minimum equals its own negative, so it is 2-torsion in the target.
    """
    vals = as_values(p)
    n = len(vals)
    if n % 2 == 0:
        return False
    target, _, _ = orbit_minimize_values(vals)
    hits = {
        b
        for b in (0, 1)
        for a in range(n)
        for c in range(n)
        if act_values(a, b, c, vals) == target
    }
    return hits == {0, 1}


# ---------------------------------------------------------------------------
# lexicographic ranking


def rank_values(p: Values) -> int:
    """Lexicographic rank of ``p`` within ``S_n`` (0-based)."""
    n = len(p)
    r = 0
    remaining = list(range(1, n + 1))
    for i, v in enumerate(p):
        j = remaining.index(v)
        r += j * factorial(n - 1 - i)
        remaining.pop(j)
    return r


def unrank_values(r: int, n: int) -> Values:
    if not 0 <= r < factorial(n):
        raise PermError(f"rank {r} out of range for S_{n}")
    remaining = list(range(1, n + 1))
    out = []
    for i in range(n):
        f = factorial(n - 1 - i)
        j, r = divmod(r, f)
        out.append(remaining.pop(j))
    return tuple(out)


def all_values(n: int) -> Iterator[Values]:
    """All of ``S_n`` in ascending order."""
    return _iter_permutations(range(1, n + 1))
