"""Reducing moves, the reduction map and its fixpoint table.

Each move rewrites a permutation as a signed combination of other
permutations.  A move is *reducing* when every resulting term is strictly
smaller than the input; the reduction map applies the smallest reducing move
and fixes permutations that have none (the irreducibles).  Iterating to the
fixpoint gives the normal form, which is computed bottom-up: every term of a
reducing move is smaller, so its normal form is already known.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Dict, Iterator, List, Optional, Tuple

from .perm import (
    PermLike,
    Values,
    as_values,
    identity_values,
    orbit_minimize_values,
    sort_key,
)

Terms = Dict[Values, int]

_KIND_RANK = {"I": 0, "Iprime": 0, "II": 1, "IIprime": 1, "III": 2}


@dataclass(frozen=True)
class Move:
    """A move and where it acts.

    ``index`` is the 1-based position ``i`` for II and II'; for III it is the
    triple ``(i, j, k)``: the two swapped positions and the leg that is
    opened.  Moves I and I' carry no index.
    """

    kind: str
    index: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown move kind {self.kind!r}")

    def key(self):
        return (_KIND_RANK[self.kind], self.index)

    def __lt__(self, other: "Move") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        name = self.kind.replace("prime", "'")
        return name if not self.index else f"{name}{self.index if len(self.index) > 1 else self.index[0]}"


class UnknownAlgorithm(ValueError):
    pass


def _check_alg(alg: str) -> str:
    a = alg.upper()
    if a not in ("A", "B"):
        raise UnknownAlgorithm(f"algorithm must be 'A' or 'B', got {alg!r}")
    return a


# ---------------------------------------------------------------------------
# move right-hand sides


def _standard(seq: List[Tuple[int, ...]]) -> Values:
    order = sorted(seq)
    rank = {v: r for r, v in enumerate(order, 1)}
    return tuple(rank[v] for v in seq)


def _chains(legs: List[Tuple[int, ...]]) -> List[Tuple[List[Tuple[int, ...]], int]]:
    """Orderings of a branch along the circle after repeated STU steps.

    ``legs[0]`` hangs closest to the attaching point, ``legs[-1]`` is the
    terminal leaf.  Each step puts the nearest leg either before (sign +1) or
    after (sign -1) the rest.
    """
    if len(legs) == 1:
        return [(list(legs), 1)]
    out = []
    for rest, s in _chains(legs[1:]):
        out.append(([legs[0]] + rest, s))
        out.append((rest + [legs[0]], -s))
    return out


def inner_opening(p: Values, i: int, j: int, k: int) -> Terms:
    """Right-hand side of move III at 0-based positions ``i < k < j``.

    Requires ``p[i] == p[j] + 1``.  The first term swaps the two values; the
    rest come from opening leg ``k`` and expanding both halves of the spine
    between ``i`` and ``j`` back onto the circle.
    """
    n = len(p)
    swapped = list(p)
    swapped[i], swapped[j] = p[j], p[i]
    out: Terms = {tuple(swapped): 1}
    head = [(p[x],) for x in range(i)]
    tail = [(p[x],) for x in range(j + 1, n)]
    for lo in (0, 1):
        left = [(p[x],) for x in range(i + 1, k)] + [(p[k], lo)]
        right = [(p[x],) for x in range(j - 1, k, -1)] + [(p[k], 1 - lo)]
        for si, ci in _chains(left):
            for sj, cj in _chains(right):
                q = _standard(head + si + [(p[j],)] + sj + tail)
                # the right branch is read against the circle direction
                c = ci * cj if lo else -ci * cj
                if (j - k - 1) % 2:
                    c = -c
                out[q] = out.get(q, 0) + c
    return {q: c for q, c in out.items() if c}


def _move_I(p: Values) -> Terms:
    return {(1,) + tuple(x + 1 for x in p[:-1]): 1}


def _move_II(p: Values, i: int) -> Terms:
    """Move II at 0-based ``i`` (``p[i] == p[i+1] + 1``)."""
    t = list(p)
    t[i], t[i + 1] = t[i + 1], t[i]
    a = p[i]

    def lift(v: int) -> int:
        return 1 if v == a else (v + 1 if v < a else v)

    r = (1,) + tuple(lift(p[x]) for x in range(i)) + (a,) + tuple(lift(p[x]) for x in range(i + 2, len(p)))
    out: Terms = {tuple(t): 1}
    out[r] = out.get(r, 0) - 1
    return {q: c for q, c in out.items() if c}


def _move_IIprime(p: Values, i: int) -> Terms:
    t = list(p)
    t[i], t[i + 1] = t[i + 1], t[i]
    v = p[i + 1]
    shorter = tuple(x if x <= v else x - 1 for pos, x in enumerate(p) if pos != i)
    return {tuple(t): 1, shorter: -1}


def apply_move(alg: str, p: PermLike, move: Move) -> Terms:
    """Signed right-hand side of ``move`` applied to ``p`` (no reducing check)."""
    alg = _check_alg(alg)
    v = as_values(p)
    n = len(v)
    if move.kind == "I":
        if alg != "A" or v[-1] != n:
            raise ValueError(f"move I does not apply to {v}")
        return _move_I(v)
    if move.kind == "II":
        (i,) = move.index
        if alg != "A" or not 1 <= i < n or v[i - 1] != v[i] + 1:
            raise ValueError(f"move II{i} does not apply to {v}")
        return _move_II(v, i - 1)
    if move.kind == "Iprime":
        if alg != "B" or n < 3:
            raise ValueError(f"move I' does not apply to {v}")
        q, sign, _ = orbit_minimize_values(v)
        return {q: sign}
    if move.kind == "IIprime":
        (i,) = move.index
        if alg != "B" or n < 4 or not 1 <= i < n or v[i - 1] != v[i] + 1:
            raise ValueError(f"move II'{i} does not apply to {v}")
        return _move_IIprime(v, i - 1)
    i, j, k = move.index
    if not (1 <= i < k < j <= n) or v[i - 1] != v[j - 1] + 1:
        raise ValueError(f"move III{move.index} does not apply to {v}")
    return inner_opening(v, i - 1, j - 1, k - 1)


# ---------------------------------------------------------------------------
# move selection


def _smaller(terms: Terms, p: Values) -> bool:
    kp = sort_key(p)
    return all(sort_key(q) < kp for q in terms)


def _inner_candidates(p: Values) -> Iterator[Tuple[Move, Terms]]:
    n = len(p)
    for i in range(n):
        for j in range(i + 2, n):
            if p[i] != p[j] + 1:
                continue
            for k in range(i + 1, j):
                yield Move("III", (i + 1, j + 1, k + 1)), inner_opening(p, i, j, k)


def candidate_moves(alg: str, p: PermLike) -> Iterator[Tuple[Move, Terms]]:
    """Applicable moves in the fixed order, with their right-hand sides."""
    alg = _check_alg(alg)
    v = as_values(p)
    n = len(v)
    if alg == "A":
        if v[-1] == n:
            yield Move("I"), _move_I(v)
        for i in range(n - 1):
            if v[i] == v[i + 1] + 1:
                yield Move("II", (i + 1,)), _move_II(v, i)
    else:
        q, sign, _ = orbit_minimize_values(v)
        yield Move("Iprime"), {q: sign}
        if n >= 4:
            for i in range(n - 1):
                if v[i] == v[i + 1] + 1:
                    yield Move("IIprime", (i + 1,)), _move_IIprime(v, i)
    yield from _inner_candidates(v)


def smallest_reducing_move(alg: str, p: PermLike) -> Optional[Tuple[Move, Terms]]:
    v = as_values(p)
    for move, terms in candidate_moves(alg, v):
        if _smaller(terms, v):
            return move, terms
    return None


def smallest_reducing_move_A(p: PermLike) -> Optional[Move]:
    """First move (I, then II by position, then III) whose terms are all smaller."""
    hit = smallest_reducing_move("A", p)
    return hit[0] if hit else None


def smallest_reducing_move_B(p: PermLike) -> Optional[Move]:
    """As for A, with the orbit move I' and the strand-dropping move II'."""
    if len(as_values(p)) < 3:
        raise ValueError("algorithm B works on S_n with n >= 3")
    hit = smallest_reducing_move("B", p)
    return hit[0] if hit else None


def delta(alg: str, p: PermLike) -> Terms:
    """One reduction step; an irreducible permutation maps to itself."""
    v = as_values(p)
    hit = smallest_reducing_move(alg, v)
    return dict(hit[1]) if hit else {v: 1}


def is_irreducible(alg: str, p: PermLike) -> bool:
    return smallest_reducing_move(alg, p) is None


# ---------------------------------------------------------------------------
# universes


def universe_sizes(alg: str, m: int) -> List[int]:
    """Permutation sizes making up the degree-``m`` universe."""
    alg = _check_alg(alg)
    if alg == "A":
        if m < 2:
            raise ValueError("algorithm A needs degree >= 2")
        return [m - 1]
    if m < 3:
        raise ValueError("algorithm B needs degree >= 3")
    return list(range(3, m + 1))


def universe_size(alg: str, m: int) -> int:
    return sum(factorial(n) for n in universe_sizes(alg, m))


def _orbit_minimal_perms(n: int) -> Iterator[Values]:
    """Permutations of S_n that are minimal in their orbit, ascending.

    A minimum starts with 1, so only those candidates are tested, in bulk.
    """
    import numpy as np
    from itertools import permutations

    if n < 3:
        return iter(())
    rest = np.array(list(permutations(range(2, n + 1))), dtype=np.int16).reshape(-1, n - 1)
    P = np.concatenate([np.ones((rest.shape[0], 1), dtype=np.int16), rest], axis=1)
    keep = np.ones(P.shape[0], dtype=bool)
    idx = np.arange(n)
    for b in (0, 1):
        for a in range(n):
            pos = (idx + a) % n
            if b:
                pos = n - 1 - pos
            Q = P[:, pos]
            # only the shift putting 1 first can beat a permutation starting with 1
            shift = (1 - Q[:, :1]) % n
            Q = (Q - 1 + shift) % n + 1
            diff = Q != P
            first = diff.argmax(axis=1)
            some = diff.any(axis=1)
            less = some & (Q[np.arange(Q.shape[0]), first] < P[np.arange(P.shape[0]), first])
            keep &= ~less
    return (tuple(int(x) for x in row) for row in P[keep])


# ---------------------------------------------------------------------------
# the normal-form table


@dataclass
class NormalFormTable:
    """Normal forms of a whole universe, restricted to a block of irreducibles.

    Entries are kept for permutations that can appear as terms; over ``F_2``
    an entry is an int whose bit ``b`` is the coefficient of irreducible
    ``block_start + b``, otherwise a dict ``offset -> coefficient``.  For
    algorithm B only orbit minima are stored; other permutations resolve
    through move I'.
    """

    algorithm: str
    degree: int
    characteristic: int = 2
    block_start: int = 0
    block_width: Optional[int] = None
    irreducibles: List[Values] = field(default_factory=list)
    universe: int = 0
    entries: Dict[Values, object] = field(default_factory=dict, repr=False)
    moves: Dict[str, int] = field(default_factory=dict)

    def _in_block(self, idx: int) -> bool:
        return idx >= self.block_start and (self.block_width is None or idx < self.block_start + self.block_width)

    def _zero(self):
        return 0 if self.characteristic == 2 else {}

    def _unit(self, idx: int):
        if not self._in_block(idx):
            return self._zero()
        b = idx - self.block_start
        return 1 << b if self.characteristic == 2 else {b: 1}

    def _combine(self, terms: Terms):
        if self.characteristic == 2:
            acc = 0
            for q, c in terms.items():
                if c & 1:
                    acc ^= self.lookup(q)
            return acc
        p = self.characteristic
        acc: Dict[int, int] = {}
        for q, c in terms.items():
            c %= p
            if not c:
                continue
            for b, x in self.lookup(q).items():
                acc[b] = (acc.get(b, 0) + c * x) % p
        return {b: x for b, x in acc.items() if x}

    def lookup(self, q: Values):
        """Normal form of ``q`` (any element of the universe)."""
        hit = self.entries.get(q)
        if hit is not None:
            return hit
        if self.algorithm == "B":
            r, sign, _ = orbit_minimize_values(q)
            if r != q:
                base = self.entries[r]
                if self.characteristic == 2 or sign == 1:
                    return base
                p = self.characteristic
                return {b: (-x) % p for b, x in base.items()}
        raise KeyError(f"{q} has no table entry yet")

    @classmethod
    def build(
        cls,
        algorithm: str,
        degree: int,
        characteristic: int = 2,
        block_start: int = 0,
        block_width: Optional[int] = None,
        program: Optional["ReductionProgram"] = None,
    ) -> "NormalFormTable":
        """Fill the table in ascending order ("upside down").

        Passing a precomputed ``program`` skips the move search, which is
        what makes several column blocks over one universe cheap.
        """
        alg = _check_alg(algorithm)
        if characteristic < 2:
            raise ValueError("table coefficients live in a prime field")
        if program is None:
            program = ReductionProgram.compute(alg, degree)
        elif (program.algorithm, program.degree) != (alg, degree):
            raise ValueError("program was computed for another universe")
        t = cls(alg, degree, characteristic, block_start, block_width)
        t.universe = program.universe
        t.moves = dict(program.moves)
        for p, terms in program.steps:
            if terms is None:
                t.entries[p] = t._unit(len(t.irreducibles))
                t.irreducibles.append(p)
            else:
                t.entries[p] = t._combine(terms)
        return t

    def normal_form(self, terms: Terms):
        """Normal form of a signed combination of universe elements."""
        return self._combine(terms)

    @property
    def dim(self) -> int:
        return len(self.irreducibles)


@dataclass
class ReductionProgram:
    """The reducing move of every stored permutation, in ascending order.

    ``steps`` pairs each permutation with the terms of its smallest reducing
    move, or None for an irreducible.  For algorithm B only orbit minima are
    listed; move I' handles the rest.
    """

    algorithm: str
    degree: int
    universe: int
    steps: List[Tuple[Values, Optional[Terms]]]
    moves: Dict[str, int]

    @classmethod
    def compute(cls, algorithm: str, degree: int) -> "ReductionProgram":
        from .perm import all_values

        alg = _check_alg(algorithm)
        steps: List[Tuple[Values, Optional[Terms]]] = []
        moves: Dict[str, int] = {}
        for n in universe_sizes(alg, degree):
            perms = all_values(n) if alg == "A" else _orbit_minimal_perms(n)
            for p in perms:
                hit = smallest_reducing_move(alg, p)
                if hit is None:
                    steps.append((p, None))
                else:
                    moves[hit[0].kind] = moves.get(hit[0].kind, 0) + 1
                    steps.append((p, hit[1]))
        universe = universe_size(alg, degree)
        prog = cls(alg, degree, universe, steps, moves)
        if alg == "B":
            moves["Iprime"] = universe - len(steps)
            prog.steps = [(p, t if t is None else prog.canonical(t)) for p, t in steps]
        return prog

    def canonical(self, terms: Terms) -> Terms:
        """Rewrite terms through move I' so only orbit minima remain (B only)."""
        if self.algorithm != "B":
            return terms
        cache = self.__dict__.setdefault("_orbit_cache", {})
        out: Terms = {}
        for q, c in terms.items():
            hit = cache.get(q)
            if hit is None:
                r, sign, _ = orbit_minimize_values(q)
                hit = cache[q] = (r, sign)
            out[hit[0]] = out.get(hit[0], 0) + hit[1] * c
        return {q: c for q, c in out.items() if c}

    @property
    def irreducibles(self) -> List[Values]:
        return [p for p, t in self.steps if t is None]


def census(alg: str, m: int) -> Tuple[int, int]:
    """``(|S|, number of irreducibles)`` of the degree-``m`` universe."""
    prog = ReductionProgram.compute(alg, m)
    return prog.universe, len(prog.irreducibles)


