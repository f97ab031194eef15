"""Ranks of the full and framing-independent diagram algebras from primitive ranks.

The algebra is a polynomial algebra on its primitives, so its graded rank is
the coefficient series of ``prod_d (1 - q^d)^(-p_d)``.  Dropping the single
degree-one primitive gives the framing-independent quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import List, Sequence

# primitive ranks for degrees 0..12
KNOWN_PRIMITIVES = (0, 1, 1, 1, 2, 3, 5, 8, 12, 18, 27, 39, 55)


@dataclass
class RankTable:
    primitives: List[int]
    algebra: List[int]
    reduced: List[int]
    degrees: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.degrees:
            self.degrees = list(range(len(self.algebra)))
        # with one degree-one primitive, dividing by it gives partial sums
        if len(self.primitives) < 2 or self.primitives[1] != 1:
            return
        running = 0
        for m, a in enumerate(self.algebra):
            running += self.reduced[m]
            assert running == a, f"cumulative identity fails at degree {m}"

    def rows(self):
        yield "m", self.degrees
        yield "rk P_m", self.primitives
        yield "rk A_m", self.algebra
        yield "rk A^r_m", self.reduced

    def as_dict(self) -> dict:
        return {
            "degrees": self.degrees,
            "primitive": self.primitives,
            "algebra": self.algebra,
            "reduced": self.reduced,
        }


def euler_transform(counts: Sequence[int], max_degree: int) -> List[int]:
    """Coefficients of ``prod_{d>=1} (1 - q^d)^(-counts[d])`` up to ``q^max_degree``.

    ``counts[0]`` is ignored.
    """
    series = [0] * (max_degree + 1)
    series[0] = 1
    for d in range(1, max_degree + 1):
        c = counts[d] if d < len(counts) else 0
        if c < 0:
            raise ValueError(f"negative rank {c} in degree {d}")
        if c == 0:
            continue
        # multiply by (1 - q^d)^(-c) = sum_j C(c + j - 1, j) q^(dj)
        factor = [comb(c + j - 1, j) for j in range(max_degree // d + 1)]
        nxt = [0] * (max_degree + 1)
        for i, s in enumerate(series):
            if not s:
                continue
            for j, f in enumerate(factor):
                k = i + d * j
                if k > max_degree:
                    break
                nxt[k] += s * f
        series = nxt
    return series


def algebra_ranks(primitive_ranks: Sequence[int], max_degree: int | None = None) -> RankTable:
    """Full and reduced algebra ranks from the primitive ranks ``p_0, p_1, ...``.

    The input ``p_1`` is used for the full algebra (it is 1 for knots); the
    reduced algebra always uses ``p_1 = 0``.
    """
    prim = [int(x) for x in primitive_ranks]
    if any(x < 0 for x in prim):
        raise ValueError("primitive ranks must be non-negative")
    if max_degree is None:
        max_degree = len(prim) - 1
    prim = (prim + [0] * (max_degree + 1))[: max_degree + 1]
    full = list(prim)
    reduced = list(prim)
    if max_degree >= 1:
        reduced[1] = 0
    return RankTable(
        primitives=full,
        algebra=euler_transform(full, max_degree),
        reduced=euler_transform(reduced, max_degree),
    )
