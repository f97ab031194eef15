"""Lower bound from thickened caterpillar diagrams.

A diagram is thickened into a surface: vertices become discs, edges marked
``=`` become flat bands and edges marked ``x`` half-twisted bands.  Each
univalent vertex leaves a marked point on the boundary, oriented by the local
orientation at that vertex.  Summing over all markings with sign
``(-1)^(number of x)`` and keeping only normalized surfaces gives a linear map
whose image rank bounds the primitive rank from below.

Ribbon graphs are handled through flags: each dart has a ``+`` side (facing
the next dart counterclockwise) and a ``-`` side.  Corners at vertices and
bands along edges are fixed-point-free involutions on flags; boundary
components are the orbits of the group they generate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .linalg import integer_rank, prime_rank

DEFAULT_EDGE_LIMIT = 26


class DegreeTooLarge(RuntimeError):
    """The marking enumeration would exceed the configured edge limit."""


# ---------------------------------------------------------------------------
# compositions


@dataclass(frozen=True, order=True)
class Composition:
    """Leg counts ``(i_1, ..., i_k)`` of the body segments, canonical under reversal."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(p < 0 for p in self.parts):
            raise ValueError(f"bad composition {self.parts!r}")

    @classmethod
    def of(cls, parts: Iterable[int]) -> "Composition":
        t = tuple(int(p) for p in parts)
        return cls(min(t, t[::-1]))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def u(self) -> int:
        return sum(self.parts)

    @property
    def m(self) -> int:
        return self.u + self.k - 1

    @property
    def is_canonical(self) -> bool:
        return self.parts <= self.parts[::-1]

    def __str__(self) -> str:
        sep = "," if any(p > 9 for p in self.parts) else ""
        return "w" + sep.join(str(p) for p in self.parts)


def _compositions(total: int, k: int):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def enumerate_caterpillars(m: int, u: Optional[int] = None, include_odd: bool = False) -> List[Composition]:
    """Canonical caterpillars of degree ``m`` (even leg counts unless asked otherwise)."""
    if m < 2:
        raise ValueError("degree must be at least 2")
    us = [u] if u is not None else range(2, m + 1)
    out = set()
    for uu in us:
        if uu < 2 or uu > m or (uu % 2 and not include_odd and u is None):
            continue
        k = m - uu + 1
        for parts in _compositions(uu, k):
            if parts <= parts[::-1]:
                out.add(Composition(parts))
    return sorted(out, key=lambda c: (-c.u, c.parts))


# ---------------------------------------------------------------------------
# ribbon graphs


@dataclass
class RibbonGraph:
    """Trivalent/univalent graph with a cyclic dart order at every vertex.

    Darts are numbered ``0..2E-1``; edge ``e`` joins darts ``2e`` and ``2e+1``.
    ``rotation[v]`` lists the darts at ``v`` counterclockwise.  Univalent
    vertices are the marked points.
    """

    rotation: List[Tuple[int, ...]]

    def __post_init__(self):
        self.dart_vertex = [0] * self.n_darts
        seen = set()
        for v, rot in enumerate(self.rotation):
            if len(rot) not in (1, 3):
                raise ValueError(f"vertex {v} has degree {len(rot)}")
            for d in rot:
                if d in seen:
                    raise ValueError(f"dart {d} used twice")
                seen.add(d)
                self.dart_vertex[d] = v
        if seen != set(range(self.n_darts)):
            raise ValueError("rotation does not cover every dart")

    @property
    def n_darts(self) -> int:
        return sum(len(r) for r in self.rotation)

    @property
    def n_edges(self) -> int:
        return self.n_darts // 2

    @property
    def univalent(self) -> List[int]:
        return [v for v, r in enumerate(self.rotation) if len(r) == 1]

    @property
    def trivalent(self) -> List[int]:
        return [v for v, r in enumerate(self.rotation) if len(r) == 3]

    def edge_ends(self, e: int) -> Tuple[int, int]:
        return self.dart_vertex[2 * e], self.dart_vertex[2 * e + 1]

    def betti(self) -> int:
        return self.n_edges - len(self.rotation) + 1

    def euler(self) -> int:
        return len(self.rotation) - self.n_edges

    def reversed_at(self, v: int) -> "RibbonGraph":
        """The same graph with the cyclic order at ``v`` reversed."""
        rot = list(self.rotation)
        rot[v] = tuple(reversed(rot[v]))
        return RibbonGraph(rot)

    def degree(self) -> Tuple[int, int]:
        u = len(self.univalent)
        return (len(self.trivalent) + u) // 2, u


def build_caterpillar(c: Composition | Sequence[int]) -> RibbonGraph:
    """Planar ribbon graph of a caterpillar.

    The body is a rim cycle cut by ``k - 1`` parallel rungs into ``k``
    segments.  Traversing the rim counterclockwise: the legs of segment 1,
    the upper rung ends interleaved with the legs of the inner segments, the
    legs of segment ``k``, then the lower rung ends back to the start.  Legs
    point outward and rungs inward.
    """
    parts = c.parts if isinstance(c, Composition) else tuple(c)
    k = len(parts)
    rim: List[Tuple[str, int]] = []
    rim += [("leg", 0)] * parts[0]
    for j in range(1, k):
        rim.append(("top", j))
        if j < k - 1:
            rim += [("leg", 0)] * parts[j]
    if k > 1:
        rim += [("leg", 0)] * parts[-1]
        for j in range(k - 1, 0, -1):
            rim.append(("bot", j))

    darts = itertools.count()
    n_rim = len(rim)
    # rim edge r joins position r (forward dart) to r+1 (backward dart)
    fwd, bwd = [0] * n_rim, [0] * n_rim
    for r in range(n_rim):
        a, b = next(darts), next(darts)
        fwd[r] = a
        bwd[(r + 1) % n_rim] = b
    rotation: List[Tuple[int, ...]] = []
    rung_dart: Dict[Tuple[str, int], int] = {}
    leg_out: List[int] = []
    for r, (kind, j) in enumerate(rim):
        if kind == "leg":
            a, b = next(darts), next(darts)
            rotation.append((a, fwd[r], bwd[r]))
            leg_out.append(b)
        else:
            if kind == "top":
                a, b = next(darts), next(darts)
                rung_dart[("top", j)], rung_dart[("bot", j)] = a, b
            rotation.append((fwd[r], rung_dart[(kind, j)], bwd[r]))
    for b in leg_out:
        rotation.append((b,))
    return RibbonGraph(rotation)


def close_legs(g: RibbonGraph, a: int, b: int) -> RibbonGraph:
    """Join univalent vertices ``a`` and ``b`` into a single edge.

    The two leg edges and their univalent ends are replaced by one edge
    between the trivalent vertices they hung from; the degree drops by one
    and the leg count by two.  Cyclic orders elsewhere are untouched.
    """
    if len(g.rotation[a]) != 1 or len(g.rotation[b]) != 1 or a == b:
        raise ValueError("close_legs needs two distinct univalent vertices")
    pa, pb = g.rotation[a][0] ^ 1, g.rotation[b][0] ^ 1
    fresh: Dict[int, int] = {}
    counter = itertools.count()

    def rename(d: int) -> int:
        key = -1 if d in (pa, pb) else d // 2
        if key not in fresh:
            fresh[key] = next(counter)
        return 2 * fresh[key] + ((d == pb) if key < 0 else (d & 1))

    rotation = [tuple(rename(d) for d in rot) for v, rot in enumerate(g.rotation) if v not in (a, b)]
    return RibbonGraph(rotation)


def leg_closures(m: int) -> List[Tuple[str, RibbonGraph]]:
    """Two-leg diagrams of degree ``m`` from caterpillars of degree ``m + 1``.

    Every pair of legs of every four-leg caterpillar whose end segments carry
    legs is closed up.  Pairs producing a loop edge are skipped (such
    diagrams vanish).  Caterpillars alone only reach ``t``-multiples of the
    two-spoke wheel in the two-leg stratum; these closures supply the rest.
    """
    out = []
    for c in enumerate_caterpillars(m + 1, 4):
        if c.parts[0] == 0 or c.parts[-1] == 0:
            continue
        g = build_caterpillar(c)
        legs = g.univalent
        for x, y in itertools.combinations(range(len(legs)), 2):
            h = close_legs(g, legs[x], legs[y])
            if any(h.dart_vertex[2 * e] == h.dart_vertex[2 * e + 1] for e in range(h.n_edges)):
                continue
            out.append((f"{c}/{x + 1}{y + 1}", h))
    return out


def ihx_resolutions(g: RibbonGraph, e: int) -> Tuple[RibbonGraph, RibbonGraph, RibbonGraph]:
    """The three ways ``I, H, X`` to reconnect the four edges around edge ``e``.

    ``e`` must join two distinct trivalent vertices.  ``I`` is ``g`` itself;
    the relation reads ``I = H - X``.
    """
    da, db = 2 * e, 2 * e + 1
    va, vb = g.dart_vertex[da], g.dart_vertex[db]
    if va == vb or len(g.rotation[va]) != 3 or len(g.rotation[vb]) != 3:
        raise ValueError(f"edge {e} is not an inner edge")
    ra, rb = list(g.rotation[va]), list(g.rotation[vb])
    ra = ra[ra.index(da):] + ra[: ra.index(da)]
    rb = rb[rb.index(db):] + rb[: rb.index(db)]
    _, a1, a2 = ra
    _, b1, b2 = rb
    out = []
    for A, B in (((a1, a2), (b1, b2)), ((a2, b1), (b2, a1)), ((a1, b1), (b2, a2))):
        rot = list(g.rotation)
        rot[va], rot[vb] = (da,) + A, (db,) + B
        out.append(RibbonGraph(rot))
    return out[0], out[1], out[2]


# ---------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True, order=True)
class NormalizedSurface:
    """Homeomorphism class of a normalized marked surface.

    ``marks`` lists the number of marked points on each boundary component,
    sorted ascending, unmarked components included.
    """

    orientable: bool
    euler: int
    marks: Tuple[int, ...]

    @property
    def boundary_components(self) -> int:
        return len(self.marks)

    @property
    def genus(self) -> int:
        """Orientable genus, or number of cross-caps when non-orientable."""
        g2 = 2 - self.euler - len(self.marks)
        return g2 // 2 if self.orientable else g2

    def key(self) -> str:
        return f"{'O' if self.orientable else 'N'} {self.euler} " + ",".join(map(str, self.marks))

    def __str__(self) -> str:
        return self.key()


SurfaceVector = Dict[NormalizedSurface, int]


class _FlagModel:
    """Precomputed flag data of a ribbon graph for repeated tracing."""

    def __init__(self, g: RibbonGraph):
        self.g = g
        nd = g.n_darts
        self.n_flags = 2 * nd
        alpha = [0] * self.n_flags
        for rot in g.rotation:
            r = len(rot)
            for i, d in enumerate(rot):
                nxt = rot[(i + 1) % r]
                # + side of d faces the next dart, whose - side faces back
                alpha[2 * d] = 2 * nxt + 1
                alpha[2 * nxt + 1] = 2 * d
        self.alpha = np.array(alpha, dtype=np.int64)
        # band gluings: untwisted pairs (+,-),(-,+); twisted pairs (+,+),(-,-)
        e = np.arange(g.n_edges)
        d1, d2 = 2 * e, 2 * e + 1
        self.flat = np.empty(self.n_flags, dtype=np.int64)
        self.flat[2 * d1] = 2 * d2 + 1
        self.flat[2 * d1 + 1] = 2 * d2
        self.flat[2 * d2] = 2 * d1 + 1
        self.flat[2 * d2 + 1] = 2 * d1
        self.twisted = np.empty(self.n_flags, dtype=np.int64)
        self.twisted[2 * d1] = 2 * d2
        self.twisted[2 * d1 + 1] = 2 * d2 + 1
        self.twisted[2 * d2] = 2 * d1
        self.twisted[2 * d2 + 1] = 2 * d1 + 1
        self.flag_edge = np.arange(self.n_flags) // 4
        self.marks = g.univalent
        self.mark_flag = np.array([2 * g.rotation[w][0] for w in self.marks], dtype=np.int64)
        self._tree_data()

    def _tree_data(self) -> None:
        g = self.g
        nv = len(g.rotation)
        parent_mask = [None] * nv
        parent_mask[0] = 0
        stack = [0]
        tree_edges = set()
        while stack:
            v = stack.pop()
            for d in g.rotation[v]:
                e = d // 2
                other = d ^ 1
                w = g.dart_vertex[other]
                if parent_mask[w] is None:
                    parent_mask[w] = parent_mask[v] ^ (1 << e)
                    tree_edges.add(e)
                    stack.append(w)
        self.path_mask = parent_mask
        cycles = []
        for e in range(g.n_edges):
            if e not in tree_edges:
                a, b = g.edge_ends(e)
                cycles.append(parent_mask[a] ^ parent_mask[b] ^ (1 << e))
        self.cycle_masks = cycles
        self.mark_masks = [parent_mask[w] for w in self.marks]


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _classify(lo, count, base, alpha, flat, twisted, flag_edge, cycle_masks, mark_masks, mark_flag, codes, signs):
    """Encode the surface of markings ``lo .. lo+count-1`` as integers.

    A code packs, in base ``base``: orientable flag, unmarked boundary count,
    and for ``j = 1..u`` the number of components carrying ``j`` marks.
    Non-normalized surfaces get code -1.
    """
    F = alpha.shape[0]
    u = mark_flag.shape[0]
    sigma = np.empty(F, np.int64)
    beta = np.empty(F, np.int64)
    label = np.empty(F, np.int64)
    comp = np.empty(u, np.int64)
    hist = np.empty(u, np.int64)
    for t in range(count):
        x = lo + t
        for f in range(F):
            if (x >> flag_edge[f]) & 1:
                beta[f] = twisted[f]
            else:
                beta[f] = flat[f]
        for f in range(F):
            sigma[f] = beta[alpha[f]]
            label[f] = -1
        ncyc = 0
        for f in range(F):
            if label[f] < 0:
                g = f
                while label[g] < 0:
                    label[g] = f
                    g = sigma[g]
                ncyc += 1
        orientable = True
        for cm in cycle_masks:
            if _popcount(x & cm) & 1:
                orientable = False
                break
        normal = True
        for j in range(u):
            a = label[mark_flag[j]]
            b = label[mark_flag[j] + 1]
            comp[j] = a if a < b else b
        if orientable:
            e0 = _popcount(x & mark_masks[0]) & 1 if u else 0
            for j in range(1, u):
                if (_popcount(x & mark_masks[j]) & 1) != e0:
                    normal = False
                    break
        else:
            for i in range(u):
                for j in range(i + 1, u):
                    if comp[i] == comp[j] and label[mark_flag[i]] != label[mark_flag[j]]:
                        normal = False
        signs[t] = 1 - 2 * (_popcount(x) & 1)
        if not normal:
            codes[t] = -1
            continue
        for j in range(u):
            hist[j] = 0
        marked = 0
        for j in range(u):
            c = 0
            for i in range(u):
                if comp[i] == comp[j]:
                    c += 1
            hist[c - 1] += 1
        for j in range(u):
            hist[j] //= j + 1
            marked += hist[j]
        code = 1 if orientable else 0
        code = code * base + ncyc // 2 - marked
        for j in range(u):
            code = code * base + hist[j]
        codes[t] = code


def _code_base(g: RibbonGraph) -> int:
    u = len(g.univalent)
    # boundary components number at most 2 - euler
    base = max(u, 2 - g.euler()) + 1
    if base ** (u + 2) >= 1 << 62:
        raise DegreeTooLarge("surface code does not fit 64 bits")
    return base


def _decode(code: int, base: int, u: int) -> Tuple[int, ...]:
    digits = []
    for _ in range(u + 2):
        code, d = divmod(code, base)
        digits.append(d)
    return tuple(reversed(digits))


def _surface_from_key(key: Sequence[int], euler: int) -> NormalizedSurface:
    marks = [0] * int(key[1])
    for j, h in enumerate(key[2:], 1):
        marks += [j] * int(h)
    return NormalizedSurface(bool(key[0]), euler, tuple(sorted(marks)))


def trace_surface(g: RibbonGraph, marking: int) -> Optional[NormalizedSurface]:
    """Surface of one marked diagram by an explicit boundary walk.

    ``marking`` has bit ``e`` set when edge ``e`` is an ``x`` edge.  Returns
    None when the marked surface is not normalized.
    """
    model = _FlagModel(g)
    E = g.n_edges
    if marking < 0 or marking >> E:
        raise ValueError(f"marking does not fit {E} edges")
    alpha = model.alpha.tolist()
    beta = [
        (model.twisted if (marking >> (f // 4)) & 1 else model.flat)[f] for f in range(model.n_flags)
    ]
    # walk boundary components as orbits of the corner/band involutions
    comp_of = [-1] * model.n_flags
    walk_dir = [0] * model.n_flags
    n_comp = 0
    for start in range(model.n_flags):
        if comp_of[start] >= 0:
            continue
        f, step = start, 0
        while True:
            comp_of[f] = n_comp
            walk_dir[f] = step % 2
            f = alpha[f] if step % 2 == 0 else beta[f]
            step += 1
            if f == start and step % 2 == 0:
                break
        n_comp += 1
    # orientability via a two-colouring of local orientations
    nv = len(g.rotation)
    eps = [None] * nv
    eps[0] = 0
    stack = [0]
    orientable = True
    while stack:
        v = stack.pop()
        for d in g.rotation[v]:
            e = d // 2
            w = g.dart_vertex[d ^ 1]
            want = eps[v] ^ ((marking >> e) & 1)
            if eps[w] is None:
                eps[w] = want
                stack.append(w)
            elif eps[w] != want:
                orientable = False
    marks_on = [0] * n_comp
    forward: Dict[int, set] = {}
    for w in model.marks:
        fp = 2 * g.rotation[w][0]
        c = comp_of[fp]
        marks_on[c] += 1
        # the mark points along the walk iff the corner is entered on its + side
        forward.setdefault(c, set()).add(walk_dir[fp])
    if orientable:
        normal = len({eps[w] for w in model.marks}) <= 1
    else:
        normal = all(len(s) == 1 for s in forward.values())
    if not normal:
        return None
    return NormalizedSurface(orientable, g.euler(), tuple(sorted(marks_on)))


def phi_tilde_graph(
    g: RibbonGraph, edge_limit: int = DEFAULT_EDGE_LIMIT, chunk: int = 1 << 20
) -> SurfaceVector:
    """Signed sum over all markings of the normalized surfaces of ``g``."""
    E = g.n_edges
    if E > edge_limit:
        raise DegreeTooLarge(f"{E} edges exceed the enumeration limit {edge_limit}")
    model = _FlagModel(g)
    euler = g.euler()
    base = _code_base(g)
    u = len(model.marks)
    args = (
        base,
        model.alpha,
        model.flat,
        model.twisted,
        model.flag_edge.astype(np.int64),
        np.array(model.cycle_masks, dtype=np.int64),
        np.array(model.mark_masks, dtype=np.int64),
        model.mark_flag,
    )
    total: Dict[Tuple[int, ...], int] = {}
    n = 1 << E
    codes = np.empty(min(n, chunk), dtype=np.int64)
    signs = np.empty(min(n, chunk), dtype=np.int64)
    for lo in range(0, n, chunk):
        cnt = min(chunk, n - lo)
        _classify(lo, cnt, *args, codes, signs)
        keep = codes[:cnt] >= 0
        uniq, inv = np.unique(codes[:cnt][keep], return_inverse=True)
        sums = np.bincount(inv.ravel(), weights=signs[:cnt][keep], minlength=len(uniq))
        for code, s in zip(uniq.tolist(), sums.tolist()):
            key = _decode(code, base, u)
            total[key] = total.get(key, 0) + int(round(s))
    return {
        _surface_from_key(k, euler): c for k, c in sorted(total.items()) if c
    }


def phi_tilde(c: Composition | Sequence[int], edge_limit: int = DEFAULT_EDGE_LIMIT) -> SurfaceVector:
    comp = c if isinstance(c, Composition) else Composition.of(c)
    return phi_tilde_graph(build_caterpillar(comp), edge_limit)


def format_vector(v: SurfaceVector) -> List[str]:
    """Stable one-line-per-surface dump."""
    return [f"{s.key()} {c:+d}" for s, c in sorted(v.items())]


# ---------------------------------------------------------------------------
# ranks


def vectors_rank(vectors: Sequence[SurfaceVector], mode: str = "exact") -> int:
    surfaces = sorted({s for v in vectors for s in v})
    if not surfaces or not vectors:
        return 0
    col = {s: i for i, s in enumerate(surfaces)}
    rows = []
    for v in vectors:
        r = [0] * len(surfaces)
        for s, c in v.items():
            r[col[s]] = c
        rows.append(r)
    if mode == "exact":
        return integer_rank(rows)
    if mode == "modular":
        arr = np.array(rows, dtype=object)
        r1 = prime_rank(np.array(arr % 2147483647, dtype=np.int64), 2147483647)
        r2 = prime_rank(np.array(arr % 2147483629, dtype=np.int64), 2147483629)
        if r1 != r2:
            raise ArithmeticError(f"modular ranks disagree: {r1} vs {r2}")
        return r1
    raise ValueError(f"unknown rank mode {mode!r}")


@dataclass
class LowerBound:
    m: int
    total: int
    per_u: Dict[int, int]
    diagrams: Dict[int, List[str]]

    def as_dict(self) -> dict:
        return {
            "degree": self.m,
            "total": self.total,
            "per_u": {str(u): r for u, r in sorted(self.per_u.items())},
            "diagrams": {str(u): d for u, d in sorted(self.diagrams.items())},
        }


def lower_bound(
    m: int,
    per_u: bool = False,
    include_odd: bool = False,
    mode: str = "exact",
    edge_limit: int = DEFAULT_EDGE_LIMIT,
    workers: int = 1,
    closures: bool = True,
):
    """Rank of the image of caterpillars of degree ``m`` under the thickening map.

    With ``closures`` the two-leg stratum also receives the leg closures of
    :func:`leg_closures`.  Surfaces from different leg counts never coincide,
    so the total rank is the sum of the per-``u`` ranks.  Returns an int, or
    a ``LowerBound`` when ``per_u`` is set.
    """
    if m < 2:
        raise ValueError("degree must be at least 2")
    comps = enumerate_caterpillars(m)
    if include_odd:
        comps = sorted(
            {c for u in range(2, m + 1) for c in enumerate_caterpillars(m, u)},
            key=lambda c: (-c.u, c.parts),
        )
    jobs: List[Tuple[int, str, RibbonGraph]] = [(c.u, str(c), build_caterpillar(c)) for c in comps]
    if closures and m >= 3:
        jobs += [(2, name, g) for name, g in leg_closures(m)]
    for _, _, g in jobs:
        if g.n_edges > edge_limit:
            raise DegreeTooLarge(f"{g.n_edges} edges exceed the enumeration limit {edge_limit}")
    graphs = [g for _, _, g in jobs]
    if workers > 1 and len(graphs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            vecs = list(ex.map(phi_tilde_graph, graphs, [edge_limit] * len(graphs)))
    else:
        vecs = [phi_tilde_graph(g, edge_limit) for g in graphs]
    by_u: Dict[int, List[SurfaceVector]] = {}
    names: Dict[int, List[str]] = {}
    for (u, name, _), v in zip(jobs, vecs):
        by_u.setdefault(u, []).append(v)
        names.setdefault(u, []).append(name)
    ranks = {u: vectors_rank(vs, mode) for u, vs in sorted(by_u.items())}
    total = sum(ranks.values())
    if per_u:
        return LowerBound(m, total, ranks, names)
    return total
