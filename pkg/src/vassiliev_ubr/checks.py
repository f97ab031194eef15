"""Self-checks behind ``verify``: each suite returns named pass/fail records."""

from __future__ import annotations

from typing import Callable, Dict, List

from .perm import all_values, orbit_sign_conflict, sort_key

Record = Dict[str, object]


def _rec(name: str, ok: bool, detail: str) -> Record:
    return {"name": name, "ok": bool(ok), "detail": detail}


def suite_moves(max_degree: int = 6) -> List[Record]:
    """Strict descent of every selected move, and idempotence of the normal form."""
    from .reduction import NormalFormTable, ReductionProgram, apply_move, smallest_reducing_move

    out = []
    for alg, sizes in (("A", range(1, max_degree)), ("B", range(3, max_degree + 1))):
        checked = bad = 0
        for n in sizes:
            for p in all_values(n):
                hit = smallest_reducing_move(alg, p)
                if hit is None:
                    continue
                move, terms = hit
                checked += 1
                again = apply_move(alg, p, move)
                if again != terms or any(sort_key(q) >= sort_key(p) for q in terms):
                    bad += 1
        out.append(_rec(f"strict descent {alg}", bad == 0, f"{checked} moves, {bad} violations"))
    for alg, m in (("A", max_degree), ("B", max_degree)):
        prog = ReductionProgram.compute(alg, m)
        for char in (2, 3):
            t = NormalFormTable.build(alg, m, char, program=prog)
            bad = 0
            for p, _ in prog.steps:
                v = t.lookup(p)
                if char == 2:
                    terms = {prog.irreducibles[b]: 1 for b in range(v.bit_length()) if v >> b & 1}
                else:
                    terms = {prog.irreducibles[b]: c for b, c in v.items()}
                if t.normal_form(terms) != v:
                    bad += 1
            out.append(_rec(f"normal form idempotent {alg} F_{char}", bad == 0, f"degree {m}, {bad} failures"))
    conflicts = sum(orbit_sign_conflict(p) for n in range(3, max_degree + 1) for p in all_values(n))
    out.append(_rec("orbit sign conflicts", True, f"{conflicts} permutations reach their minimum with both reflections"))
    return out


def suite_surfaces(max_degree: int = 6) -> List[Record]:
    """Euler characteristic, parity, reversal, AS and IHX checks of the thickening map."""
    from .thickening import (
        Composition,
        build_caterpillar,
        enumerate_caterpillars,
        ihx_resolutions,
        phi_tilde,
        phi_tilde_graph,
        trace_surface,
    )

    out = []
    top = min(max_degree, 5)
    traced = bad = 0
    for m in range(2, top + 1):
        for u in range(2, m + 1):
            for c in enumerate_caterpillars(m, u):
                g = build_caterpillar(c)
                for mk in range(1 << g.n_edges):
                    s = trace_surface(g, mk)
                    if s is None:
                        continue
                    traced += 1
                    bad += s.euler != u - m
    out.append(_rec("euler characteristic u - m", bad == 0, f"{traced} surfaces up to degree {top}"))

    odd = [c for m in range(3, min(max_degree, 7) + 1) for u in range(3, m + 1, 2) for c in enumerate_caterpillars(m, u)]
    nonzero = [str(c) for c in odd if phi_tilde(c)]
    out.append(_rec("odd leg count vanishes", not nonzero, f"{len(odd)} caterpillars, nonzero: {nonzero}"))

    bad = []
    count = 0
    for m in range(2, min(max_degree, 6) + 1):
        for u in range(2, m + 1):
            for c in enumerate_caterpillars(m, u):
                count += 1
                if phi_tilde_graph(build_caterpillar(c.parts)) != phi_tilde_graph(build_caterpillar(c.parts[::-1])):
                    bad.append(str(c))
    out.append(_rec("caterpillar reversal symmetry", not bad, f"{count} compositions, mismatches: {bad}"))

    fails = []
    for parts in ((2,), (4,)):
        g = build_caterpillar(Composition.of(parts))
        v = phi_tilde_graph(g)
        for w in g.trivalent:
            r = phi_tilde_graph(g.reversed_at(w))
            if {s: -c for s, c in v.items()} != r:
                fails.append(f"{parts}@{w}")
    out.append(_rec("AS coherence", not fails, f"failures: {fails}"))

    fails = []
    tested = 0
    for parts in ((4,), (2, 0, 2), (1, 1, 0), (0, 2, 0)):
        g = build_caterpillar(Composition.of(parts))
        for e in range(g.n_edges):
            a, b = g.edge_ends(e)
            if a == b or len(g.rotation[a]) != 3 or len(g.rotation[b]) != 3:
                continue
            vi, vh, vx = (phi_tilde_graph(h) for h in ihx_resolutions(g, e))
            tested += 1
            keys = set(vi) | set(vh) | set(vx)
            if any(vi.get(k, 0) != vh.get(k, 0) - vx.get(k, 0) for k in keys):
                fails.append(f"{parts}/{e}")
    out.append(_rec("IHX coherence", not fails, f"{tested} inner edges, failures: {fails}"))
    return out


def suite_series(max_degree: int = 12) -> List[Record]:
    from .series import KNOWN_PRIMITIVES, algebra_ranks

    top = min(max_degree, len(KNOWN_PRIMITIVES) - 1)
    t = algebra_ranks(KNOWN_PRIMITIVES[: top + 1])
    running = [sum(t.reduced[: m + 1]) for m in range(top + 1)]
    return [
        _rec("cumulative identity", running == t.algebra, f"degrees 0..{top}"),
        _rec("degree-one primitive", t.algebra[1] == 1 and t.reduced[1] == 0, "rk A_1 = 1, rk A^r_1 = 0"),
    ]


def suite_sandwich(max_degree: int = 6) -> List[Record]:
    from .driver import UbrConfig, output_upper
    from .thickening import lower_bound

    out = []
    for m in range(2, max_degree + 1):
        oc = lower_bound(m)
        oa = output_upper(UbrConfig("A", m)).output
        ob = output_upper(UbrConfig("B", m)).output if m >= 3 else None
        ok = oc <= oa and (ob is None or oc <= ob)
        out.append(_rec(f"degree {m}", ok, f"O_C = {oc}, O_A = {oa}, O_B = {ob}"))
    return out


SUITES: Dict[str, Callable[[int], List[Record]]] = {
    "moves": suite_moves,
    "surfaces": suite_surfaces,
    "series": suite_series,
    "sandwich": suite_sandwich,
}
