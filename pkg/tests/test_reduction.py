from functools import lru_cache
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chord_oracle import Quotient, difference, image, line_diagram, wheel_diagram
from vassiliev_ubr.perm import all_values, orbit_minimize_values, sort_key
from vassiliev_ubr.reduction import (
    Move,
    NormalFormTable,
    ReductionProgram,
    apply_move,
    candidate_moves,
    census,
    delta,
    inner_opening,
    is_irreducible,
    smallest_reducing_move,
    smallest_reducing_move_A,
    smallest_reducing_move_B,
    universe_size,
    universe_sizes,
)

# [DERIVED] census of this implementation (see the decisions ledger)
IRREDUCIBLE_A = {2: 1, 3: 1, 4: 2, 5: 5, 6: 16, 7: 65, 8: 300}
IRREDUCIBLE_B = {3: 1, 4: 2, 5: 5, 6: 10, 7: 24, 8: 76}


@lru_cache(maxsize=None)
def quotient(m):
    return Quotient(m)


@lru_cache(maxsize=None)
def program(alg, m):
    return ReductionProgram.compute(alg, m)


def _move_preserves_diagram(build, m, p, terms):
    q = quotient(m)
    return q.is_zero(difference(image(terms, build), image({p: 1}, build)))


# ---------------------------------------------------------------------------
# individual moves


def test_move_I():
    assert apply_move("A", (2, 1, 3), Move("I")) == {(1, 3, 2): 1}
    with pytest.raises(ValueError):
        apply_move("A", (3, 1, 2), Move("I"))


def test_move_II_terms():
    assert apply_move("A", (3, 2, 1), Move("II", (1,))) == {(2, 3, 1): 1, (1, 3, 2): -1}
    # both terms coincide here and cancel
    assert apply_move("A", (1, 3, 2), Move("II", (2,))) == {}


def test_move_II_requires_descent_by_one():
    with pytest.raises(ValueError):
        apply_move("A", (1, 2, 3), Move("II", (1,)))


def test_move_IIprime_drops_a_strand():
    terms = apply_move("B", (1, 2, 4, 3), Move("IIprime", (3,)))
    assert terms == {(1, 2, 3, 4): 1, (1, 2, 3): -1}


def test_move_Iprime_is_orbit_minimum():
    p = (3, 1, 2, 4)
    q, sign, _ = orbit_minimize_values(p)
    assert apply_move("B", p, Move("Iprime")) == {q: sign}


def test_inner_opening_starts_with_swap():
    p = (1, 3, 4, 2)
    terms = inner_opening(p, 1, 3, 2)
    assert terms[(1, 2, 4, 3)] == 1
    assert all(len(q) == len(p) for q in terms)


def test_move_order():
    moves = [Move("III", (1, 3, 2)), Move("II", (2,)), Move("I"), Move("II", (1,))]
    assert [str(m) for m in sorted(moves)] == ["I", "II1", "II2", "III(1, 3, 2)"]
    with pytest.raises(ValueError):
        Move("IV")


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        delta("C", (1, 2))


def test_universe():
    assert universe_sizes("A", 6) == [5]
    assert universe_sizes("B", 6) == [3, 4, 5, 6]
    assert universe_size("A", 7) == factorial(6)
    assert universe_size("B", 5) == 6 + 24 + 120
    with pytest.raises(ValueError):
        universe_sizes("B", 2)


# ---------------------------------------------------------------------------
# descent and the oracle


@pytest.mark.parametrize("alg", ["A", "B"])
def test_strict_descent_exhaustive(alg):
    sizes = range(1, 6) if alg == "A" else range(3, 7)
    for n in sizes:
        for p in all_values(n):
            hit = smallest_reducing_move(alg, p)
            if hit is None:
                continue
            move, terms = hit
            assert apply_move(alg, p, move) == terms
            assert all(sort_key(q) < sort_key(p) for q in terms), (p, move)
            # no earlier candidate was reducing
            for m2, t2 in candidate_moves(alg, p):
                if m2 == move:
                    break
                assert not all(sort_key(q) < sort_key(p) for q in t2)


def test_smallest_move_wrappers():
    assert smallest_reducing_move_A((2, 1, 3)) == Move("I")
    assert smallest_reducing_move_A((1,)) is None
    assert smallest_reducing_move_B((2, 1, 3)) == Move("Iprime")
    with pytest.raises(ValueError):
        smallest_reducing_move_B((1, 2))


@pytest.mark.parametrize("m", [3, 4, 5])
def test_moves_A_preserve_diagrams(m):
    for p in permutations(range(1, m)):
        for move, terms in candidate_moves("A", p):
            assert _move_preserves_diagram(line_diagram, m, p, terms), (p, move)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_moves_B_preserve_diagrams(m):
    build = lambda q: wheel_diagram(q, m)  # noqa: E731
    for n in range(3, m + 1):
        for p in permutations(range(1, n + 1)):
            for move, terms in candidate_moves("B", p):
                assert _move_preserves_diagram(build, m, p, terms), (p, move)


def test_oracle_sees_move_signs():
    # flipping an opened term breaks the identity exactly when its diagram is nonzero
    m = 5
    seen = 0
    for p in permutations(range(1, m)):
        for move, terms in candidate_moves("A", p):
            if move.kind != "III":
                continue
            for q in list(terms)[1:]:
                bad = dict(terms)
                bad[q] = -bad[q]
                visible = not quotient(m).is_zero(image({q: 1}, line_diagram))
                assert _move_preserves_diagram(line_diagram, m, p, bad) is not visible
                seen += visible
    assert seen > 0


# ---------------------------------------------------------------------------
# census and normal forms


@pytest.mark.parametrize("m", sorted(IRREDUCIBLE_A))
def test_census_A(m):
    assert census("A", m) == (factorial(m - 1), IRREDUCIBLE_A[m])


@pytest.mark.parametrize("m", sorted(IRREDUCIBLE_B))
def test_census_B(m):
    assert census("B", m) == (sum(factorial(n) for n in range(3, m + 1)), IRREDUCIBLE_B[m])


@pytest.mark.parametrize("alg,m", [("A", 6), ("B", 6)])
def test_irreducibles_are_fixed_by_delta(alg, m):
    prog = program(alg, m)
    for p in prog.irreducibles:
        assert is_irreducible(alg, p)
        assert delta(alg, p) == {p: 1}
    if alg == "B":
        assert all(orbit_minimize_values(p)[0] == p for p in prog.irreducibles)


@pytest.mark.parametrize("alg,m", [("A", 7), ("B", 7)])
@pytest.mark.parametrize("char", [2, 3])
def test_normal_form_is_idempotent(alg, m, char):
    prog = program(alg, m)
    table = NormalFormTable.build(alg, m, char, program=prog)
    assert table.dim == len(prog.irreducibles)
    for idx, p in enumerate(prog.irreducibles):
        unit = 1 << idx if char == 2 else {idx: 1}
        assert table.lookup(p) == unit
    for p, _ in prog.steps:
        v = table.lookup(p)
        if char == 2:
            again = {prog.irreducibles[b]: 1 for b in range(v.bit_length()) if v >> b & 1}
        else:
            again = {prog.irreducibles[b]: c for b, c in v.items()}
        assert table.normal_form(again) == v


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 7).flatmap(lambda n: st.permutations(range(1, n + 1)).map(tuple)))
def test_normal_form_respects_delta_B(p):
    table = NormalFormTable.build("B", 7, 3, program=program("B", 7))
    assert table.normal_form({p: 1}) == table.normal_form(delta("B", p))


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(1, 7)).map(tuple))
def test_normal_form_respects_delta_A(p):
    table = NormalFormTable.build("A", 7, 3, program=program("A", 7))
    assert table.normal_form({p: 1}) == table.normal_form(delta("A", p))


@pytest.mark.parametrize("alg,m", [("A", 7), ("B", 7)])
def test_block_tables_tile_the_full_table(alg, m):
    prog = program(alg, m)
    full = NormalFormTable.build(alg, m, 2, program=prog)
    n = len(prog.irreducibles)
    for w in (8, 32):
        for p, _ in prog.steps[::7]:
            acc = 0
            for start in range(0, n, w):
                part = NormalFormTable.build(alg, m, 2, start, w, program=prog).lookup(p)
                acc |= part << start
            assert acc == full.lookup(p)
