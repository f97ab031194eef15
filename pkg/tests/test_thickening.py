import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vassiliev_ubr.thickening import (
    Composition,
    DegreeTooLarge,
    NormalizedSurface,
    build_caterpillar,
    close_legs,
    enumerate_caterpillars,
    format_vector,
    ihx_resolutions,
    leg_closures,
    lower_bound,
    phi_tilde,
    phi_tilde_graph,
    trace_surface,
    vectors_rank,
)

# published rk B_{m,u} for even u
PER_U = {
    2: {2: 1},
    3: {2: 1},
    4: {2: 1, 4: 1},
    5: {2: 2, 4: 1},
    6: {2: 2, 4: 2, 6: 1},
    7: {2: 3, 4: 3, 6: 2},
}


def compositions(max_m=5):
    return st.integers(1, 4).flatmap(
        lambda k: st.lists(st.integers(0, 4), min_size=k, max_size=k)
    ).filter(lambda t: sum(t) >= 2 and sum(t) + len(t) - 1 <= max_m).map(tuple)


def test_composition_canonical_form():
    assert Composition.of((2, 0, 0)).parts == (0, 0, 2)
    assert str(Composition.of((1, 1, 0))) == "w011"
    c = Composition.of((3, 1))
    assert (c.k, c.u, c.m) == (2, 4, 5)
    with pytest.raises(ValueError):
        Composition(())


def test_enumeration_counts():
    assert [str(c) for c in enumerate_caterpillars(4)] == ["w4", "w002", "w011", "w020", "w101"]
    assert len(enumerate_caterpillars(5, 3)) > 0
    assert all(c.u % 2 == 0 for c in enumerate_caterpillars(7))
    with pytest.raises(ValueError):
        enumerate_caterpillars(1)


@given(compositions(7))
def test_caterpillar_shape(parts):
    c = Composition.of(parts)
    g = build_caterpillar(c)
    assert len(g.univalent) == c.u
    assert len(g.trivalent) == c.u + 2 * c.k - 2
    assert g.betti() == c.k
    assert g.degree() == (c.m, c.u)


@settings(max_examples=30, deadline=None)
@given(compositions(5), st.data())
def test_traced_surfaces_have_euler_characteristic_u_minus_m(parts, data):
    c = Composition.of(parts)
    g = build_caterpillar(c)
    mark = data.draw(st.integers(0, (1 << g.n_edges) - 1))
    s = trace_surface(g, mark)
    if s is not None:
        assert s.euler == c.u - c.m
        assert sum(s.marks) == c.u


@settings(max_examples=20, deadline=None)
@given(compositions(6))
def test_kernel_agrees_with_tracer(parts):
    g = build_caterpillar(Composition.of(parts))
    ref = {}
    for mark in range(1 << g.n_edges):
        s = trace_surface(g, mark)
        if s is not None:
            sign = -1 if bin(mark).count("1") % 2 else 1
            ref[s] = ref.get(s, 0) + sign
    ref = {s: c for s, c in ref.items() if c}
    assert phi_tilde_graph(g) == ref


@pytest.mark.parametrize("m", range(3, 8))
def test_odd_leg_counts_vanish(m):
    for u in range(3, m + 1, 2):
        for c in enumerate_caterpillars(m, u):
            assert phi_tilde(c) == {}, c


@pytest.mark.parametrize("m", range(2, 7))
def test_reversal_symmetry(m):
    for u in range(2, m + 1):
        for c in enumerate_caterpillars(m, u):
            a = phi_tilde_graph(build_caterpillar(c.parts))
            b = phi_tilde_graph(build_caterpillar(c.parts[::-1]))
            assert a == b


@pytest.mark.parametrize("parts", [(2,), (4,), (1, 1), (0, 2, 0)])
def test_antisymmetry(parts):
    g = build_caterpillar(Composition.of(parts))
    v = phi_tilde_graph(g)
    for w in g.trivalent:
        assert phi_tilde_graph(g.reversed_at(w)) == {s: -c for s, c in v.items()}


@pytest.mark.parametrize("parts", [(4,), (2, 0, 2), (1, 1, 0), (0, 2, 0), (1, 2)])
def test_ihx(parts):
    g = build_caterpillar(Composition.of(parts))
    tested = 0
    for e in range(g.n_edges):
        a, b = g.edge_ends(e)
        if a == b or len(g.rotation[a]) != 3 or len(g.rotation[b]) != 3:
            continue
        i, h, x = (phi_tilde_graph(r) for r in ihx_resolutions(g, e))
        for s in set(i) | set(h) | set(x):
            assert i.get(s, 0) == h.get(s, 0) - x.get(s, 0)
        tested += 1
    assert tested > 0


def test_wheel_two_is_nonzero():
    v = phi_tilde((2,))
    assert v
    assert format_vector(v) == sorted(format_vector(v))


def test_close_legs_lowers_leg_count():
    g = build_caterpillar(Composition.of((4,)))
    a, b = g.univalent[:2]
    h = close_legs(g, a, b)
    assert len(h.univalent) == 2
    # two legs become one edge: one degree and one unit of Euler characteristic lost
    assert h.degree() == (g.degree()[0] - 1, 2)
    assert h.euler() == g.euler() - 1
    assert all(d == (4, 2) for d in (x.degree() for _, x in leg_closures(4)))
    names = [n for n, _ in leg_closures(5)]
    assert len(names) == len(set(names)) > 0


def test_surface_invariants():
    s = NormalizedSurface(True, -2, (1, 1))
    assert s.boundary_components == 2 and s.genus == 1
    assert NormalizedSurface(False, -1, (2,)).genus == 2
    assert s.key() == "O -2 1,1"


@pytest.mark.parametrize("m", sorted(PER_U))
def test_per_u_ranks(m):
    res = lower_bound(m, per_u=True)
    assert res.per_u == PER_U[m]
    assert res.total == sum(PER_U[m].values())
    assert lower_bound(m) == res.total


def test_without_closures_two_leg_stratum_is_rank_one():
    for m in (5, 6, 7):
        assert lower_bound(m, per_u=True, closures=False).per_u[2] == 1


def test_modular_rank_agrees():
    vecs = [phi_tilde(c) for c in enumerate_caterpillars(6, 4)]
    assert vectors_rank(vecs, "modular") == vectors_rank(vecs, "exact") == 2
    with pytest.raises(ValueError):
        vectors_rank(vecs, "fast")


def test_edge_guard():
    with pytest.raises(DegreeTooLarge):
        lower_bound(6, edge_limit=8)


def test_odd_strata_can_be_included():
    res = lower_bound(6, per_u=True, include_odd=True)
    assert res.per_u[3] == 0 and res.per_u[5] == 0
    assert res.total == 5
