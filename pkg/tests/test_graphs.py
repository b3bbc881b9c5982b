"""Stable graph layer: construction, isomorphism, canonical forms,
contraction, degeneration, variant filters."""

import pytest
from hypothesis import given, settings, strategies as st

from wss.graphs import (
    StableGraph,
    GraphMap,
    automorphisms,
    aut_order,
    canonicalize,
    canonical_iso,
    contract_edge,
    edge_type,
    enumerate_stable_graphs,
    find_isos,
    graph_allowed,
    one_edge_degenerations,
    space_dim,
)

from oracles import brute_force_graph_counts


def G(genera, legs, edges):
    return StableGraph(tuple(genera), tuple(legs), tuple(edges))


SMOOTH_11 = G([1], [0], [])
LOOP_11 = G([0], [0], [(0, 0)])
THETA = G([0, 0], [], [(0, 1), (0, 1), (0, 1)])
DUMBBELL = G([0, 0], [], [(0, 0), (0, 1), (1, 1)])
CHAIN_121 = G([1, 2, 1], [], [(0, 1), (1, 2)])


class TestConstruction:
    def test_unstable_vertex_rejected(self):
        with pytest.raises(ValueError):
            G([0], [0], [])  # genus 0 with one point
        with pytest.raises(ValueError):
            G([1, 0], [], [(0, 1)])  # genus-0 vertex of valence 1

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            G([1, 1], [0, 1], [])

    def test_genus(self):
        assert LOOP_11.genus() == 1
        assert THETA.genus() == 2
        assert DUMBBELL.genus() == 2
        assert CHAIN_121.genus() == 4

    def test_points_ordering(self):
        g = G([0], [0, 0], [(0, 0)])
        assert g.points_at(0) == (("l", 1), ("l", 2), ("h", 0, 0), ("h", 0, 1))

    def test_render_parse_roundtrip(self):
        for g in [SMOOTH_11, LOOP_11, THETA, DUMBBELL, CHAIN_121]:
            assert StableGraph.parse(g.render()) == g
        assert CHAIN_121.render() == "G[1,2,1];L[];E[(0,1),(1,2)]"
        assert G([2], [], []).render() == "G[2];L[];E[]"


class TestIsomorphism:
    def test_aut_orders(self):
        assert aut_order(SMOOTH_11) == 1
        assert aut_order(LOOP_11) == 2  # loop flip
        assert aut_order(THETA) == 12  # vertex swap x 3! edges
        assert aut_order(DUMBBELL) == 8  # two loop flips x end swap
        assert aut_order(CHAIN_121) == 2

    def test_chain_flip_edge_sign(self):
        signs = sorted(a.edge_sign() for a in automorphisms(CHAIN_121))
        assert signs == [-1, 1]

    def test_loop_flip_moves_points(self):
        flip = [a for a in automorphisms(LOOP_11) if a.emap[0][1] == 1][0]
        assert flip.point(("h", 0, 0)) == ("h", 0, 1)
        assert flip.point(("l", 1)) == ("l", 1)
        assert flip.point_bijection(0) == (0, 2, 1)

    def test_markings_pin_vertices(self):
        a = G([0, 0], [0, 0, 1, 1], [(0, 1)])
        b = G([0, 0], [0, 1, 0, 1], [(0, 1)])
        assert list(find_isos(a, b)) == []
        assert aut_order(a) == 1

    def test_compose_inverse(self):
        for iso in automorphisms(DUMBBELL):
            ident = iso.compose(iso.inverse())
            assert ident.vmap == tuple(range(2))
            assert all(e == i and f == 0 for i, (e, f) in enumerate(ident.emap))


class TestCanonical:
    def test_idempotent(self):
        for g in [SMOOTH_11, LOOP_11, THETA, DUMBBELL, CHAIN_121]:
            c = canonicalize(g)
            assert canonicalize(c) == c

    def test_relabel_invariance(self):
        # same graph with vertices listed the other way round
        other = G([1, 2, 1], [], [(2, 1), (0, 1)])
        assert canonicalize(other) == canonicalize(CHAIN_121)

    def test_canonical_iso_exists(self):
        iso = canonical_iso(CHAIN_121)
        assert iso.target == canonicalize(CHAIN_121)


class TestContraction:
    def test_contract_bridge(self):
        c = contract_edge(CHAIN_121, 0)
        assert c.result == G([3, 1], [], [(0, 1)])
        assert c.vmap == (0, 0, 1)
        assert c.emap == (None, 0)

    def test_contract_loop(self):
        c = contract_edge(LOOP_11, 0)
        assert c.result == SMOOTH_11
        assert c.vmap == (0,)

    def test_point_transport(self):
        c = contract_edge(CHAIN_121, 0)
        assert c.point(("h", 1, 0)) == ("h", 0, 0)
        with pytest.raises(ValueError):
            c.point(("h", 0, 0))
        assert c.branches() == (("h", 0, 0), ("h", 0, 1))


class TestDegenerations:
    def test_smooth_11(self):
        degs = one_edge_degenerations(SMOOTH_11)
        assert len(degs) == 1
        assert degs[0].graph == LOOP_11

    def test_contraction_returns_base_exactly(self):
        for base in [LOOP_11, THETA, CHAIN_121, G([1, 0], [1, 1], [(0, 1)])]:
            for d in one_edge_degenerations(base):
                c = d.contraction()
                assert c.result == base
                assert all(c.emap[i] == i for i in range(base.n_edges))

    def test_chain_121_count_and_members(self):
        # the genus-4 chain has exactly 6 one-edge degenerations
        degs = one_edge_degenerations(CHAIN_121)
        assert len(degs) == 6
        canon = {canonicalize(d.graph) for d in degs}
        # four-vertex chain from splitting the middle vertex
        assert canonicalize(G([1, 1, 1, 1], [], [(0, 1), (2, 3), (1, 2)])) in canon
        # star with genus-1 centre
        assert canonicalize(G([1, 1, 1, 1], [], [(0, 1), (1, 2), (1, 3)])) in canon
        # star with genus-0 centre carrying a pendant genus-2 vertex
        assert canonicalize(G([1, 0, 1, 2], [], [(0, 1), (1, 2), (1, 3)])) in canon
        # loop at the middle vertex
        assert canonicalize(G([1, 1, 1], [], [(0, 1), (1, 2), (1, 1)])) in canon
        # loop at an end vertex; kept once per end since edge labels differ
        end_loop = canonicalize(G([0, 2, 1], [], [(0, 1), (1, 2), (0, 0)]))
        assert sum(1 for d in degs if canonicalize(d.graph) == end_loop) == 2

    def test_new_edge_is_last(self):
        for d in one_edge_degenerations(CHAIN_121):
            assert d.graph.n_edges == CHAIN_121.n_edges + 1


class TestVariants:
    def test_edge_types(self):
        assert edge_type(THETA, 0) == ("irr",)
        assert edge_type(DUMBBELL, 1) == ("sep", 1, 1)
        assert edge_type(CHAIN_121, 0) == ("sep", 1, 3)
        rt_tail = G([2, 0], [0, 1, 1], [(0, 1)])
        assert edge_type(rt_tail, 0) == ("sep", 0, 2)

    def test_graph_allowed(self):
        assert graph_allowed(THETA, "ct")
        assert not graph_allowed(DUMBBELL, "ct")  # bridge
        assert graph_allowed(DUMBBELL, "rt")  # both sides genus 1
        assert not graph_allowed(G([2, 0], [0, 1, 1], [(0, 1)]), "rt")

    def test_counts_2_0(self):
        open_counts = [len(l) for l in enumerate_stable_graphs(2, 0)]
        assert open_counts == [1, 2, 2, 2]
        ct_counts = [len(l) for l in enumerate_stable_graphs(2, 0, "ct")]
        assert ct_counts == [1, 1, 1, 1]
        rt_counts = [len(l) for l in enumerate_stable_graphs(2, 0, "rt")]
        assert rt_counts == [1, 2, 2, 2]

    def test_counts_1_2(self):
        # rt for genus 1 with markings drops every separating edge with a
        # genus-0 side, leaving only loop-type degenerations
        rt = enumerate_stable_graphs(1, 2, "rt")
        assert all(
            all(edge_type(g, e)[0] == "irr" for e in range(g.n_edges))
            for level in rt
            for g in level
        )


class TestEnumeration:
    @pytest.mark.parametrize(
        "g,n,max_edges",
        [(1, 1, 1), (0, 4, 1), (0, 5, 2), (1, 2, 2), (2, 0, 3)],
    )
    def test_against_brute_force(self, g, n, max_edges):
        levels = enumerate_stable_graphs(g, n, max_edges=max_edges)
        got = {ne: len(level) for ne, level in enumerate(levels)}
        assert got == brute_force_graph_counts(g, n, max_edges)

    def test_known_small_counts(self):
        assert [len(l) for l in enumerate_stable_graphs(0, 4)] == [1, 3]
        assert [len(l) for l in enumerate_stable_graphs(0, 5)] == [1, 10, 15]
        assert [len(l) for l in enumerate_stable_graphs(1, 1)] == [1, 1]

    def test_deterministic(self):
        a = enumerate_stable_graphs(1, 2)
        b = enumerate_stable_graphs(1, 2)
        assert a == b


# -- property tests --------------------------------------------------------


def random_graph_strategy():
    """Small random stable graphs built by degenerating a smooth one."""

    @st.composite
    def build(draw):
        g = draw(st.integers(0, 2))
        n_min = 3 if g == 0 else (1 if g == 1 else 0)
        n = draw(st.integers(n_min, 3))
        steps = draw(st.integers(0, min(3, space_dim(g, n))))
        graph = StableGraph((g,), (0,) * n, ())
        for _ in range(steps):
            degs = one_edge_degenerations(graph)
            if not degs:
                break
            graph = degs[draw(st.integers(0, len(degs) - 1))].graph
        return graph

    return build()


@settings(max_examples=60, deadline=None)
@given(random_graph_strategy(), st.randoms(use_true_random=False))
def test_canonical_is_relabel_invariant(graph, rng):
    nv = graph.n_vertices
    vper = list(range(nv))
    rng.shuffle(vper)
    order = list(range(graph.n_edges))
    rng.shuffle(order)
    edges = []
    for e in order:
        a, b = graph.edges[e]
        if rng.random() < 0.5 and a != b:
            a, b = b, a
        edges.append((vper[a], vper[b]))
    relabeled = StableGraph(
        tuple(graph.genera[vper.index(i)] for i in range(nv)),
        tuple(vper[v] for v in graph.legs),
        tuple(edges),
    )
    assert canonicalize(relabeled) == canonicalize(graph)


@settings(max_examples=60, deadline=None)
@given(random_graph_strategy())
def test_aut_order_is_class_invariant(graph):
    assert aut_order(graph) == aut_order(canonicalize(graph))


@settings(max_examples=40, deadline=None)
@given(random_graph_strategy())
def test_edge_type_stable_under_other_contractions(graph):
    for e in range(graph.n_edges):
        t = edge_type(graph, e)
        for k in range(graph.n_edges):
            if k == e:
                continue
            c = contract_edge(graph, k)
            assert edge_type(c.result, c.emap[e]) == t


@settings(max_examples=40, deadline=None)
@given(random_graph_strategy())
def test_degeneration_contracts_back(graph):
    for d in one_edge_degenerations(graph):
        assert d.contraction().result == graph
