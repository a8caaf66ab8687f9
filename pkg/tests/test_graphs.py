"""Canonical forms, automorphisms, subgraph counts, overlays."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regfactor.errors import HypothesisViolation, TooLarge
from regfactor.graphs import (
    CanonicalShape,
    Graph,
    Multigraph,
    aut_count,
    canonicalize,
    complete_graph,
    count_injective_embeddings,
    count_subgraphs,
    cycle_graph,
    graph_to_text,
    is_star,
    multigraph_to_text,
    multishape,
    multishape_aut,
    overlay,
    overlay_classify,
    parse_graph_stream,
    parse_graph_text,
    path_graph,
    shape_from_name,
    star_graph,
)
from regfactor.rng import Xoshiro256StarStar


def all_graphs_on(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


class TestCanonicalize:
    def test_relabeled_triangle(self):
        g = Graph(10, [(5, 7), (5, 9), (7, 9)])
        assert canonicalize(g) == CanonicalShape(3, ((0, 1), (0, 2), (1, 2)))

    def test_path_relabelings_agree(self):
        assert canonicalize(Graph(3, [(0, 1), (1, 2)])) == canonicalize(
            Graph(3, [(2, 0), (0, 1)]))

    def test_c6_differs_from_two_triangles(self):
        two = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert canonicalize(cycle_graph(6)) != canonicalize(two)

    def test_lex_least_edge_list_small(self):
        # brute-force definition on every graph with <= 5 vertices
        for n in (2, 3, 4):
            for g in all_graphs_on(n):
                if not g.edges:
                    continue
                verts = g.non_isolated()
                k = len(verts)
                best = None
                for perm in permutations(range(k)):
                    mp = dict(zip(verts, perm))
                    cand = tuple(sorted(
                        tuple(sorted((mp[u], mp[v]))) for u, v in g.edges))
                    if best is None or cand < best:
                        best = cand
                assert canonicalize(g).edges == best

    def test_isomorphism_complete_up_to_6_vertices(self):
        # group all labeled graphs by canonical form; each class must have
        # exactly n!/aut(rep) members, which fails if isomorphic graphs
        # ever canonicalize differently
        for n in (4, 5, 6):
            groups: dict[tuple, int] = {}
            for g in all_graphs_on(n):
                key = canonicalize(g)
                groups[key] = groups.get(key, 0) + 1
            total = 0
            for shape, cnt in groups.items():
                iso = shape.nverts
                rep = Graph(n, shape.edges) if shape.nedges else Graph(n, [])
                expected = (math.factorial(n)
                            // (aut_count(rep) * math.factorial(n - iso)))
                assert cnt == expected, (n, shape, cnt, expected)
                total += cnt
            assert total == 2 ** (n * (n - 1) // 2)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_invariant_under_random_relabeling(self, data):
        n = data.draw(st.integers(3, 7))
        pairs = list(combinations(range(n), 2))
        edges = data.draw(st.sets(st.sampled_from(pairs), min_size=1))
        perm = data.draw(st.permutations(range(n)))
        g = Graph(n, edges)
        h = g.relabel(list(perm))
        assert canonicalize(g) == canonicalize(h)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            canonicalize(cycle_graph(11))


class TestAut:
    def test_known_groups(self):
        assert aut_count(cycle_graph(3)) == 6
        assert aut_count(path_graph(4)) == 2
        assert aut_count(cycle_graph(4)) == 8
        assert aut_count(cycle_graph(5)) == 10
        assert aut_count(complete_graph(4)) == 24
        assert aut_count(star_graph(3)) == 6
        assert aut_count(Graph(4, [(0, 1), (2, 3)])) == 8  # two disjoint edges

    def test_against_permutation_bruteforce(self):
        for n in (3, 4, 5):
            for g in all_graphs_on(n):
                if not g.edges:
                    continue
                verts = g.non_isolated()
                k = len(verts)
                idx = {v: i for i, v in enumerate(verts)}
                eset = {tuple(sorted((idx[u], idx[v]))) for u, v in g.edges}
                brute = sum(
                    1 for perm in permutations(range(k))
                    if {tuple(sorted((perm[u], perm[v]))) for u, v in eset} == eset)
                assert aut_count(g) == brute


class TestSubgraphCounts:
    def test_contract_examples(self):
        assert count_subgraphs(cycle_graph(5), path_graph(5)) == 5
        assert count_subgraphs(path_graph(4), path_graph(4)) == 1
        assert count_subgraphs(complete_graph(4), cycle_graph(3)) == 4

    def test_counts_times_aut_equal_embeddings_small(self):
        shapes = [path_graph(2), path_graph(3), cycle_graph(3), path_graph(4),
                  star_graph(3), cycle_graph(4), cycle_graph(5),
                  Graph(4, [(0, 1), (2, 3)])]
        rng = Xoshiro256StarStar(17)
        hosts = []
        for _ in range(12):
            n = 5 + rng.next_below(2)
            pairs = list(combinations(range(n), 2))
            hosts.append(Graph(n, [e for e in pairs if rng.next_float() < 0.5]))
        for h in hosts:
            for f in shapes:
                emb = count_injective_embeddings(h, f)
                assert emb == count_subgraphs(h, f) * aut_count(f)

    def test_embedding_count_against_naive(self):
        # naive: direct loop over injective tuples
        f = cycle_graph(4)
        h = complete_graph(5)
        naive = 0
        for tup in permutations(range(5), 4):
            ok = all(h.has_edge(tup[i], tup[(i + 1) % 4]) for i in range(4))
            naive += ok
        assert count_injective_embeddings(h, f) == naive

    def test_zero_when_impossible(self):
        assert count_subgraphs(path_graph(3), cycle_graph(3)) == 0


class TestOverlay:
    def test_identical_triangles(self):
        t = Graph(3, [(0, 1), (1, 2), (0, 2)])
        ov = overlay([t, t])
        assert all(m == 2 for m in ov.mult.values())
        assert len(ov.mult) == 3

    def test_disjoint_triangles(self):
        t1 = Graph(6, [(0, 1), (1, 2), (0, 2)])
        t2 = Graph(6, [(3, 4), (4, 5), (3, 5)])
        ov = overlay([t1, t2])
        assert len(ov.mult) == 6
        assert all(m == 1 for m in ov.mult.values())

    def test_share_one_vertex(self):
        t1 = Graph(5, [(0, 1), (0, 2), (1, 2)])
        t2 = Graph(5, [(0, 3), (0, 4), (3, 4)])
        ov = overlay([t1, t2])
        assert len(ov.active_vertices()) == 5
        assert sorted(ov.mult.values()) == [1] * 6
        assert len(ov.e_sing) == 6


class TestOverlayClassify:
    def test_two_disjoint_c3(self):
        t1 = Graph(6, [(0, 1), (1, 2), (0, 2)])
        t2 = Graph(6, [(3, 4), (4, 5), (3, 5)])
        rep = overlay_classify([t1, t2], mode="3.2")
        assert rep.lhs == rep.rhs == 3
        assert rep.equality
        assert rep.component_tags == ("isolated-single-cycle",) * 2

    def test_perfectly_overlaid_c4(self):
        c4 = cycle_graph(4)
        rep = overlay_classify([c4, c4], mode="3.2")
        assert rep.equality and rep.lhs == 4
        assert rep.component_tags == ("perfect-double-overlay",)

    def test_sharing_one_vertex_strict(self):
        t1 = Graph(5, [(0, 1), (0, 2), (1, 2)])
        t2 = Graph(5, [(0, 3), (0, 4), (3, 4)])
        rep = overlay_classify([t1, t2], mode="3.2")
        assert rep.lhs == 2 and rep.rhs == 3 and not rep.equality
        assert rep.component_tags == ("strict-inequality",)

    def test_mode_32_rejects_low_degree(self):
        with pytest.raises(HypothesisViolation):
            overlay_classify([path_graph(3)], mode="3.2")

    def test_mode_51_needs_cycle_in_every_component(self):
        tri = Graph(6, [(0, 1), (1, 2), (0, 2)])
        dbl = Multigraph(6, {(4, 5): 2})
        with pytest.raises(HypothesisViolation):
            overlay_classify([tri, dbl], mode="5.1")

    def test_mode_51_pendant_tree_equality(self):
        tri = Graph(6, [(0, 1), (1, 2), (0, 2)])
        pend1 = Multigraph(6, {(0, 3): 2})
        pend2 = Multigraph(6, {(3, 4): 2})
        rep = overlay_classify([tri, pend1, pend2], mode="5.1")
        assert rep.equality
        assert rep.component_tags == ("cycle-with-doubled-pendant-trees",)

    def test_random_51_overlays_never_violate(self):
        rng = Xoshiro256StarStar(31)
        n = 9
        for _ in range(10_000):
            parts = []
            has_cycle = False
            for _ in range(1 + rng.next_below(3)):
                if rng.next_below(2) and has_cycle:
                    u = rng.next_below(n)
                    v = rng.next_below(n)
                    while v == u:
                        v = rng.next_below(n)
                    parts.append(Multigraph(n, {(u, v): 2}))
                else:
                    k = 3 + rng.next_below(3)
                    verts = []
                    while len(verts) < k:
                        v = rng.next_below(n)
                        if v not in verts:
                            verts.append(v)
                    parts.append(Graph(n, [(verts[i], verts[(i + 1) % k])
                                           for i in range(k)]))
                    has_cycle = True
            try:
                rep = overlay_classify(parts, mode="5.1")
            except HypothesisViolation:
                continue
            assert rep.lhs <= rep.rhs

    def test_32_equality_cases_verified_structurally(self, g63):
        # every equality report must decompose into lemma cases (i)/(ii):
        # multiplicity-1 cycles or all-multiplicity-2 components
        rng = Xoshiro256StarStar(77)
        checked = 0
        for _ in range(4000):
            n = 8
            parts = []
            for _ in range(1 + rng.next_below(2)):
                k = 3 + rng.next_below(3)
                verts = []
                while len(verts) < k:
                    v = rng.next_below(n)
                    if v not in verts:
                        verts.append(v)
                parts.append(Graph(n, [(verts[i], verts[(i + 1) % k])
                                       for i in range(k)]))
            rep = overlay_classify(parts, mode="3.2")
            if not rep.equality:
                continue
            checked += 1
            ov = overlay(parts)
            for comp in ov.components():
                mult = {e: m for e, m in ov.mult.items() if e[0] in comp}
                all_two = all(m == 2 for m in mult.values())
                all_one = all(m == 1 for m in mult.values())
                deg: dict[int, int] = {}
                for (u, v), _m in mult.items():
                    deg[u] = deg.get(u, 0) + 1
                    deg[v] = deg.get(v, 0) + 1
                is_cycle = all(c == 2 for c in deg.values()) and len(mult) == len(deg)
                assert (all_one and is_cycle) or all_two
        assert checked > 50


class TestSerialization:
    def test_graph_round_trip(self):
        g = cycle_graph(5)
        assert parse_graph_text(graph_to_text(g)) == g

    def test_multigraph_round_trip(self):
        m = Multigraph(4, {(0, 1): 2, (1, 2): 1})
        assert parse_graph_text(multigraph_to_text(m)) == m

    def test_stream(self):
        text = graph_to_text(cycle_graph(3)) + graph_to_text(path_graph(4))
        gs = parse_graph_stream(text)
        assert gs == [cycle_graph(3), path_graph(4)]


class TestShapes:
    def test_names(self):
        assert shape_from_name("C5") == cycle_graph(5)
        assert shape_from_name("P4") == path_graph(4)
        assert shape_from_name("K4") == complete_graph(4)
        assert shape_from_name("S3") == star_graph(3)

    def test_is_star(self):
        assert is_star(star_graph(4))
        assert is_star(path_graph(2))
        assert is_star(path_graph(3))
        assert not is_star(path_graph(4))
        assert not is_star(cycle_graph(3))

    def test_multishape_canonical_and_aut(self):
        a = multishape([(2, 5, 2), (5, 7, 1)])
        b = multishape([(0, 1, 1), (1, 3, 2)])
        assert a == b
        # doubled path center is fixed: only the leaf swap when mults equal
        assert multishape_aut(multishape([(0, 1, 2), (1, 2, 2)])) == 2
        assert multishape_aut(multishape([(0, 1, 2), (1, 2, 1)])) == 1
        assert multishape_aut(multishape([(0, 1, 1), (1, 2, 1), (0, 2, 1)])) == 6
