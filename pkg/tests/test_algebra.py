"""Factor algebra: power reduction, pendant/disconnected elimination,
the exact subgraph-count expansion, and reduction soundness."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest

from regfactor.algebra import (
    FactorExpr,
    evaluate,
    expand_subgraph_count,
    expr_to_text,
    gamma_expr,
    power_reduce,
    reduce_degree_one,
    reduce_disconnected,
    reduce_full,
)
from regfactor.ensemble import EnsembleSpec, enumerate_regular, sample_stream
from regfactor.factors import EdgeField, gamma
from regfactor.graphs import (
    Graph,
    Multigraph,
    canonicalize,
    complete_graph,
    count_subgraphs,
    cycle_graph,
    path_graph,
    star_graph,
)
from regfactor.ring import QuadExt, RingElem
from regfactor.rng import Xoshiro256StarStar


def random_graph(n, seed, prob=0.5):
    rng = Xoshiro256StarStar(seed)
    pairs = list(combinations(range(n), 2))
    return Graph(n, [e for e in pairs if rng.next_float() < prob])


def all_small_shapes() -> dict:
    """Every isolated-vertex-free shape on 2..6 vertices, one rep each."""
    shapes: dict = {}
    for n in range(2, 7):
        pairs = list(combinations(range(n), 2))
        for mask in range(1, 1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            g = Graph(n, edges)
            if len(g.non_isolated()) == n:
                shapes.setdefault(canonicalize(g), g)
    return shapes


class TestPowerReduce:
    def test_doubled_edge(self, g63):
        e = power_reduce(Multigraph(2, {(0, 1): 2}))
        # constant C(n,2), K2 coefficient -(2p-1)/q: check by evaluation
        for g in g63[:5]:
            v = evaluate(e, g, d=3, exact=True)
            # sum of chi^2 over all pairs is C(n,2) on a regular graph
            assert v == Fraction(15)

    def test_triple_edge_coefficients(self, g63):
        e = power_reduce(Multigraph(2, {(0, 1): 3}))
        for g in g63[:5]:
            fld = EdgeField(g, d=3)
            direct = chi_cubed_sum(g, fld)
            assert evaluate(e, g, field=fld) == pytest.approx(direct, rel=1e-9)

    def test_simple_shape_is_fixed_point(self):
        e = power_reduce(Multigraph(3, {(0, 1): 1, (1, 2): 1, (0, 2): 1}))
        assert len(e.terms) == 1
        [(mono, coeff)] = e.terms.items()
        assert mono == (canonicalize(cycle_graph(3)),)
        assert coeff == RingElem.const(1)
        assert e.constant.is_zero()


def chi_cubed_sum(g, fld):
    x = fld.chi_matrix()
    n = g.n
    return sum(x[u, v] ** 3 for u in range(n) for v in range(u + 1, n))


class TestDegreeOneReduction:
    def test_p3_reduces_to_constant(self):
        red = reduce_full(gamma_expr(path_graph(3)))
        assert not red.terms
        for n in (6, 8, 20):
            val = red.constant.eval_exact(n, Fraction(1, 2))
            assert val == QuadExt(Fraction(-n * (n - 1), 2), 0, Fraction(1, 4))

    def test_k2_reduces_to_zero(self):
        red = reduce_full(gamma_expr(path_graph(2)))
        assert not red.terms and red.constant.is_zero()

    def test_p4_reduction_structure(self):
        red = reduce_full(gamma_expr(path_graph(4)))
        assert set(red.terms) == {(canonicalize(cycle_graph(3)),)}
        assert red.terms[(canonicalize(cycle_graph(3)),)] == RingElem.const(-3)
        # constant equals -(2p-1) n(n-1) / (2q)
        for n, p in ((6, Fraction(3, 5)), (21, Fraction(1, 2)), (11, Fraction(3, 10))):
            got = red.constant.eval_exact(n, p)
            s = p * (1 - p)
            expect = QuadExt(0, -(2 * p - 1) * Fraction(n * (n - 1), 2) / s, s)
            assert got == expect

    def test_p4_identity_on_oracle(self, g63):
        red = reduce_full(gamma_expr(path_graph(4)))
        for g in g63:
            fld = EdgeField(g, d=3)
            lhs = gamma(g, path_graph(4), field=fld).raw_float
            assert evaluate(red, g, field=fld) == pytest.approx(lhs, rel=1e-9)

    def test_star_reduces_to_constant(self, g63):
        red = reduce_full(gamma_expr(star_graph(3)))
        assert not red.terms
        vals = {gamma(g, star_graph(3), d=3, exact=True, method="generic").raw
                for g in g63[:6]}
        expect = red.constant.eval_exact(6, Fraction(3, 5))
        assert all(v == expect for v in vals)


class TestDisconnectedReduction:
    def test_two_disjoint_edges(self, g63):
        shape = Graph(4, [(0, 1), (2, 3)])
        rd = reduce_disconnected(gamma_expr(shape))
        assert all(len(s.graph().non_isolated()) and True for s in rd.shapes())
        # no disconnected shape may remain
        from regfactor.graphs import is_connected
        assert all(is_connected(s.graph()) for s in rd.shapes())
        # the K2*K2 product monomial is present
        k2 = canonicalize(path_graph(2))
        assert (k2, k2) in rd.terms
        for g in g63:
            lhs = gamma(g, shape, d=3, exact=True, method="generic").raw
            assert (evaluate(rd, g, d=3, exact=True) - lhs).is_zero()

    def test_holds_off_the_regular_ensemble(self):
        # the split identity is degree-sequence free
        shape = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        rd = reduce_disconnected(gamma_expr(shape))
        for seed in range(6):
            g = random_graph(9, seed, prob=0.4)
            lhs = gamma(g, shape, p=Fraction(1, 3), exact=True, method="generic").raw
            rhs = evaluate(rd, g, p=Fraction(1, 3), exact=True)
            assert (lhs - rhs).is_zero()

    def test_connected_input_unchanged(self):
        e = gamma_expr(cycle_graph(4))
        rd = reduce_disconnected(e)
        assert rd.terms == e.terms and rd.constant.is_zero()

    def test_two_triangles_against_samples(self, g83):
        shape = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        rd = reduce_disconnected(gamma_expr(shape))
        for g in g83[:: len(g83) // 20]:
            fld = EdgeField(g, d=3)
            lhs = gamma(g, shape, field=fld, method="generic").raw_float
            assert evaluate(rd, g, field=fld) == pytest.approx(lhs, rel=1e-9, abs=1e-7)


class TestReducedBasis:
    def test_reduced_form_structure(self):
        # every output factor connected with min degree >= 2
        shapes = [path_graph(5), star_graph(4),
                  Graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)]),
                  Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])]
        for h in shapes:
            red = reduce_full(gamma_expr(h))
            assert red.is_reduced(), h

    @pytest.mark.slow
    def test_soundness_all_shapes_up_to_6_vertices(self, g63):
        # reduce_full must preserve the value on d-regular graphs for every
        # isolated-vertex-free shape on <= 6 vertices
        shapes = all_small_shapes()
        assert len(shapes) == 155
        fields6 = [EdgeField(g, d=3) for g in g63]
        for shape, h in shapes.items():
            red = reduce_full(gamma_expr(h))
            assert red.is_reduced(), shape
            for g, fld in zip(g63, fields6):
                lhs = gamma(g, h, field=fld, method="generic").raw_float
                rhs = evaluate(red, g, field=fld)
                assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-7), shape

    @pytest.mark.slow
    def test_soundness_on_g20_samples(self):
        # the identity carries no n-dependence; spot the denser ensemble
        # with every shape on <= 5 vertices plus 6-vertex representatives
        shapes = all_small_shapes()
        chosen = [h for s, h in shapes.items() if s.nverts <= 5]
        chosen += [h for s, h in sorted(shapes.items()) if s.nverts == 6][::9]
        milestones = list(sample_stream(EnsembleSpec(20, 10, seed=606), 50))
        fields20 = [EdgeField(g, d=10) for g in milestones]
        for h in chosen:
            red = reduce_full(gamma_expr(h))
            for g, fld in zip(milestones, fields20):
                lhs = gamma(g, h, field=fld, method="generic").raw_float
                rhs = evaluate(red, g, field=fld)
                assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-6)

    def test_soundness_exact_mode_spot(self, g63):
        for h in (path_graph(4), Graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)]),
                  star_graph(3), cycle_graph(5)):
            red = reduce_full(gamma_expr(h))
            for g in g63[::17]:
                lhs = gamma(g, h, d=3, exact=True, method="generic").raw
                rhs = evaluate(red, g, d=3, exact=True)
                assert (lhs - rhs).is_zero(), h


class TestExpansion:
    def test_k2_expansion(self, g63):
        e = expand_subgraph_count(path_graph(2))
        for g in g63[:3]:
            assert evaluate(e, g, d=3, exact=True) == Fraction(9)  # e(G) = 9

    def test_c3_expansion_exact_on_oracle(self, g63):
        e = expand_subgraph_count(cycle_graph(3))
        for g in g63:
            direct = count_subgraphs(g, cycle_graph(3))
            assert evaluate(e, g, d=3, exact=True) == Fraction(direct)

    def test_p4_expansion_on_oracle(self, g63):
        e = expand_subgraph_count(path_graph(4))
        for g in g63:
            direct = count_subgraphs(g, path_graph(4))
            assert evaluate(e, g, d=3, exact=True) == Fraction(direct)

    def test_arbitrary_degree_sequences(self):
        # the expansion is algebraic: no regularity is needed
        for name, h in (("C4", cycle_graph(4)), ("K4", complete_graph(4)),
                        ("C5", cycle_graph(5))):
            e = expand_subgraph_count(h)
            for seed in range(4):
                g = random_graph(12, seed * 31 + 7, prob=0.45)
                direct = count_subgraphs(g, h)
                val = evaluate(e, g, p=Fraction(1, 3))
                assert val == pytest.approx(direct, rel=1e-9, abs=1e-7), name
                assert evaluate(e, g, p=Fraction(1, 3), exact=True) == direct

    def test_star_counts_deterministic(self, g63):
        # star expansion evaluates to n*C(d,s) on every regular graph
        for s, expect in ((2, 6 * 3), (3, 6 * 1)):
            e = expand_subgraph_count(star_graph(s))
            for g in g63[:10]:
                assert evaluate(e, g, d=3, exact=True) == expect

    def test_c3_term_count(self):
        e = expand_subgraph_count(cycle_graph(3))
        assert len(e.terms) == 3  # K2, P3, C3; empty graph in the constant


class TestEvaluateContract:
    def test_c3_on_c5_is_zero(self):
        e = expand_subgraph_count(cycle_graph(3))
        assert evaluate(e, cycle_graph(5), n=5, d=2) == pytest.approx(0.0, abs=1e-12)

    def test_n_mismatch_rejected(self):
        e = expand_subgraph_count(cycle_graph(3))
        with pytest.raises(ValueError):
            evaluate(e, cycle_graph(5), n=7, d=2)

    def test_text_form_stable(self):
        a = expr_to_text(reduce_full(gamma_expr(path_graph(4))))
        b = expr_to_text(reduce_full(gamma_expr(path_graph(4))))
        assert a == b
        assert "(0,1)(0,2)(1,2)" in a
