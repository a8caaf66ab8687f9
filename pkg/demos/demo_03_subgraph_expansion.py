#!/usr/bin/env python3
"""The exact expansion of subgraph counts into graph factors.

Writing each edge indicator as p + q*chi and expanding the product over
a copy of H turns the count X_H into an exact linear combination of
graph factors gamma_S over the subgraph classes S of H.  The identity is
algebraic: it holds on every graph, whatever the degree sequence.
"""

from fractions import Fraction

from regfactor.algebra import evaluate, expand_subgraph_count, expr_to_text
from regfactor.graphs import Graph, count_subgraphs, cycle_graph
from regfactor.rng import Xoshiro256StarStar

expr = expand_subgraph_count(cycle_graph(3))
print("X_C3 expansion (coeff_a | coeff_b | shape):")
print(expr_to_text(expr))

# spot it on an arbitrary (non-regular) graph at an arbitrary density
rng = Xoshiro256StarStar(99)
edges = [(u, v) for u in range(12) for v in range(u + 1, 12)
         if rng.next_float() < 0.4]
g = Graph(12, edges)
for h, name in ((cycle_graph(3), "C3"), (cycle_graph(5), "C5")):
    e = expand_subgraph_count(h)
    direct = count_subgraphs(g, h)
    via = evaluate(e, g, p=Fraction(1, 3), exact=True)
    print(f"X_{name}: direct count {direct}, factor expansion {via} "
          f"({'equal' if via == direct else 'DIFFER'})")
