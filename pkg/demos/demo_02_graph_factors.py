#!/usr/bin/env python3
"""Graph factors: the building blocks of symmetric edge statistics.

Each potential edge of a graph in G(n,d) carries the standardized
indicator chi_e = (x_e - p)/sqrt(p(1-p)) with p = d/(n-1).  The factor of
a shape H sums the chi product over all copies of H in the complete
graph.  On regular graphs small factors collapse: the edge factor is 0
and the 2-path factor is the constant -n(n-1)/2, while cycle factors
carry the actual randomness.
"""

from fractions import Fraction

from regfactor.ensemble import EnsembleSpec, enumerate_regular, sample_regular
from regfactor.factors import EdgeField, gamma, normalization_constants
from regfactor.graphs import cycle_graph, path_graph

print("deterministic factors on every graph of G(6,3):")
for g in list(enumerate_regular(6, 3))[:4]:
    fld = EdgeField(g, d=3)
    k2 = gamma(g, path_graph(2), field=fld).raw_float
    p3 = gamma(g, path_graph(3), field=fld).raw_float
    c3 = gamma(g, cycle_graph(3), field=fld).raw_float
    print(f"  gamma_K2 = {k2:+.12f}  gamma_P3 = {p3:+.6f}  gamma_C3 = {c3:+.4f}")

# exact rational evaluation in the field Q(sqrt(p(1-p)))
g = next(enumerate_regular(6, 3))
v = gamma(g, cycle_graph(4), d=3, exact=True, method="generic").raw
print(f"\nexact gamma_C4 on one graph: {v}")

# normalized factors: (gamma - E_H)/sigma_H, E_H nonzero for even cycles
n, d = 64, 32
g = sample_regular(EnsembleSpec(n=n, d=d, seed=3))
for h, name in ((cycle_graph(3), "C3"), (cycle_graph(4), "C4")):
    e_h, sigma = normalization_constants(h, n)
    fv = gamma(g, h, d=d)
    print(f"gamma_{name}: raw {fv.raw_float:+10.2f}  E_H {e_h:7.1f}  "
          f"sigma {sigma:8.1f}  normalized {fv.normalized:+.3f}")
