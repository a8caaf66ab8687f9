"""The uniform d-regular ensemble G(n, d).

Two routes to the distribution:

* ``enumerate_regular`` -- exhaustive lexicographic backtracking over all
  labeled d-regular graphs on n vertices.  Only feasible for tiny n; this
  is the exact oracle every Monte-Carlo result is checked against.
* ``sample_regular`` / ``sample_stream`` -- a double-edge-swap Markov
  chain started from a circulant graph.  Proposals pick two distinct
  edges and one of the two rewirings uniformly; any proposal that would
  create a loop, a parallel edge, or reuse an existing edge is rejected
  as a stay-in-place move, so the kernel is symmetric and the stationary
  law is uniform.  For d > (n-1)/2 the chain runs on the complement
  ensemble and the sample is complemented on the way out.

Determinism: all randomness derives from the EnsembleSpec's 64-bit seed
through the generators in :mod:`regfactor.rng`; equal parameter sets
give bit-identical graph streams on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import Infeasible, TooLarge
from .graphs import Graph
from .rng import BlockRng

ENUM_MAX_VERTICES = 10
ENUM_MAX_ESTIMATED_COUNT = 10**8


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of one sampling run over G(n, d)."""

    n: int
    d: int
    seed: int = 0
    burn_in_swaps: int | None = None      # None = 20 m ln m for the chain's m
    thinning_swaps: int | None = None     # None = 2 m ln m

    def __post_init__(self):
        if not (0 <= self.d <= self.n - 1):
            raise Infeasible(f"degree {self.d} impossible on {self.n} vertices")
        if (self.n * self.d) % 2:
            raise Infeasible(f"n*d = {self.n * self.d} is odd")

    @property
    def p(self) -> Fraction:
        return Fraction(self.d, self.n - 1)

    @property
    def density(self) -> float:
        return self.d / (self.n - 1)

    def chain_degree(self) -> int:
        """Degree actually run by the chain (complement transfer)."""
        return min(self.d, self.n - 1 - self.d)

    def chain_edges(self) -> int:
        return self.n * self.chain_degree() // 2

    def effective_burn_in(self) -> int:
        if self.burn_in_swaps is not None:
            return self.burn_in_swaps
        m = self.chain_edges()
        return 0 if m < 2 else int(math.ceil(20.0 * m * math.log(m)))

    def effective_thinning(self) -> int:
        if self.thinning_swaps is not None:
            return self.thinning_swaps
        m = self.chain_edges()
        return 0 if m < 2 else int(math.ceil(2.0 * m * math.log(m)))


def complement_spec(spec: EnsembleSpec) -> EnsembleSpec:
    """Spec of the complement ensemble: d -> n-1-d, all else unchanged."""
    return replace(spec, d=spec.n - 1 - spec.d)


# ---------------------------------------------------------------------------
# exact enumeration


def log_pairing_estimate(n: int, d: int) -> float:
    """Crude log-size estimate of G(n,d) from the pairing model,
    used only as an enumeration-feasibility guard."""
    if d in (0, n - 1):
        return 0.0
    m = n * d // 2
    logc = (math.lgamma(n * d + 1) - math.lgamma(m + 1) - m * math.log(2.0)
            - n * math.lgamma(d + 1))
    return logc - (d * d - 1) / 4.0


def enumerate_regular(n: int, d: int) -> Iterator[Graph]:
    """Yield every labeled d-regular graph on n vertices exactly once,
    in lexicographic order of the edge set."""
    if (n * d) % 2:
        raise Infeasible(f"n*d = {n * d} is odd")
    if not (0 <= d <= n - 1):
        raise Infeasible(f"degree {d} impossible on {n} vertices")
    if n > ENUM_MAX_VERTICES:
        raise TooLarge(f"enumeration capped at n = {ENUM_MAX_VERTICES}")
    if log_pairing_estimate(n, d) > math.log(ENUM_MAX_ESTIMATED_COUNT):
        raise TooLarge("estimated ensemble size exceeds the enumeration guard")

    if d == 0:
        yield Graph(n, [])
        return

    residual = [d] * n
    adj = [0] * n          # neighbor bitsets
    edges: list[tuple[int, int]] = []

    def first_open() -> int:
        for v in range(n):
            if residual[v]:
                return v
        return -1

    def emit() -> Graph:
        return Graph(n, list(edges))

    def extend():
        u = first_open()
        if u == -1:
            yield emit()
            return
        need = residual[u]
        cands = [v for v in range(u + 1, n)
                 if residual[v] > 0 and not (adj[u] >> v) & 1]
        if len(cands) < need:
            return
        for chosen in combinations(cands, need):
            # saturating u must leave every later vertex completable
            for v in chosen:
                residual[v] -= 1
                adj[u] |= 1 << v
                adj[v] |= 1 << u
                edges.append((u, v))
            residual[u] = 0
            feasible = True
            for v in range(u + 1, n):
                if residual[v] == 0:
                    continue
                room = sum(1 for w in range(u + 1, n)
                           if w != v and residual[w] > 0 and not (adj[v] >> w) & 1)
                if residual[v] > room:
                    feasible = False
                    break
            if feasible:
                yield from extend()
            residual[u] = need
            for v in chosen:
                residual[v] += 1
                adj[u] &= ~(1 << v)
                adj[v] &= ~(1 << u)
                edges.pop()

    yield from extend()


# ---------------------------------------------------------------------------
# double-edge-swap sampling


def circulant_start(n: int, d: int) -> Graph:
    """d-regular seed graph: each vertex joined to its floor(d/2) nearest
    neighbors on each side, plus the antipodal matching when d is odd."""
    if d == 0:
        return Graph(n, [])
    edges = []
    half = d // 2
    for i in range(n):
        for k in range(1, half + 1):
            edges.append((i, (i + k) % n))
    if d % 2:
        if n % 2:
            raise Infeasible("odd degree needs an even vertex count")
        edges += [(i, i + n // 2) for i in range(n // 2)]
    g = Graph(n, edges)
    assert g.is_regular(d)
    return g


class SwapChain:
    """Sequential double-edge-swap chain over graphs with a fixed degree
    sequence.  ``step(k)`` advances k proposal steps (rejections included).

    Proposals come from one 64-bit draw each: edge indices i and j from
    disjoint low bit fields (masked rejection keeps them exactly uniform;
    draws with an out-of-range field are discarded without advancing the
    chain) and the rewiring orientation from the top bit.
    """

    _BLOCK = 1 << 16

    def __init__(self, start: Graph, rng: BlockRng, paranoid: bool = False):
        self.n = start.n
        self.rng = rng
        self.paranoid = paranoid
        self._degseq = start.degree_sequence()
        m = len(start.edges)
        if m >= 1 << 20:
            raise TooLarge("swap chain supports up to 2^20 edges")
        self._vs = (start.n - 1).bit_length()
        self._vmask = (1 << self._vs) - 1
        vs = self._vs
        self.edge_list = [(u << vs) | v for u, v in start.edges]
        self.edge_set = set(self.edge_list)
        self._props: list[tuple[int, int, int]] = []
        self._pos = 0

    def _refill(self) -> None:
        m = len(self.edge_list)
        bits = self.rng.u64_block(self._BLOCK)
        i = (bits & np.uint64((1 << (m - 1).bit_length()) - 1)).astype(np.int64)
        j = ((bits >> np.uint64(20)) & np.uint64((1 << (m - 1).bit_length()) - 1)).astype(np.int64)
        o = (bits >> np.uint64(63)).astype(np.int64)
        ok = (i < m) & (j < m)
        self._props = list(zip(i[ok].tolist(), j[ok].tolist(), o[ok].tolist()))
        self._pos = 0

    def step(self, count: int) -> None:
        edges = self.edge_list
        eset = self.edge_set
        m = len(edges)
        if m < 2 or count <= 0:
            return
        vs = self._vs
        vmask = self._vmask
        props = self._props
        pos = self._pos
        done = 0
        while done < count:
            if pos >= len(props):
                self._refill()
                props = self._props
                pos = 0
            i, j, o = props[pos]
            pos += 1
            done += 1
            if i == j:
                continue
            e1 = edges[i]
            e2 = edges[j]
            u = e1 >> vs
            a = e1 & vmask
            v = e2 >> vs
            b = e2 & vmask
            if o:
                v, b = b, v
            # rewire to (u,v), (a,b); degenerate proposals stay in place
            if u == v or u == b or a == v or a == b:
                continue
            k1 = (u << vs) | v if u < v else (v << vs) | u
            if k1 in eset:
                continue
            k2 = (a << vs) | b if a < b else (b << vs) | a
            if k2 in eset:
                continue
            eset.remove(e1)
            eset.remove(e2)
            eset.add(k1)
            eset.add(k2)
            edges[i] = k1
            edges[j] = k2
            if self.paranoid:
                assert self.graph().degree_sequence() == self._degseq
        self._pos = pos

    def graph(self) -> Graph:
        vs = self._vs
        vmask = self._vmask
        return Graph(self.n, [(e >> vs, e & vmask) for e in self.edge_list])


def sample_stream(spec: EnsembleSpec, count: int,
                  paranoid: bool = False) -> Iterator[Graph]:
    """Yield ``count`` graphs from one chain keyed by ``spec.seed``."""
    if spec.d < 1 or spec.n < spec.d + 1:
        raise Infeasible("sampling needs d >= 1 and n >= d+1")
    d_eff = spec.chain_degree()
    want_complement = d_eff != spec.d

    if d_eff == 0:
        # unique outcome; no randomness consumed
        g = Graph(spec.n, [])
        out = g.complement() if want_complement else g
        for _ in range(count):
            yield out
        return

    rng = BlockRng(spec.seed)
    chain = SwapChain(circulant_start(spec.n, d_eff), rng, paranoid=paranoid)
    chain.step(spec.effective_burn_in())
    thin = spec.effective_thinning()
    for k in range(count):
        if k:
            chain.step(thin)
        g = chain.graph()
        if want_complement:
            g = g.complement()
        if __debug__:
            assert g.is_regular(spec.d)
        yield g


def sample_regular(spec: EnsembleSpec) -> Graph:
    """One draw from (approximately) uniform G(n, d); deterministic in spec."""
    return next(sample_stream(spec, 1))
