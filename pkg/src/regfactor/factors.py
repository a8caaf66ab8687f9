"""Numeric evaluation of edge variables, graph factors and trace statistics.

For a graph in the (n, d) ensemble, each potential edge carries the
standardized indicator chi_e = (x_e - p)/sqrt(p(1-p)) with p = d/(n-1).
The graph factor of a shape H is the sum over all embedded copies of H in
the complete graph of the product of chi over the copy's edges.

Evaluation routes:

* generic -- sum over injective embeddings, computed by quotienting the
  all-maps tensor contraction over vertex-coincidence patterns (exact in
  rational mode, float otherwise);
* literal backtracking -- a slow direct enumeration kept as the oracle;
* cycle specialization -- for C_3..C_6, the trace of the standardized
  adjacency matrix corrected by the closed-walk type table.

chi is defined as 0 on the diagonal, so trace sums range over closed
walks without self-loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateDensity,
    ShapeTooLargeForEnsemble,
    ShapeUnsupported,
    TooLarge,
    Unsupported,
)
from .graphs import (
    CanonicalShape,
    Graph,
    MultiShape,
    canonicalize,
    aut_count,
    connected_components,
    is_connected,
    is_cycle_graph,
    min_degree,
    multishape,
    multishape_aut,
    multishape_total_mult,
    shape_to_multishape,
)
from .ring import QuadExt

GAMMA_MAX_SHAPE_VERTICES = 8


class EdgeField:
    """A graph together with its ensemble density; evaluates chi products.

    Exact mode scales chi by b*q (p = a/b in lowest terms) so that every
    edge weight becomes the integer b*x_e - a; sums of scaled products are
    integers and are divided back out at the end.
    """

    def __init__(self, graph: Graph, d: int | None = None, p: Fraction | None = None):
        if (d is None) == (p is None):
            raise ValueError("give exactly one of d and p")
        self.graph = graph
        self.n = graph.n
        if d is not None:
            p = Fraction(d, graph.n - 1)
        self.p = Fraction(p)
        if not 0 < self.p < 1:
            raise DegenerateDensity(f"density {self.p} outside (0,1)")
        self.s = self.p * (1 - self.p)
        self.q = math.sqrt(float(self.s))
        self._chi: np.ndarray | None = None
        self._chi_pows: dict[int, np.ndarray] = {}
        self._w_pows: dict[int, np.ndarray] = {}
        self._inj_cache: dict[tuple[MultiShape, bool], float | int] = {}

    def chi_matrix(self) -> np.ndarray:
        """chi values as a float matrix with zero diagonal."""
        if self._chi is None:
            a = self.graph.adjacency_matrix()
            x = (a - float(self.p)) / self.q
            np.fill_diagonal(x, 0.0)
            self._chi = x
        return self._chi

    def chi_pow(self, m: int) -> np.ndarray:
        if m not in self._chi_pows:
            self._chi_pows[m] = self.chi_matrix() ** m
        return self._chi_pows[m]

    def weight_pow(self, m: int) -> np.ndarray:
        """(b*x_e - a)^m as an integer matrix, zero diagonal."""
        if m not in self._w_pows:
            a, b = self.p.numerator, self.p.denominator
            w = self.graph.adjacency_matrix(dtype=np.int64) * b - a
            np.fill_diagonal(w, 0)
            self._w_pows[m] = w**m
        return self._w_pows[m]

    def chi(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        x = 1.0 if self.graph.has_edge(u, v) else 0.0
        return (x - float(self.p)) / self.q

    def scaled_sum_to_quadext(self, total: int, emult: int) -> QuadExt:
        """Undo the (b*q)^emult scaling of an integer chi-product sum."""
        b = self.p.denominator
        base = Fraction(total, b**emult)
        if emult % 2 == 0:
            return QuadExt(base / self.s ** (emult // 2), 0, self.s)
        return QuadExt(0, base / self.s ** ((emult + 1) // 2), self.s)


# ---------------------------------------------------------------------------
# injective chi-product sums over multigraph shapes


def _partitions(k: int) -> Iterable[list[int]]:
    """Set partitions of range(k) as restricted-growth strings."""
    labels = [0] * k

    def rec(i: int, maxl: int):
        if i == k:
            yield labels[:]
            return
        for v in range(maxl + 2):
            labels[i] = v
            yield from rec(i + 1, max(maxl, v))

    if k == 0:
        yield []
    else:
        yield from rec(1, 0)


@lru_cache(maxsize=50_000)
def _merge_patterns(ms: MultiShape) -> tuple[tuple[MultiShape, int], ...]:
    """Nontrivial vertex-coincidence quotients of a shape, with counts.

    Partitions putting two adjacent vertices in one block would create a
    self-loop (chi is 0 there) and are skipped.
    """
    k, items = ms
    adj = {(u, v) for u, v, _ in items}
    out: dict[MultiShape, int] = {}
    for labels in _partitions(k):
        nblocks = max(labels) + 1
        if nblocks == k:
            continue
        if any(labels[u] == labels[v] for u, v in adj):
            continue
        q = multishape([(labels[u], labels[v], m) for u, v, m in items])
        out[q] = out.get(q, 0) + 1
    return tuple(sorted(out.items()))


_EINSUM_PATHS: dict[tuple[str, int], list] = {}


def _einsum_scalar(subs: str, ops: list[np.ndarray], n: int):
    key = (subs, n)
    path = _EINSUM_PATHS.get(key)
    if path is None:
        path = np.einsum_path(subs, *ops, optimize="greedy")[0]
        _EINSUM_PATHS[key] = path
    return np.einsum(subs, *ops, optimize=path)


def _all_maps_value(ms: MultiShape, field: EdgeField, exact: bool):
    """Sum over all (not necessarily injective) vertex maps via einsum."""
    k, items = ms
    letters = "abcdefghij"
    subs = ",".join(letters[u] + letters[v] for u, v, _ in items) + "->"
    if exact:
        ops = [field.weight_pow(m) for _, _, m in items]
        # keep integer arithmetic exact: fall back to object dtype if the
        # crude magnitude bound threatens int64
        b = field.p.denominator
        bound = float(field.n) ** k * float(b) ** multishape_total_mult(ms)
        if bound > 2**62:
            ops = [o.astype(object) for o in ops]
            return int(np.einsum(subs, *ops, optimize=True))
        return int(_einsum_scalar(subs, ops, field.n))
    ops = [field.chi_pow(m) for _, _, m in items]
    return float(_einsum_scalar(subs, ops, field.n))


def chi_injective_sum(ms: MultiShape, field: EdgeField, exact: bool = False):
    """Sum over injective vertex maps of the chi-power product of a shape.

    Returns a float, or the integer scaled sum in exact mode (use
    ``field.scaled_sum_to_quadext`` to unscale).
    """
    key = (ms, exact)
    cache = field._inj_cache
    if key in cache:
        return cache[key]
    if ms[0] > field.n:
        val: float | int = 0 if exact else 0.0
    else:
        val = _all_maps_value(ms, field, exact)
        for quotient, cnt in _merge_patterns(ms):
            val -= cnt * chi_injective_sum(quotient, field, exact)
    cache[key] = val
    return val


def _component_order(k: int, items: Sequence[tuple[int, int, int]]) -> list[tuple[int, list[tuple[int, int]]]]:
    """Vertices ordered so each attaches to predecessors when possible;
    returns (vertex, [(earlier vertex, mult), ...]) in placement order."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(k)}
    for u, v, m in items:
        adj[u].append((v, m))
        adj[v].append((u, m))
    comps = connected_components(k, [(u, v) for u, v, _ in items])
    placed: dict[int, int] = {}
    order: list[tuple[int, list[tuple[int, int]]]] = []
    for comp in comps:
        pending = list(comp)
        while pending:
            pick = None
            for v in pending:
                if any(u in placed for u, _ in adj[v]):
                    pick = v
                    break
            if pick is None:
                pick = pending[0]
            pending.remove(pick)
            checks = [(placed[u], m) for u, m in adj[pick] if u in placed]
            placed[pick] = len(order)
            order.append((pick, checks))
    return order


def chi_injective_sum_backtrack(ms: MultiShape, weights: Sequence[Sequence]):
    """Literal enumeration over injective tuples; the slow oracle route."""
    k, items = ms
    n = len(weights)
    if k > n:
        return 0 * weights[0][0]
    order = _component_order(k, items)
    checks = [chk for _, chk in order]
    total = 0 * weights[0][0]
    image = [0] * k

    def rec(i: int, used: int, acc):
        nonlocal total
        if i == k:
            total += acc
            return
        for x in range(n):
            if used >> x & 1:
                continue
            val = acc
            for slot, m in checks[i]:
                w = weights[x][image[slot]]
                for _ in range(m):
                    val = val * w
            image[i] = x
            rec(i + 1, used | (1 << x), val)

    rec(0, 0, 1 if isinstance(weights[0][0], int) else 1.0)
    return total


# ---------------------------------------------------------------------------
# closed-walk type tables


@dataclass(frozen=True)
class WalkTypeEntry:
    shape: MultiShape
    walks_per_copy: int     # c_G
    tag: str                # 'C' cycle-core, 'T' doubled-edge tree, 'W' other


@dataclass(frozen=True)
class WalkTypeTable:
    length: int
    entries: tuple[WalkTypeEntry, ...]

    def cycle_coefficient(self) -> int:
        cyc = multishape([(i, (i + 1) % self.length, 1) for i in range(self.length)])
        for e in self.entries:
            if e.shape == cyc:
                return e.walks_per_copy
        raise AssertionError("cycle shape missing from walk table")


def _strip_doubled_leaves(items: Sequence[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    cur = list(items)
    while True:
        deg: dict[int, list[int]] = {}
        for idx, (u, v, _) in enumerate(cur):
            deg.setdefault(u, []).append(idx)
            deg.setdefault(v, []).append(idx)
        drop = None
        for v, inc in deg.items():
            if len(inc) == 1 and cur[inc[0]][2] == 2:
                drop = inc[0]
                break
        if drop is None:
            return cur
        cur.pop(drop)


def _is_mult_cycle(items: Sequence[tuple[int, int, int]], mult: int) -> bool:
    if not items or any(m != mult for _, _, m in items):
        return False
    deg: dict[int, int] = {}
    for u, v, _ in items:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if any(c != 2 for c in deg.values()) or len(items) != len(deg):
        return False
    comps = connected_components(max(deg) + 1, [(u, v) for u, v, _ in items])
    return sum(1 for c in comps if len(c) > 1) == 1


def _walk_tag(ms: MultiShape) -> str:
    k, items = ms
    if all(m % 2 == 0 for _, _, m in items):
        comps = connected_components(k, [(u, v) for u, v, _ in items])
        if len(items) == k - len(comps):
            return "T"
    core = _strip_doubled_leaves(items)
    if _is_mult_cycle(core, 1) or _is_mult_cycle(core, 2):
        return "C"
    return "W"


@lru_cache(maxsize=None)
def walk_types(length: int) -> WalkTypeTable:
    """Classify closed walks of the given length by the multigraph their
    edge traversals trace out, with exact per-copy walk counts."""
    if not 3 <= length <= 6:
        raise Unsupported("walk type tables implemented for lengths 3..6")
    m = length
    counts: dict[MultiShape, int] = {}
    seq = [0] * m

    def rec(i: int):
        if i == m:
            if seq[-1] == seq[0]:
                return
            edges: dict[tuple[int, int], int] = {}
            for t in range(m):
                u, v = seq[t], seq[(t + 1) % m]
                key = (u, v) if u < v else (v, u)
                edges[key] = edges.get(key, 0) + 1
            ms = multishape([(u, v, c) for (u, v), c in edges.items()])
            counts[ms] = counts.get(ms, 0) + 1
            return
        for v in range(m):
            if i and v == seq[i - 1]:
                continue
            seq[i] = v
            rec(i + 1)

    rec(0)
    entries = []
    for ms, walks in sorted(counts.items()):
        v = ms[0]
        copies = math.perm(m, v) // multishape_aut(ms)
        if walks % copies:
            raise AssertionError("walk count not divisible by copy count (bug)")
        entries.append(WalkTypeEntry(ms, walks // copies, _walk_tag(ms)))
    return WalkTypeTable(m, tuple(entries))


# ---------------------------------------------------------------------------
# trace statistics and gamma evaluation


def trace_stat(g: Graph, length: int, d: int | None = None,
               p: Fraction | None = None, field: EdgeField | None = None) -> float:
    """tr((A - pJ + pI)^length) / (p(1-p))^(length/2); equals the sum over
    closed walks without self-loops of the chi product."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if field is None:
        field = EdgeField(g, d=d, p=p)
    x = field.chi_matrix()
    return float(np.trace(np.linalg.matrix_power(x, length)))


@dataclass
class FactorValue:
    """Raw and normalized value of one graph factor."""

    raw: float | QuadExt
    expectation_shift: float | None = None
    scale: float | None = None

    @property
    def raw_float(self) -> float:
        return self.raw.to_float() if isinstance(self.raw, QuadExt) else self.raw

    @property
    def normalized(self) -> float:
        if self.scale is None or self.expectation_shift is None:
            raise ShapeUnsupported("normalization undefined for this shape")
        return (self.raw_float - self.expectation_shift) / self.scale


def normalization_constants(h: Graph, n: int) -> tuple[float, float]:
    """(E_H, sigma_H): sigma_H = sqrt(n^v/aut), E_H nonzero only for even
    cycles where it equals 2 n^(v/2)/aut = n^(v/2)/v."""
    active = h.non_isolated()
    if not active or not is_connected(h) or min_degree(h) < 2:
        raise ShapeUnsupported("normalization needs a connected shape of min degree >= 2")
    v = len(active)
    if v > n:
        raise ShapeTooLargeForEnsemble(f"shape on {v} vertices in an n={n} ensemble")
    a = aut_count(h)
    sigma = math.sqrt(n**v / a)
    e_h = 0.0
    if is_cycle_graph(h) and v % 2 == 0:
        e_h = 2.0 * n ** (v / 2) / a
    return e_h, sigma


def _gamma_by_cycle_trace(g: Graph, length: int, field: EdgeField) -> float:
    table = walk_types(length)
    total = trace_stat(g, length, field=field)
    cyc_coeff = table.cycle_coefficient()
    cyc_shape = multishape([(i, (i + 1) % length, 1) for i in range(length)])
    for entry in table.entries:
        if entry.shape == cyc_shape:
            continue
        total -= entry.walks_per_copy * (
            chi_injective_sum(entry.shape, field) / multishape_aut(entry.shape))
    return total / cyc_coeff


def gamma(g: Graph, h: Graph, d: int | None = None, p: Fraction | None = None,
          method: str = "auto", exact: bool = False,
          field: EdgeField | None = None) -> FactorValue:
    """Graph factor of shape h evaluated on g in the (n, d) ensemble.

    method: 'auto' picks the trace specialization for cycles C3..C6 (float
    mode), the quotient-contraction route otherwise; 'generic' forces the
    latter; 'enumerate' forces the literal backtracking oracle.
    """
    active = h.non_isolated()
    if h.num_edges == 0:
        raise ShapeUnsupported("empty shapes have no factor; the constant is 1")
    if len(active) > GAMMA_MAX_SHAPE_VERTICES:
        raise TooLarge(f"factor shapes capped at {GAMMA_MAX_SHAPE_VERTICES} vertices")
    if field is None:
        field = EdgeField(g, d=d, p=p)

    shape = canonicalize(h)
    ms = shape_to_multishape(shape)
    a = aut_count(h)
    emult = shape.nedges

    if method == "auto":
        use_cycle = (not exact and is_cycle_graph(h) and 3 <= len(active) <= 6)
        method = "cycle" if use_cycle else "generic"

    if method == "cycle":
        if exact:
            raise ValueError("the trace route is float-only")
        if not is_cycle_graph(h) or not 3 <= len(active) <= 6:
            raise ShapeUnsupported("trace route applies to C3..C6 only")
        raw: float | QuadExt = _gamma_by_cycle_trace(g, len(active), field)
    elif method == "generic":
        val = chi_injective_sum(ms, field, exact=exact)
        raw = (field.scaled_sum_to_quadext(val, emult).scale(Fraction(1, a))
               if exact else val / a)
    elif method == "enumerate":
        if exact:
            w = field.weight_pow(1).tolist()
            raw = field.scaled_sum_to_quadext(
                chi_injective_sum_backtrack(ms, w), emult).scale(Fraction(1, a))
        else:
            raw = chi_injective_sum_backtrack(ms, field.chi_matrix().tolist()) / a
    else:
        raise ValueError(f"unknown method {method!r}")

    try:
        e_h, sigma = normalization_constants(h, g.n)
        return FactorValue(raw, e_h, sigma)
    except (ShapeUnsupported, ShapeTooLargeForEnsemble):
        return FactorValue(raw)
