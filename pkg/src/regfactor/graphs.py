"""Simple graphs, multigraph overlays, canonical forms and subgraph counts.

Everything here is exact integer/rational combinatorics on small labeled
graphs: canonical labeling by exhaustive permutation search, automorphism
counting, injective-embedding subgraph counts, and the overlay bookkeeping
(singleton edges, equality classification) that the moment computations
rest on.  All objects are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import HypothesisViolation, TooLarge

CANON_MAX_VERTICES = 10


class Graph:
    """Simple labeled undirected graph on vertices {0, ..., n-1}.

    Edges are stored once in (min, max) order; self-loops are rejected.
    """

    __slots__ = ("n", "edges", "_adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n <= 0:
            raise ValueError("vertex count must be positive")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges = tuple(sorted(norm))
        self._adj: tuple[frozenset[int], ...] | None = None
        self._edge_set: frozenset[tuple[int, int]] | None = None

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def adj(self) -> tuple[frozenset[int], ...]:
        if self._adj is None:
            sets: list[set[int]] = [set() for _ in range(self.n)]
            for u, v in self.edges:
                sets[u].add(v)
                sets[v].add(u)
            self._adj = tuple(frozenset(s) for s in sets)
        return self._adj

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        if self._edge_set is None:
            self._edge_set = frozenset(self.edges)
        return self._edge_set

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(len(a) for a in self.adj))

    def is_regular(self, d: int) -> bool:
        return all(len(a) == d for a in self.adj)

    def non_isolated(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.adj[v])

    def complement(self) -> "Graph":
        edges = [(u, v) for u, v in combinations(range(self.n), 2)
                 if (u, v) not in self.edge_set]
        return Graph(self.n, edges)

    def relabel(self, mapping: Sequence[int], n: int | None = None) -> "Graph":
        """Image under vertex map ``v -> mapping[v]`` (must stay injective)."""
        return Graph(n if n is not None else self.n,
                     [(mapping[u], mapping[v]) for u, v in self.edges])

    def adjacency_matrix(self, dtype=np.float64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges:
            a[u, v] = 1
            a[v, u] = 1
        return a

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"


class Multigraph:
    """Undirected multigraph: unordered pair -> multiplicity >= 1."""

    __slots__ = ("n", "mult")

    def __init__(self, n: int, mult: dict[tuple[int, int], int]):
        if n <= 0:
            raise ValueError("vertex count must be positive")
        norm: dict[tuple[int, int], int] = {}
        for (u, v), m in mult.items():
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if m <= 0:
                raise ValueError("multiplicities must be >= 1")
            key = (u, v) if u < v else (v, u)
            norm[key] = norm.get(key, 0) + m
        self.n = n
        self.mult = dict(sorted(norm.items()))

    @property
    def e_sing(self) -> frozenset[tuple[int, int]]:
        """Edges of multiplicity exactly 1."""
        return frozenset(e for e, m in self.mult.items() if m == 1)

    def num_edges(self, with_multiplicity: bool = True) -> int:
        return sum(self.mult.values()) if with_multiplicity else len(self.mult)

    def active_vertices(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for u, v in self.mult:
            seen.add(u)
            seen.add(v)
        return tuple(sorted(seen))

    def support(self) -> Graph:
        return Graph(self.n, list(self.mult))

    def components(self) -> list[tuple[int, ...]]:
        """Connected components of the support, active vertices only."""
        adj: dict[int, set[int]] = {}
        for u, v in self.mult:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        seen: set[int] = set()
        comps = []
        for start in sorted(adj):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        return comps

    def __eq__(self, other) -> bool:
        return (isinstance(other, Multigraph) and self.n == other.n
                and self.mult == other.mult)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.mult.items())))

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, mult={self.mult})"


class CanonicalShape(NamedTuple):
    """Canonical edge list of an isolated-vertex-free graph."""

    nverts: int
    edges: tuple[tuple[int, int], ...]

    @property
    def nedges(self) -> int:
        return len(self.edges)

    def graph(self) -> Graph:
        return Graph(max(self.nverts, 1), self.edges)


# ---------------------------------------------------------------------------
# connectivity / structure helpers


def connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[tuple[int, ...]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return [tuple(sorted(g)) for g in groups.values()]


def is_connected(g: Graph) -> bool:
    active = g.non_isolated()
    if not active:
        return False
    comps = [c for c in connected_components(g.n, g.edges) if len(c) > 1]
    return len(comps) == 1 and len(comps[0]) == len(active)


def min_degree(g: Graph) -> int:
    active = g.non_isolated()
    if not active:
        return 0
    return min(g.degree(v) for v in active)


def is_cycle_graph(g: Graph) -> bool:
    active = g.non_isolated()
    return (len(active) >= 3 and is_connected(g)
            and all(g.degree(v) == 2 for v in active))


def is_star(g: Graph) -> bool:
    """K_{1,s} with s >= 1 leaves (includes a single edge)."""
    active = g.non_isolated()
    k = len(active)
    return (k >= 2 and is_connected(g) and g.num_edges == k - 1
            and max(g.degree(v) for v in active) == k - 1)


# ---------------------------------------------------------------------------
# canonical labeling and automorphisms

# Slot tables for the lexicographic edge order (0,1),(0,2),...,(1,2),...:
# slot i more significant than slot j for i < j, so the canonical labeling
# maximizes the packed bitmask, which minimizes the sorted edge list.


@lru_cache(maxsize=32)
def _lex_slot_bits(k: int) -> list[list[int]]:
    nslots = k * (k - 1) // 2
    table = [[0] * k for _ in range(k)]
    s = 0
    for u in range(k):
        for v in range(u + 1, k):
            bit = 1 << (nslots - 1 - s)
            table[u][v] = bit
            table[v][u] = bit
            s += 1
    return table


@lru_cache(maxsize=32)
def _slot_pairs(k: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(k) for v in range(u + 1, k)]


def _pack_compact(edges: Sequence[tuple[int, int]]) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Relabel the non-isolated vertices onto 0..k-1 preserving order."""
    verts = sorted({v for e in edges for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    return len(verts), tuple(sorted((remap[u], remap[v]) if remap[u] < remap[v]
                                    else (remap[v], remap[u]) for u, v in edges))


@lru_cache(maxsize=200_000)
def _canon_edges(k: int, edges: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    if k == 0:
        return ()
    slot = _lex_slot_bits(k)
    best = -1
    for perm in permutations(range(k)):
        acc = 0
        for u, v in edges:
            acc |= slot[perm[u]][perm[v]]
        if acc > best:
            best = acc
    pairs = _slot_pairs(k)
    nslots = len(pairs)
    return tuple(pairs[i] for i in range(nslots) if best >> (nslots - 1 - i) & 1)


def canonicalize(g: Graph) -> CanonicalShape:
    """Canonical shape of ``g`` restricted to its non-isolated vertices.

    Exhaustive permutation minimization: the output edge list is the
    lexicographically least one over all relabelings, so two graphs get
    equal shapes exactly when they are isomorphic.
    """
    k, edges = _pack_compact(g.edges)
    if k > CANON_MAX_VERTICES:
        raise TooLarge(f"{k} non-isolated vertices exceeds bound {CANON_MAX_VERTICES}")
    return CanonicalShape(k, _canon_edges(k, edges))


def shape_of(g: Graph) -> CanonicalShape:
    return canonicalize(g)


def _refine_colors(k: int, adj: list[set[int]]) -> list[int]:
    """1-WL color refinement; returns stable vertex colors."""
    colors = [len(adj[v]) for v in range(k)]
    while True:
        sig = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(k)]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[s] for s in sig]
        if new == colors:
            return colors
        colors = new


@lru_cache(maxsize=200_000)
def _aut_count_edges(k: int, edges: tuple[tuple[int, int], ...]) -> int:
    if k == 0:
        return 1
    adj = [set() for _ in range(k)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    colors = _refine_colors(k, adj)
    classes: dict[int, list[int]] = {}
    for v in range(k):
        classes.setdefault(colors[v], []).append(v)
    class_list = sorted(classes.values())

    # Automorphisms permute vertices within WL color classes only.
    image = [-1] * k
    used = [False] * k
    count = 0

    def backtrack(ci: int, pos: int) -> None:
        nonlocal count
        if ci == len(class_list):
            count += 1
            return
        cls = class_list[ci]
        if pos == len(cls):
            backtrack(ci + 1, 0)
            return
        v = cls[pos]
        for w in cls:
            if used[w]:
                continue
            ok = True
            for u in adj[v]:
                if image[u] != -1 and image[u] not in adj[w]:
                    ok = False
                    break
            if ok:
                # mapped non-neighbors must stay non-neighbors
                for u in range(k):
                    if image[u] != -1 and u not in adj[v] and image[u] in adj[w]:
                        ok = False
                        break
            if ok:
                image[v] = w
                used[w] = True
                backtrack(ci, pos + 1)
                image[v] = -1
                used[w] = False

    backtrack(0, 0)
    return count


def aut_count(g: Graph) -> int:
    """|Aut(g)| over the non-isolated vertices of g."""
    active = g.non_isolated()
    if len(active) != g.n and any(True for _ in g.edges):
        # automorphisms are counted on the isolated-vertex-free core
        pass
    k, edges = _pack_compact(g.edges)
    if k > CANON_MAX_VERTICES:
        raise TooLarge(f"{k} non-isolated vertices exceeds bound {CANON_MAX_VERTICES}")
    if k == 0:
        return 1
    return _aut_count_edges(k, edges)


# ---------------------------------------------------------------------------
# subgraph counting


def _embedding_order(f: Graph) -> list[tuple[int, int]]:
    """Order the vertices of f so every vertex after the first of its
    component has a neighbor among its predecessors.

    Returns a list of (vertex, anchor) with anchor = -1 for component roots.
    """
    active = list(f.non_isolated())
    placed: set[int] = set()
    order: list[tuple[int, int]] = []
    while len(order) < len(active):
        root = next(v for v in active if v not in placed)
        order.append((root, -1))
        placed.add(root)
        grew = True
        while grew:
            grew = False
            for v in active:
                if v in placed:
                    continue
                anchor = next((u for u in f.adj[v] if u in placed), None)
                if anchor is not None:
                    order.append((v, anchor))
                    placed.add(v)
                    grew = True
    return order


def count_injective_embeddings(h: Graph, f: Graph) -> int:
    """Number of injective maps of f's non-isolated vertices into h that
    send every edge of f to an edge of h."""
    order = _embedding_order(f)
    if not order:
        return 1
    k = len(order)
    fverts = [v for v, _ in order]
    pos = {v: i for i, v in enumerate(fverts)}
    # for each step, the earlier-placed f-neighbors to check against
    checks: list[list[int]] = []
    for i, (v, _) in enumerate(order):
        checks.append([pos[u] for u in f.adj[v] if u in pos and pos[u] < i])

    hadj = h.adj
    image = [0] * k
    total = 0

    def backtrack(i: int, used: int) -> None:
        nonlocal total
        if i == k:
            total += 1
            return
        req = checks[i]
        if req:
            candidates = hadj[image[req[0]]]
        else:
            candidates = range(h.n)
        for x in candidates:
            if used >> x & 1:
                continue
            ok = True
            for j in req[1:] if req else ():
                if x not in hadj[image[j]]:
                    ok = False
                    break
            if ok:
                image[i] = x
                backtrack(i + 1, used | (1 << x))

    backtrack(0, 0)
    return total


def count_subgraphs(h: Graph, f: Graph) -> int:
    """N(h, f): distinct (not necessarily induced) subgraphs of h
    isomorphic to f, computed as injective embeddings / aut(f)."""
    if f.num_edges == 0:
        return 1 if len(f.non_isolated()) == 0 else 0
    k = len(f.non_isolated())
    if not is_connected(f) and k > 8:
        raise TooLarge("disconnected pattern graphs supported up to 8 vertices")
    emb = count_injective_embeddings(h, f)
    a = aut_count(f)
    if emb % a:
        raise AssertionError("embedding count not divisible by aut (bug)")
    return emb // a


# ---------------------------------------------------------------------------
# overlays (multigraph superposition of embedded copies)


def overlay(copies: Sequence[Graph | Multigraph], n: int | None = None) -> Multigraph:
    """Superimpose embedded copies over a common label universe, summing
    edge multiplicities."""
    if not copies:
        raise ValueError("need at least one copy")
    size = n if n is not None else max(c.n for c in copies)
    mult: dict[tuple[int, int], int] = {}
    for c in copies:
        if isinstance(c, Multigraph):
            items = c.mult.items()
        else:
            items = (((u, v), 1) for u, v in c.edges)
        for (u, v), m in items:
            key = (u, v) if u < v else (v, u)
            mult[key] = mult.get(key, 0) + m
    return Multigraph(size, mult)


@dataclass(frozen=True)
class OverlayReport:
    lhs: Fraction              # v(G) - |E_sing| / 2
    rhs: Fraction              # sum of v(H_i) / 2
    equality: bool
    component_tags: tuple[str, ...]


def _strip_pendant_doubled(mult: dict[tuple[int, int], int]) -> tuple[dict[tuple[int, int], int], bool]:
    """Iteratively remove support-leaves attached by a multiplicity-2 edge."""
    mult = dict(mult)
    stripped = False
    while True:
        deg: dict[int, list[tuple[int, int]]] = {}
        for e in mult:
            deg.setdefault(e[0], []).append(e)
            deg.setdefault(e[1], []).append(e)
        leaf = None
        for v, inc in deg.items():
            if len(inc) == 1 and mult[inc[0]] == 2:
                leaf = inc[0]
                break
        if leaf is None:
            return mult, stripped
        del mult[leaf]
        stripped = True


def _is_cycle_mult(mult: dict[tuple[int, int], int], m_required: int) -> bool:
    if not mult or any(m != m_required for m in mult.values()):
        return False
    verts: dict[int, int] = {}
    for u, v in mult:
        verts[u] = verts.get(u, 0) + 1
        verts[v] = verts.get(v, 0) + 1
    if any(c != 2 for c in verts.values()) or len(mult) != len(verts):
        return False
    g = Graph(max(verts) + 1, list(mult))
    return is_connected(g)


def _classify_component(mult: dict[tuple[int, int], int], mode: str) -> str:
    if _is_cycle_mult(mult, 1):
        return "isolated-single-cycle"
    if mode == "3.2":
        if all(m == 2 for m in mult.values()):
            return "perfect-double-overlay"
        raise AssertionError("equality component violates the 3.2 dichotomy")
    core, stripped = _strip_pendant_doubled(mult)
    if not stripped:
        if _is_cycle_mult(mult, 2):
            return "perfect-double-overlay"
        raise AssertionError("equality component violates the 5.1 classification")
    if _is_cycle_mult(core, 1) or _is_cycle_mult(core, 2):
        return "cycle-with-doubled-pendant-trees"
    raise AssertionError("equality component violates the 5.1 classification")


def _part_is_doubled_edge(part: Multigraph) -> bool:
    return len(part.mult) == 1 and next(iter(part.mult.values())) == 2


def overlay_classify(parts: Sequence[Graph | Multigraph], mode: str = "3.2") -> OverlayReport:
    """Overlay the embedded parts and report the singleton-edge inequality.

    mode "3.2": every part must be a connected simple graph of minimum
    degree >= 2.  mode "5.1": every part must be a simple cycle or a
    doubled edge, and every component of the overlay must contain at
    least one cycle part.
    """
    if mode not in ("3.2", "5.1"):
        raise ValueError("mode must be '3.2' or '5.1'")
    if not parts:
        raise ValueError("need at least one part")

    part_sizes: list[int] = []
    part_verts: list[set[int]] = []
    part_is_cycle: list[bool] = []
    for p in parts:
        if isinstance(p, Multigraph):
            if not _part_is_doubled_edge(p):
                raise HypothesisViolation("multigraph parts must be doubled edges")
            if mode == "3.2":
                raise HypothesisViolation("doubled-edge parts require mode 5.1")
            verts = set(p.active_vertices())
            part_is_cycle.append(False)
        else:
            if not is_connected(p):
                raise HypothesisViolation("parts must be connected")
            if mode == "3.2":
                if min_degree(p) < 2:
                    raise HypothesisViolation("mode 3.2 requires minimum degree 2")
            else:
                if not is_cycle_graph(p):
                    raise HypothesisViolation("mode 5.1 parts must be cycles or doubled edges")
            verts = set(p.non_isolated())
            part_is_cycle.append(isinstance(p, Graph) and is_cycle_graph(p))
        part_verts.append(verts)
        part_sizes.append(len(verts))

    ov = overlay(parts)
    comps = ov.components()
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci

    if mode == "5.1":
        has_cycle = [False] * len(comps)
        for verts, isc in zip(part_verts, part_is_cycle):
            if isc:
                has_cycle[comp_of[next(iter(verts))]] = True
        if not all(has_cycle):
            raise HypothesisViolation("a component has no participating cycle")

    comp_mult: list[dict[tuple[int, int], int]] = [{} for _ in comps]
    for e, m in ov.mult.items():
        comp_mult[comp_of[e[0]]][e] = m
    comp_rhs = [Fraction(0)] * len(comps)
    for verts, size in zip(part_verts, part_sizes):
        comp_rhs[comp_of[next(iter(verts))]] += Fraction(size, 2)

    tags = []
    lhs = Fraction(0)
    rhs = Fraction(0)
    for ci, comp in enumerate(comps):
        sing = sum(1 for m in comp_mult[ci].values() if m == 1)
        c_lhs = Fraction(len(comp)) - Fraction(sing, 2)
        lhs += c_lhs
        rhs += comp_rhs[ci]
        if c_lhs == comp_rhs[ci]:
            tags.append(_classify_component(comp_mult[ci], mode))
        else:
            tags.append("strict-inequality")
    return OverlayReport(lhs=lhs, rhs=rhs, equality=(lhs == rhs),
                         component_tags=tuple(tags))


# ---------------------------------------------------------------------------
# canonical multigraph shapes (keys for walk tables and power reduction)

# A MultiShape is (nverts, ((u, v, mult), ...)) over vertices 0..nverts-1
# with no isolated vertices, canonical under vertex relabeling.
MultiShape = tuple[int, tuple[tuple[int, int, int], ...]]


@lru_cache(maxsize=200_000)
def _canon_multi(k: int, items: tuple[tuple[int, int, int], ...]) -> MultiShape:
    best = None
    for perm in permutations(range(k)):
        cand = tuple(sorted(
            (perm[u], perm[v], m) if perm[u] < perm[v] else (perm[v], perm[u], m)
            for u, v, m in items))
        if best is None or cand < best:
            best = cand
    return (k, best)


def multishape(edges_with_mult: Iterable[tuple[int, int, int]] | Multigraph | Graph) -> MultiShape:
    """Canonical multigraph shape of the given edge/multiplicity data,
    restricted to non-isolated vertices."""
    if isinstance(edges_with_mult, Multigraph):
        items = [(u, v, m) for (u, v), m in edges_with_mult.mult.items()]
    elif isinstance(edges_with_mult, Graph):
        items = [(u, v, 1) for u, v in edges_with_mult.edges]
    else:
        items = list(edges_with_mult)
    merged: dict[tuple[int, int], int] = {}
    for u, v, m in items:
        if u == v:
            raise ValueError("self-loops not allowed in shapes")
        key = (u, v) if u < v else (v, u)
        merged[key] = merged.get(key, 0) + m
    verts = sorted({x for e in merged for x in e})
    if len(verts) > CANON_MAX_VERTICES:
        raise TooLarge(f"{len(verts)} vertices exceeds bound {CANON_MAX_VERTICES}")
    remap = {v: i for i, v in enumerate(verts)}
    packed = tuple(sorted((remap[u], remap[v], m) for (u, v), m in merged.items()))
    return _canon_multi(len(verts), packed)


def shape_to_multishape(shape: CanonicalShape) -> MultiShape:
    return (shape.nverts, tuple((u, v, 1) for u, v in shape.edges))


def multishape_is_simple(ms: MultiShape) -> bool:
    return all(m == 1 for _, _, m in ms[1])


def multishape_to_shape(ms: MultiShape) -> CanonicalShape:
    if not multishape_is_simple(ms):
        raise ValueError("shape has edge multiplicities above 1")
    return canonicalize(Graph(max(ms[0], 1), [(u, v) for u, v, _ in ms[1]]))


def multishape_total_mult(ms: MultiShape) -> int:
    return sum(m for _, _, m in ms[1])


@lru_cache(maxsize=100_000)
def multishape_aut(ms: MultiShape) -> int:
    """Vertex permutations preserving the multiplicity function."""
    k, items = ms
    if k == 0:
        return 1
    ref = {(u, v): m for u, v, m in items}
    count = 0
    for perm in permutations(range(k)):
        ok = True
        for u, v, m in items:
            a, b = perm[u], perm[v]
            if ref.get((a, b) if a < b else (b, a)) != m:
                ok = False
                break
        if ok:
            count += 1
    return count


# ---------------------------------------------------------------------------
# stock shapes and the edge-list text format


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Graph:
    if k < 2:
        raise ValueError("paths need at least 2 vertices")
    return Graph(k, [(i, i + 1) for i in range(k - 1)])


def complete_graph(k: int) -> Graph:
    return Graph(k, list(combinations(range(k), 2)))


def star_graph(s: int) -> Graph:
    """Star with s leaves, i.e. K_{1,s}."""
    if s < 1:
        raise ValueError("stars need at least one leaf")
    return Graph(s + 1, [(0, i) for i in range(1, s + 1)])


def shape_from_name(name: str) -> Graph:
    """Parse shape names: C<k> cycle, P<k> path on k vertices, K<k>
    complete, S<s> star with s leaves."""
    name = name.strip()
    if len(name) < 2 or name[0] not in "CPKS":
        raise ValueError(f"unrecognized shape name {name!r}")
    k = int(name[1:])
    if name[0] == "C":
        return cycle_graph(k)
    if name[0] == "P":
        return path_graph(k)
    if name[0] == "K":
        return complete_graph(k)
    return star_graph(k)


def graph_to_text(g: Graph) -> str:
    lines = [f"{g.n} {g.num_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def multigraph_to_text(g: Multigraph) -> str:
    lines = [f"{g.n} {len(g.mult)}"]
    lines += [f"{u} {v} {m}" for (u, v), m in g.mult.items()]
    return "\n".join(lines) + "\n"


def parse_graph_block(lines: list[str], start: int = 0) -> tuple[Graph | Multigraph, int]:
    """Parse one edge-list record; returns (graph, next line index).

    Records with a third column on edge lines parse as multigraphs.
    """
    header = lines[start].split()
    n, m = int(header[0]), int(header[1])
    simple: list[tuple[int, int]] = []
    mult: dict[tuple[int, int], int] = {}
    is_multi = False
    for i in range(m):
        parts = lines[start + 1 + i].split()
        if len(parts) == 3:
            is_multi = True
            mult[(int(parts[0]), int(parts[1]))] = int(parts[2])
        else:
            simple.append((int(parts[0]), int(parts[1])))
    if is_multi:
        if simple:
            raise ValueError("mixed simple/multiplicity edge lines in one record")
        return Multigraph(n, mult), start + 1 + m
    return Graph(n, simple), start + 1 + m


def parse_graph_text(text: str) -> Graph | Multigraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    g, _ = parse_graph_block(lines)
    return g


def parse_graph_stream(text: str) -> list[Graph | Multigraph]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    out: list[Graph | Multigraph] = []
    idx = 0
    while idx < len(lines):
        g, idx = parse_graph_block(lines, idx)
        out.append(g)
    return out
