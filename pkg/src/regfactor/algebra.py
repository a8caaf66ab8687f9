"""Symbolic algebra of graph factors.

A ``FactorExpr`` is a polynomial in graph factors: a map from monomials
(sorted tuples of canonical shapes, each standing for the factor of that
shape) to coefficients in the (n, p, q) ring, plus a constant term.  The
factor of the empty shape is 1 and lives in the constant.

The reduction engine works on injective-embedding sums rather than
unlabeled-copy sums (they differ by automorphism factors, converted at
the boundary) and repeatedly applies three rewrite rules:

* power     -- chi_e^2 = 1 - (2p-1) chi_e / q, iterated for higher edge
               multiplicities; valid on every graph;
* pendant   -- a degree-1 vertex is summed out using
               sum_{w != u} chi_(u,w) = 0, valid on d-regular graphs
               with p = d/(n-1) only;
* split     -- a disconnected shape is rewritten as the product of its
               component factors minus the overlay sums in which the
               components share vertices; valid on every graph.

Each rule strictly decreases the multiset of (vertex count, total edge
multiplicity) pairs over a term's factors, so the rewrite terminates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .errors import TooLarge
from .graphs import (
    CanonicalShape,
    Graph,
    Multigraph,
    MultiShape,
    aut_count,
    canonicalize,
    connected_components,
    is_connected,
    multishape,
    multishape_aut,
    multishape_is_simple,
    multishape_to_shape,
    shape_to_multishape,
)
from .factors import EdgeField, gamma
from .ring import Poly, QuadExt, RatPoly, RingElem, binomial_in_n

Monomial = tuple[CanonicalShape, ...]
InjMonomial = tuple[MultiShape, ...]

EXPAND_MAX_EDGES = 20


# ---------------------------------------------------------------------------
# the public expression type


class FactorExpr:
    """Linear combination of graph-factor monomials plus a constant.

    A monomial of length one is a plain graph factor (its shape may be
    disconnected); longer monomials are products of factors and appear
    only through reduction of disconnected shapes.
    """

    __slots__ = ("terms", "constant")

    def __init__(self, terms: dict[Monomial, RingElem] | None = None,
                 constant: RingElem | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}
        self.constant = constant if constant is not None else RingElem.const(0)

    @staticmethod
    def zero() -> "FactorExpr":
        return FactorExpr()

    @staticmethod
    def of_shape(h: Graph | CanonicalShape, coeff: RingElem | None = None) -> "FactorExpr":
        shape = h if isinstance(h, CanonicalShape) else canonicalize(h)
        if shape.nedges == 0:
            return FactorExpr(constant=coeff if coeff is not None else RingElem.const(1))
        return FactorExpr({(shape,): coeff if coeff is not None else RingElem.const(1)})

    def __add__(self, other: "FactorExpr") -> "FactorExpr":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return FactorExpr(terms, self.constant + other.constant)

    def __sub__(self, other: "FactorExpr") -> "FactorExpr":
        return self + other.scale_ring(RingElem.const(-1))

    def scale_ring(self, c: RingElem) -> "FactorExpr":
        return FactorExpr({k: v * c for k, v in self.terms.items()},
                          self.constant * c)

    def shapes(self) -> set[CanonicalShape]:
        return {s for mono in self.terms for s in mono}

    def is_reduced(self) -> bool:
        """True when every shape in every monomial is connected with
        minimum degree >= 2."""
        for s in self.shapes():
            g = s.graph()
            if not is_connected(g):
                return False
            if min(g.degree(v) for v in g.non_isolated()) < 2:
                return False
        return True

    def __repr__(self) -> str:
        return f"FactorExpr({len(self.terms)} terms + constant)"


def expr_to_text(e: FactorExpr) -> str:
    """Stable text form: one `coeff_a | coeff_b | edges` line per term
    (product factors joined by ' * '), then the constant line."""
    lines = []
    for mono in sorted(e.terms, key=lambda m: (len(m), m)):
        c = e.terms[mono]
        edges = " * ".join("".join(f"({u},{v})" for u, v in s.edges) for s in mono)
        lines.append(f"{c.a!r} | {c.b!r} | {edges}")
    c = e.constant
    lines.append(f"constant: {c.a!r} | {c.b!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# shape helpers


def _falling_factorial_poly(base: int, count: int) -> Poly:
    out = Poly.const(1)
    for t in range(count):
        out = out * (Poly.var_n() - Poly.const(base + t))
    return out


def _shape_without_edge(ms: MultiShape, idx: int) -> tuple[MultiShape | None, int]:
    """Drop edge ``idx`` entirely; returns (shape or None if empty, dropped
    vertex count)."""
    k, items = ms
    rest = items[:idx] + items[idx + 1:]
    if not rest:
        return None, k
    active = {x for u, v, _ in rest for x in (u, v)}
    return multishape(rest), k - len(active)


def _shape_with_mult(ms: MultiShape, idx: int, new_mult: int) -> MultiShape:
    k, items = ms
    u, v, _ = items[idx]
    rest = items[:idx] + ((u, v, new_mult),) + items[idx + 1:]
    return multishape(rest)


@lru_cache(maxsize=20_000)
def _components_of(ms: MultiShape) -> tuple[MultiShape, ...]:
    k, items = ms
    comps = connected_components(k, [(u, v) for u, v, _ in items])
    out = []
    for comp in comps:
        cs = set(comp)
        sub = [e for e in items if e[0] in cs]
        if sub:
            out.append(multishape(sub))
    return tuple(out)


@lru_cache(maxsize=20_000)
def _overlay_patterns(a: MultiShape, b: MultiShape) -> tuple[tuple[MultiShape, int], ...]:
    """Canonical overlays of shapes a and b under every nonempty partial
    identification of their vertex sets, with multiplicities."""
    ka, ia = a
    kb, ib = b
    out: dict[MultiShape, int] = {}
    for t in range(1, min(ka, kb) + 1):
        for avs in combinations(range(ka), t):
            for bvs in combinations(range(kb), t):
                for perm in permutations(bvs):
                    # b-vertex perm[i] is glued onto a-vertex avs[i]
                    remap = {}
                    nxt = ka
                    for i, bv in enumerate(perm):
                        remap[bv] = avs[i]
                    edges = list(ia)
                    for u, v, m in ib:
                        uu = remap.get(u)
                        if uu is None:
                            uu = remap[u] = nxt
                            nxt += 1
                        vv = remap.get(v)
                        if vv is None:
                            vv = remap[v] = nxt
                            nxt += 1
                        edges.append((uu, vv, m))
                    ms = multishape(edges)
                    out[ms] = out.get(ms, 0) + 1
                    for bv in perm:
                        del remap[bv]
    return tuple(sorted(out.items()))


def _pendant_vertex(ms: MultiShape) -> tuple[int, int] | None:
    """A vertex of support-degree 1 whose edge has multiplicity 1,
    returned as (vertex, neighbor)."""
    k, items = ms
    deg: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(k)}
    for e in items:
        deg[e[0]].append(e)
        deg[e[1]].append(e)
    for v in range(k):
        if len(deg[v]) == 1 and deg[v][0][2] == 1:
            e = deg[v][0]
            return v, e[1] if e[0] == v else e[0]
    return None


# ---------------------------------------------------------------------------
# the rewrite engine (injective-sum semantics)


_TWO_P_MINUS_1_OVER_Q = RingElem(
    RatPoly.const(0),
    RatPoly(Poly.var_p().scale(2) - Poly.const(1), 1, 1),  # (2p-1)/s, times q
)


class _InjExpr:
    """dict: monomial of multishapes -> RingElem, injective-sum semantics."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[InjMonomial, RingElem] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    def add_term(self, mono: InjMonomial, coeff: RingElem) -> None:
        if mono in self.terms:
            s = self.terms[mono] + coeff
            if s.is_zero():
                del self.terms[mono]
            else:
                self.terms[mono] = s
        elif not coeff.is_zero():
            self.terms[mono] = coeff


def _sorted_mono(shapes: tuple[MultiShape, ...]) -> InjMonomial:
    return tuple(sorted(shapes))


def _rewrite_power(mono: InjMonomial, fi: int, ei: int, coeff: RingElem,
                   out: _InjExpr) -> None:
    """chi^m = chi^(m-2) - (2p-1)/q * chi^(m-1) on edge ei of factor fi."""
    ms = mono[fi]
    rest = mono[:fi] + mono[fi + 1:]
    m = ms[1][ei][2]

    lower, dropped = (None, 0)
    if m == 2:
        lower, dropped = _shape_without_edge(ms, ei)
    else:
        lower = _shape_with_mult(ms, ei, m - 2)
    c1 = coeff
    if dropped or lower is None:
        base = lower[0] if lower is not None else 0
        c1 = c1 * RingElem.from_poly(
            _falling_factorial_poly(base, dropped if lower is not None else ms[0]))
    out.add_term(_sorted_mono(rest + ((lower,) if lower is not None else ())), c1)

    mid = _shape_with_mult(ms, ei, m - 1)
    out.add_term(_sorted_mono(rest + (mid,)),
                 coeff * _TWO_P_MINUS_1_OVER_Q.scale(-1))


def _rewrite_pendant(mono: InjMonomial, fi: int, pv: tuple[int, int],
                     coeff: RingElem, out: _InjExpr) -> None:
    """Sum out a degree-1 vertex; valid on d-regular graphs only."""
    ms = mono[fi]
    rest = mono[:fi] + mono[fi + 1:]
    k, items = ms
    v, u = pv
    if k == 2:
        return  # inj sum of a bare edge is 0 on regular graphs
    kept = tuple(e for e in items if v not in (e[0], e[1]))
    for x in range(k):
        if x in (u, v):
            continue
        new = multishape(kept + ((u, x, 1),))
        out.add_term(_sorted_mono(rest + (new,)), coeff.scale(-1))


def _rewrite_split(mono: InjMonomial, fi: int, coeff: RingElem,
                   out: _InjExpr) -> None:
    """inj(A ⊔ B) = inj(A) inj(B) - sum of glued overlays."""
    ms = mono[fi]
    rest = mono[:fi] + mono[fi + 1:]
    comps = _components_of(ms)
    first = comps[0]
    if len(comps) == 2:
        b = comps[1]
    else:
        # splice the remaining components into one shape on fresh labels
        edges = []
        off = 0
        for c in comps[1:]:
            edges.extend((u + off, v + off, m) for u, v, m in c[1])
            off += c[0]
        b = multishape(edges)
    out.add_term(_sorted_mono(rest + (first, b)), coeff)
    for ov, cnt in _overlay_patterns(first, b):
        out.add_term(_sorted_mono(rest + (ov,)), coeff.scale(-cnt))


def _reduce_inj(expr: _InjExpr, pendant: bool, split: bool,
                max_rounds: int = 100_000) -> _InjExpr:
    """Fixpoint of the selected rewrite rules (power is always applied)."""
    for _ in range(max_rounds):
        target = None
        for mono, coeff in expr.terms.items():
            for fi, ms in enumerate(mono):
                for ei, (_, _, m) in enumerate(ms[1]):
                    if m >= 2:
                        target = ("power", mono, fi, ei, coeff)
                        break
                if target:
                    break
                if pendant:
                    pv = _pendant_vertex(ms)
                    if pv is not None:
                        target = ("pendant", mono, fi, pv, coeff)
                        break
                if split and len(_components_of(ms)) > 1:
                    target = ("split", mono, fi, None, coeff)
                    break
            if target:
                break
        if target is None:
            return expr
        kind, mono, fi, info, coeff = target
        out = _InjExpr({k: v for k, v in expr.terms.items() if k != mono})
        if kind == "power":
            _rewrite_power(mono, fi, info, coeff, out)
        elif kind == "pendant":
            _rewrite_pendant(mono, fi, info, coeff, out)
        else:
            _rewrite_split(mono, fi, coeff, out)
        expr = out
    raise AssertionError("reduction failed to terminate")


# conversions between unlabeled-copy (gamma) and injective-sum semantics


def _factor_to_inj(e: FactorExpr) -> _InjExpr:
    out = _InjExpr()
    for mono, coeff in e.terms.items():
        c = coeff
        inj_mono = []
        for s in mono:
            c = c.scale(Fraction(1, aut_count(s.graph())))
            inj_mono.append(shape_to_multishape(s))
        out.add_term(_sorted_mono(tuple(inj_mono)), c)
    out.add_term((), e.constant)
    return out


def _inj_to_factor(e: _InjExpr) -> FactorExpr:
    terms: dict[Monomial, RingElem] = {}
    constant = RingElem.const(0)
    for mono, coeff in e.terms.items():
        if not mono:
            constant = constant + coeff
            continue
        c = coeff
        shapes = []
        for ms in mono:
            if not multishape_is_simple(ms):
                raise AssertionError("unreduced multiplicity left over (bug)")
            s = multishape_to_shape(ms)
            c = c.scale(multishape_aut(ms))
            shapes.append(s)
        key = tuple(sorted(shapes))
        terms[key] = terms[key] + c if key in terms else c
    out = FactorExpr(terms, constant)
    return out


# ---------------------------------------------------------------------------
# public reduction operations


def power_reduce(shape: Multigraph | MultiShape) -> FactorExpr:
    """Express the sum over embedded copies of a multigraph shape of the
    chi-power product as a FactorExpr over simple shapes."""
    ms = shape if isinstance(shape, tuple) else multishape(shape)
    if any(m > 6 for _, _, m in ms[1]):
        raise TooLarge("edge multiplicities capped at 6")
    start = _InjExpr({(ms,): RingElem.const(Fraction(1, multishape_aut(ms)))})
    return _inj_to_factor(_reduce_inj(start, pendant=False, split=False))


def reduce_disconnected(e: FactorExpr) -> FactorExpr:
    """Rewrite every disconnected shape via component products and overlay
    corrections; the result is equal as a function on all graphs."""
    return _inj_to_factor(_reduce_inj(_factor_to_inj(e), pendant=False, split=True))


def reduce_degree_one(e: FactorExpr) -> FactorExpr:
    """Sum out degree-1 vertices; equality holds on d-regular graphs."""
    return _inj_to_factor(_reduce_inj(_factor_to_inj(e), pendant=True, split=False))


def reduce_full(e: FactorExpr) -> FactorExpr:
    """Reduce until every factor shape is connected with min degree >= 2."""
    return _inj_to_factor(_reduce_inj(_factor_to_inj(e), pendant=True, split=True))


def gamma_expr(h: Graph) -> FactorExpr:
    """The factor of shape h as a one-term expression."""
    return FactorExpr.of_shape(h)


# ---------------------------------------------------------------------------
# exact expansion of subgraph counts


def expand_subgraph_count(h: Graph) -> FactorExpr:
    """Expand the subgraph count X_h into graph factors.

    X_h = sum over subgraph classes S of
        p^(e(h)-e(S)) q^e(S) c_{S,h} d_{S,h} C(n-v(S), v(h)-v(S)) gamma_S
    with c_{S,h} = (v(h)-v(S))! aut(S)/aut(h) and d_{S,h} the number of
    S-subgraphs of h; the empty class contributes the constant term.
    The identity holds on every graph regardless of degree sequence.
    """
    active = h.non_isolated()
    if not active or not is_connected(h):
        raise ValueError("expansion needs a nonempty connected shape")
    if h.num_edges > EXPAND_MAX_EDGES:
        raise TooLarge(f"expansion capped at {EXPAND_MAX_EDGES} edges")
    vh = len(active)
    eh = h.num_edges
    aut_h = aut_count(h)

    classes: dict[CanonicalShape, int] = {}
    for r in range(1, eh + 1):
        for subset in combinations(h.edges, r):
            s = canonicalize(Graph(h.n, subset))
            classes[s] = classes.get(s, 0) + 1

    terms: dict[Monomial, RingElem] = {}
    for s, d_sh in classes.items():
        vs, es = s.nverts, s.nedges
        aut_s = aut_count(s.graph())
        c_sh = Fraction(math.factorial(vh - vs) * aut_s, aut_h)
        coeff = (RingElem.q_power(es)
                 * RingElem.from_poly(Poly.var_p()) ** (eh - es)
                 * RingElem.from_poly(binomial_in_n(vs, vh - vs))
                 ).scale(c_sh * d_sh)
        terms[(s,)] = coeff
    constant = (RingElem.from_poly(Poly.var_p()) ** eh
                * RingElem.from_poly(binomial_in_n(0, vh))
                ).scale(Fraction(math.factorial(vh), aut_h))
    return FactorExpr(terms, constant)


# ---------------------------------------------------------------------------
# evaluation


@lru_cache(maxsize=100_000)
def _eval_coeff(coeff: RingElem, n: int, p: Fraction) -> QuadExt:
    return coeff.eval_exact(n, p)


def evaluate(e: FactorExpr, g: Graph, n: int | None = None,
             d: int | None = None, p: Fraction | None = None,
             exact: bool = False, field: EdgeField | None = None) -> float | QuadExt:
    """Evaluate a FactorExpr on a concrete graph at density p = d/(n-1)
    (or an explicit p for arbitrary-degree graphs)."""
    if n is None:
        n = g.n
    if n != g.n:
        raise ValueError("formal n must match the graph's vertex count")
    if field is None:
        field = EdgeField(g, d=d, p=p)
    pval = field.p

    if exact:
        total: QuadExt = _eval_coeff(e.constant, n, pval)
        for mono, coeff in e.terms.items():
            prod = _eval_coeff(coeff, n, pval)
            for s in mono:
                gv = gamma(g, s.graph(), p=pval, method="generic",
                           exact=True, field=field).raw
                prod = prod * gv
            total = total + prod
        return total

    totalf = _eval_coeff(e.constant, n, pval).to_float()
    for mono, coeff in e.terms.items():
        prodf = _eval_coeff(coeff, n, pval).to_float()
        for s in mono:
            prodf *= gamma(g, s.graph(), p=pval, field=field).raw_float
        totalf += prodf
    return totalf
