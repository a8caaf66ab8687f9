"""Exact coefficient arithmetic for the factor algebra.

``RingElem`` represents a + b*q where q**2 = p*(1-p) and a, b are rational
functions in the formal variables (n, p).  Every coefficient produced by
the reduction identities lives in this ring: numerators are polynomials
over Q and denominators are monomials p^i (1-p)^j, which the operations
below preserve.  ``QuadExt`` is the corresponding number type a + b*sqrt(s)
used when evaluating at a concrete rational density.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .errors import DegenerateDensity, PoleAtEvaluation

Scalar = Union[int, Fraction]


class Poly:
    """Polynomial over Q in the two formal variables n and p."""

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[tuple[int, int], Fraction] | None = None):
        self.c = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @staticmethod
    def const(v: Scalar) -> "Poly":
        v = Fraction(v)
        return Poly({(0, 0): v} if v else {})

    @staticmethod
    def var_n() -> "Poly":
        return Poly({(1, 0): Fraction(1)})

    @staticmethod
    def var_p() -> "Poly":
        return Poly({(0, 1): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.c

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Fraction(0)) - v
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({k: -v for k, v in self.c.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), v1 in self.c.items():
            for (i2, j2), v2 in other.c.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return Poly(out)

    def scale(self, v: Scalar) -> "Poly":
        v = Fraction(v)
        return Poly({k: c * v for k, c in self.c.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def divisible_by_p(self) -> bool:
        return bool(self.c) and all(j >= 1 for (_, j) in self.c)

    def div_p(self) -> "Poly":
        return Poly({(i, j - 1): v for (i, j), v in self.c.items()})

    def divisible_by_1mp(self) -> bool:
        if not self.c:
            return False
        by_i: dict[int, Fraction] = {}
        for (i, j), v in self.c.items():
            by_i[i] = by_i.get(i, Fraction(0)) + v
        return all(v == 0 for v in by_i.values())

    def div_1mp(self) -> "Poly":
        # synthetic division by (p - 1), negated: self = (1-p) * result
        by_i: dict[int, dict[int, Fraction]] = {}
        maxj = 0
        for (i, j), v in self.c.items():
            by_i.setdefault(i, {})[j] = v
            maxj = max(maxj, j)
        out: dict[tuple[int, int], Fraction] = {}
        for i, col in by_i.items():
            q = Fraction(0)
            for j in range(maxj, 0, -1):
                q = col.get(j, Fraction(0)) + q
                if q:
                    out[(i, j - 1)] = -q
        return Poly(out)

    def eval(self, n: Fraction, p: Fraction) -> Fraction:
        total = Fraction(0)
        for (i, j), v in self.c.items():
            total += v * n**i * p**j
        return total

    def __repr__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for (i, j) in sorted(self.c, reverse=True):
            v = self.c[(i, j)]
            term = str(v)
            if i:
                term += f"*n^{i}" if i > 1 else "*n"
            if j:
                term += f"*p^{j}" if j > 1 else "*p"
            parts.append(term)
        return " + ".join(parts)


def binomial_in_n(offset: int, k: int) -> Poly:
    """C(n - offset, k) as a polynomial in the formal variable n."""
    if k < 0:
        return Poly.const(0)
    out = Poly.const(Fraction(1, math.factorial(k)))
    for t in range(k):
        out = out * (Poly.var_n() - Poly.const(offset + t))
    return out


class RatPoly:
    """num / (p^i (1-p)^j), normalized so num has no p or (1-p) factor."""

    __slots__ = ("num", "i", "j")

    def __init__(self, num: Poly, i: int = 0, j: int = 0):
        if num.is_zero():
            i = j = 0
        else:
            while i > 0 and num.divisible_by_p():
                num = num.div_p()
                i -= 1
            while j > 0 and num.divisible_by_1mp():
                num = num.div_1mp()
                j -= 1
        self.num = num
        self.i = i
        self.j = j

    @staticmethod
    def const(v: Scalar) -> "RatPoly":
        return RatPoly(Poly.const(v))

    @staticmethod
    def from_poly(p: Poly) -> "RatPoly":
        return RatPoly(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RatPoly") -> "RatPoly":
        i = max(self.i, other.i)
        j = max(self.j, other.j)
        a = self.num * _den_poly(i - self.i, j - self.j)
        b = other.num * _den_poly(i - other.i, j - other.j)
        return RatPoly(a + b, i, j)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __neg__(self) -> "RatPoly":
        return RatPoly(-self.num, self.i, self.j)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        return RatPoly(self.num * other.num, self.i + other.i, self.j + other.j)

    def scale(self, v: Scalar) -> "RatPoly":
        return RatPoly(self.num.scale(v), self.i, self.j)

    def div_s(self, k: int = 1) -> "RatPoly":
        """Divide by (p(1-p))^k."""
        return RatPoly(self.num, self.i + k, self.j + k)

    def mul_s(self, k: int = 1) -> "RatPoly":
        return RatPoly(self.num * _den_poly(k, k), self.i, self.j)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatPoly) and self.num == other.num
                and self.i == other.i and self.j == other.j)

    def __hash__(self):
        return hash((self.num, self.i, self.j))

    def eval(self, n: Fraction, p: Fraction) -> Fraction:
        den = p**self.i * (1 - p) ** self.j
        if den == 0:
            raise PoleAtEvaluation(f"denominator p^{self.i}(1-p)^{self.j} vanishes at p={p}")
        return self.num.eval(n, p) / den

    def __repr__(self) -> str:
        if self.i == 0 and self.j == 0:
            return repr(self.num)
        den = []
        if self.i:
            den.append(f"p^{self.i}" if self.i > 1 else "p")
        if self.j:
            den.append(f"(1-p)^{self.j}" if self.j > 1 else "(1-p)")
        return f"({self.num!r}) / ({'*'.join(den)})"


def _den_poly(i: int, j: int) -> Poly:
    out = Poly.const(1)
    for _ in range(i):
        out = out * Poly.var_p()
    one_m_p = Poly.const(1) - Poly.var_p()
    for _ in range(j):
        out = out * one_m_p
    return out


_S_POLY = Poly.var_p() - Poly.var_p() * Poly.var_p()  # s = p(1-p) = q^2


class RingElem:
    """a + b*q with a, b rational functions in (n, p) and q^2 = p(1-p)."""

    __slots__ = ("a", "b")

    def __init__(self, a: RatPoly, b: RatPoly | None = None):
        self.a = a
        self.b = b if b is not None else RatPoly.const(0)

    @staticmethod
    def const(v: Scalar) -> "RingElem":
        return RingElem(RatPoly.const(v))

    @staticmethod
    def from_poly(p: Poly) -> "RingElem":
        return RingElem(RatPoly.from_poly(p))

    @staticmethod
    def q_power(k: int) -> "RingElem":
        """q^k for k >= 0."""
        s_half = RatPoly(_den_poly(k // 2, k // 2))
        if k % 2 == 0:
            return RingElem(s_half)
        return RingElem(RatPoly.const(0), s_half)

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __add__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "RingElem":
        return RingElem(-self.a, -self.b)

    def __mul__(self, other: "RingElem") -> "RingElem":
        a = self.a * other.a + (self.b * other.b).mul_s()
        b = self.a * other.b + self.b * other.a
        return RingElem(a, b)

    def scale(self, v: Scalar) -> "RingElem":
        return RingElem(self.a.scale(v), self.b.scale(v))

    def __pow__(self, k: int) -> "RingElem":
        out = RingElem.const(1)
        for _ in range(k):
            out = out * self
        return out

    def mul_q(self) -> "RingElem":
        return RingElem(self.b.mul_s(), self.a)

    def div_q(self) -> "RingElem":
        # 1/q = q / s
        return RingElem(self.b, self.a.div_s())

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElem) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def eval_exact(self, n: int, p: Fraction) -> "QuadExt":
        if not 0 < p < 1:
            raise DegenerateDensity(f"density p={p} outside (0,1)")
        nf = Fraction(n)
        return QuadExt(self.a.eval(nf, p), self.b.eval(nf, p), p * (1 - p))

    def eval_float(self, n: int, p: Fraction) -> float:
        v = self.eval_exact(n, p)
        return v.to_float()

    def __repr__(self) -> str:
        if self.b.is_zero():
            return repr(self.a)
        if self.a.is_zero():
            return f"({self.b!r})*q"
        return f"{self.a!r} + ({self.b!r})*q"


class QuadExt:
    """Exact number a + b*sqrt(s) with a, b, s rational, s > 0."""

    __slots__ = ("a", "b", "s")

    def __init__(self, a: Scalar, b: Scalar = 0, s: Scalar = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.s = Fraction(s)

    def _check(self, other: "QuadExt") -> None:
        if self.b and other.b and self.s != other.s:
            raise ValueError("mixed quadratic extensions")

    def __add__(self, other: "QuadExt") -> "QuadExt":
        self._check(other)
        return QuadExt(self.a + other.a, self.b + other.b, self.s or other.s)

    def __sub__(self, other: "QuadExt") -> "QuadExt":
        self._check(other)
        return QuadExt(self.a - other.a, self.b - other.b, self.s or other.s)

    def __mul__(self, other: "QuadExt") -> "QuadExt":
        self._check(other)
        s = self.s or other.s
        return QuadExt(self.a * other.a + self.b * other.b * s,
                       self.a * other.b + self.b * other.a, s)

    def scale(self, v: Scalar) -> "QuadExt":
        return QuadExt(self.a * Fraction(v), self.b * Fraction(v), self.s)

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.s)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return (self.a == other.a and self.b == other.b
                and (self.b == 0 or self.s == other.s))

    def __hash__(self):
        return hash((self.a, self.b, self.s if self.b else 0))

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(float(self.s))

    def __repr__(self) -> str:
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a} + {self.b}*sqrt({self.s})"
