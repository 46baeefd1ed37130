"""Sparse integer polynomials and the generating-function identities built on them."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import repeat
from typing import Iterable, Mapping

from .errors import InvalidAperyError, PreconditionError


class Poly:
    """Polynomial in X with integer coefficients, stored as {exponent: coeff}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            if e < 0:
                raise PreconditionError(f"negative exponent {e}")
            if v:
                c[int(e)] = int(v)
        self._c = c

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> Poly:
        return cls({e: c})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def terms(self) -> list[tuple[int, int]]:
        return sorted(self._c.items())

    def exponents(self) -> list[int]:
        return sorted(self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def is_zero(self) -> bool:
        return not self._c

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self._c == other._c

    def __hash__(self):
        return hash(tuple(self.terms()))

    def __add__(self, other: Poly) -> Poly:
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return Poly(c)

    def __neg__(self) -> Poly:
        return Poly({e: -v for e, v in self._c.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return Poly(c)

    def substitute_power(self, d: int) -> Poly:
        """P(X^d)."""
        return Poly({e * d: v for e, v in self._c.items()})

    def divmod(self, divisor: Poly) -> tuple[Poly, Poly]:
        """Long division from the top; the leading coefficient of divisor must divide exactly."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        dd = divisor.degree()
        lead = divisor[dd]
        rem = dict(self._c)
        quot: dict[int, int] = {}
        heap = [-e for e in rem]
        heapq.heapify(heap)
        while heap:
            e = -heapq.heappop(heap)
            v = rem.get(e, 0)
            if not v:
                continue
            if e < dd:
                break
            if v % lead:
                break
            q = v // lead
            quot[e - dd] = quot.get(e - dd, 0) + q
            for de, dv in divisor._c.items():
                t = e - dd + de
                nv = rem.get(t, 0) - q * dv
                if nv:
                    if t not in rem or rem[t] == 0:
                        heapq.heappush(heap, -t)
                    rem[t] = nv
                else:
                    rem.pop(t, None)
        return Poly(quot), Poly(rem)

    def evaluate(self, x):
        return sum(v * x ** e for e, v in self._c.items())

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, v in self.terms():
            mono = "1" if e == 0 else ("X" if e == 1 else f"X^{e}")
            if e and abs(v) == 1:
                parts.append(("-" if v < 0 else "+") + mono)
            else:
                parts.append(f"{v:+d}" + ("" if e == 0 else "*" + mono))
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class HilbertSeries:
    """numerator / (1 - X^root_exponent)."""

    numerator: Poly
    root_exponent: int

    def __post_init__(self):
        if self.root_exponent < 1:
            raise PreconditionError("root exponent must be at least 1")

    def expand(self, bound: int) -> list[int]:
        out = [0] * (bound + 1)
        r = self.root_exponent
        for e, v in self.numerator.terms():
            for x in range(e, bound + 1, r):
                out[x] += v
        return out


def gen_poly(s: Iterable[int]) -> Poly:
    return Poly({x: 1 for x in s})


def direct_sum_certificate(a: Iterable[int], b: Iterable[int]) -> list[int] | None:
    """A (+) B when Gen(A)Gen(B) has 0/1 coefficients, else None."""
    prod = gen_poly(a) * gen_poly(b)
    if any(v != 1 for v in prod.coeffs.values()):
        return None
    return prod.exponents()


def gap_polynomial(apery: Iterable[int], r: int) -> Poly:
    apery = sorted(set(apery))
    if r < 1:
        raise PreconditionError("r must be positive")
    if len(apery) != r or len({x % r for x in apery}) != r:
        raise InvalidAperyError(f"set of size {len(apery)} does not hit every residue mod {r} once")
    # (sum_{e<r} X^e - Gen(Ap)) / (1 - X^r): each w in Ap contributes w - r, w - 2r, ... down to 0
    return Poly({w - j * r: 1 for w in apery for j in range(1, w // r + 1)})


def power_sums_from_gaps(gaps: Poly, k_max: int) -> list[int]:
    if any(v != 1 for v in gaps.coeffs.values()):
        raise PreconditionError("gap polynomial must have 0/1 coefficients")
    xs = gaps.exponents()
    return [len(xs) if k == 0 else sum(map(pow, xs, repeat(k))) for k in range(k_max + 1)]


def mean(s: Iterable[int]) -> Fraction:
    s = list(s)
    if not s:
        raise PreconditionError("mean of an empty set")
    return Fraction(sum(s), len(s))
