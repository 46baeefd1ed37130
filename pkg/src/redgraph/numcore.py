"""Brute-force semigroup arithmetic computed straight from generators.

Everything here is deliberately independent of the reduction-graph engine so
it can serve as the reference that graph results are compared against.
Sets of small integers are handled as Python ints used as bitsets: bit ``x``
is set when ``x`` belongs to the set.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

from .errors import NotNumericalError, PreconditionError, ResourceError

MEMORY_CEILING = 1 << 28


@dataclass(frozen=True)
class GapData:
    gaps: tuple[int, ...]
    frobenius: int
    genus: int


def _gens(g: Iterable[int]) -> tuple[int, ...]:
    gens = tuple(sorted(set(int(x) for x in g)))
    if not gens:
        raise PreconditionError("generator set is empty")
    if gens[0] <= 0:
        raise PreconditionError(f"generators must be positive, got {gens[0]}")
    return gens


def gcd_set(g: Iterable[int]) -> int:
    return reduce(math.gcd, _gens(g))


def _require_numerical(gens):
    d = reduce(math.gcd, gens)
    if d != 1:
        raise NotNumericalError(f"gcd of {list(gens)} is {d}, not 1")


# -- bitset helpers ---------------------------------------------------------

def mask(bound: int) -> int:
    return (1 << (bound + 1)) - 1


def multiples_bits(step: int, bound: int) -> int:
    """Bitset of {0, step, 2*step, ...} up to bound."""
    if step == 0:
        return 1
    bits = 1
    shift = step
    m = mask(bound)
    while shift <= bound:
        bits |= (bits << shift) & m
        shift <<= 1
    return bits


def add_multiples(bits: int, step: int, bound: int) -> int:
    """Bitset of (bits + <step>) truncated at bound."""
    m = mask(bound)
    shift = step
    while shift <= bound:
        bits |= (bits << shift) & m
        shift <<= 1
    return bits & m


def closure_bits(gens: Iterable[int], bound: int) -> int:
    if bound + 1 > MEMORY_CEILING:
        raise ResourceError(f"bound {bound} exceeds memory ceiling {MEMORY_CEILING}")
    bits = 1
    for x in gens:
        if 0 < x <= bound:
            bits = add_multiples(bits, x, bound)
    return bits


def sumset_bits(a: int, b: int, bound: int) -> int:
    """Bitset of A + B truncated at bound, for finite bitsets A and B."""
    m = mask(bound)
    if bin(a).count("1") < bin(b).count("1"):
        a, b = b, a
    out = 0
    for x in elements_of(b):
        if x > bound:
            break
        out |= (a << x) & m
    return out


def bits_of(elements: Iterable[int], bound: int) -> int:
    out = 0
    for e in elements:
        if 0 <= e <= bound:
            out |= 1 << e
    return out


def _bit_string(bits: int, bound: int) -> str:
    """Bits 0..bound as a string of '0'/'1', lowest first (linear time, unlike repeated shifts)."""
    s = format(bits, "b")[::-1]
    return s[:bound + 1].ljust(bound + 1, "0")


def elements_of(bits: int) -> list[int]:
    s = format(bits, "b")[::-1]
    return [x for x, c in enumerate(s) if c == "1"]


# -- public oracle operations ----------------------------------------------

def membership_table(g: Iterable[int], bound: int) -> list[bool]:
    """Position x is True iff x is a nonnegative combination of g."""
    gens = _gens(g)
    if bound < 0:
        return []
    bits = closure_bits(gens, bound)
    return [c == "1" for c in _bit_string(bits, bound)]


def apery_oracle(g: Iterable[int], a: int) -> list[int]:
    """Ap(S, a) by Dijkstra on residues mod a, arcs weighted by generators."""
    gens = _gens(g)
    _require_numerical(gens)
    if a <= 0:
        raise PreconditionError(f"a must be positive, got {a}")
    if not closure_bits(gens, a) >> a & 1:
        raise PreconditionError(f"{a} is not in the semigroup generated by {list(gens)}")
    steps = sorted({x for x in gens if x % a})
    dist = [None] * a
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d != dist[r]:
            continue
        for s in steps:
            nd = d + s
            nr = nd % a
            if dist[nr] is None or nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return sorted(dist)


def frobenius_oracle(g: Iterable[int]) -> int:
    gens = _gens(g)
    _require_numerical(gens)
    a = gens[0]
    return max(apery_oracle(gens, a)) - a


def gaps_oracle(g: Iterable[int]) -> GapData:
    gens = _gens(g)
    f = frobenius_oracle(gens)
    if f < 0:
        return GapData((), -1, 0)
    table = membership_table(gens, f)
    gaps = tuple(x for x, inside in enumerate(table) if not inside)
    return GapData(gaps, f, len(gaps))


def power_sum_oracle(g: Iterable[int], k: int) -> int:
    return sum(x ** k for x in gaps_oracle(g).gaps)


def minimal_generators(g: Iterable[int]) -> tuple[int, ...]:
    gens = _gens(g)
    kept: list[int] = []
    for x in gens:
        # x can only be a combination of strictly smaller generators
        if not kept or not closure_bits(kept, x) >> x & 1:
            kept.append(x)
    return tuple(kept)


def classify_symmetry(g: Iterable[int]) -> str:
    data = gaps_oracle(g)
    if 2 * data.genus == data.frobenius + 1:
        return "symmetric"
    if 2 * data.genus == data.frobenius + 2:
        return "pseudo-symmetric"
    return "neither"
