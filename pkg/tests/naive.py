"""Independent brute force for numerical semigroups.

Deliberately simple: a boolean DP table up to a Schur-type bound, and the
Apery set read off by scanning each residue class.  Shares no code with
the package.
"""
from functools import reduce
from math import gcd


def bound_for(gens):
    gens = sorted(set(gens))
    # F <= (min - 1)(max - 1) - 1 when gcd = 1
    return gens[0] * gens[-1] + gens[-1]


def members(gens, bound):
    table = [False] * (bound + 1)
    table[0] = True
    for x in range(1, bound + 1):
        table[x] = any(x >= g and table[x - g] for g in gens)
    return table


def frobenius(gens):
    assert reduce(gcd, gens) == 1
    if 1 in gens:
        return -1
    t = members(gens, bound_for(gens))
    return max(x for x, inside in enumerate(t) if not inside)


def gaps(gens):
    f = frobenius(gens)
    if f < 0:
        return []
    t = members(gens, f)
    return [x for x in range(f + 1) if not t[x]]


def apery(gens, a):
    t = members(gens, bound_for(gens) + a)
    out = []
    for r in range(a):
        x = r
        while not t[x]:
            x += a
        out.append(x)
    return sorted(out)


def power_sums(gens, k):
    gs = gaps(gens)
    return [sum(x ** j for x in gs) for j in range(k + 1)]
