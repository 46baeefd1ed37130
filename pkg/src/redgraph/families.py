"""Reduction graphs for the studied classes of semigroups, with closed-form Frobenius numbers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

from sympy import divisor_sigma, factorint
from sympy import fibonacci as _fib

from . import numcore
from .edges import (apery_edge, binary_edge, graph_from_specs, infinite_arithmetic_edge,
                    linear_binary_edge, linear_edge, modified_arithmetic_edge, residue_edge,
                    root_only)
from .errors import PreconditionError
from .genpoly import HilbertSeries, Poly
from .graph import Monogenic, ReductionGraph, ScaledRange, analyze, balance, truncated_span, validate
from .transform import compose


@dataclass(frozen=True)
class FamilyInstance:
    name: str
    params: dict
    graph: ReductionGraph
    generators: tuple[int, ...]
    closed_form_frobenius: int | None = None
    notes: str = ""


def _ceil(x: int, y: int) -> int:
    return -(-x // y)


def _need(cond: bool, msg: str):
    if not cond:
        raise PreconditionError(msg)


def _compose_all(graphs: Sequence[ReductionGraph]) -> ReductionGraph:
    return reduce(compose, graphs) if graphs else root_only(1)


# -- chains of binary edges --------------------------------------------------

def geometric(a: int, b: int, n: int) -> FamilyInstance:
    _need(a > 0 and b > 0 and math.gcd(a, b) == 1, "geometric needs gcd(a, b) = 1")
    _need(n >= 1, "geometric needs n >= 1")
    terms = [a ** (n - k) * b ** k for k in range(n + 1)]
    specs = [binary_edge(terms[k], terms[k + 1]) for k in range(n)]
    g = graph_from_specs(specs, Monogenic(terms[0]))
    cf = a * b - a - b if n == 1 else None
    return FamilyInstance("geometric", dict(a=a, b=b, n=n), g, tuple(terms), cf)


def composed_geometric(a: int, b: int, c: int, d: int, n: int, m: int) -> FamilyInstance:
    _need(math.gcd(a, b) == 1 and math.gcd(a, c) == 1 and math.gcd(c, d) == 1,
          "composed geometric needs gcd(a, b) = gcd(a, c) = gcd(c, d) = 1")
    _need(n >= 0 and m >= 0, "exponents must be nonnegative")
    g1 = geometric(a, b, n).graph if n else root_only(1)
    g2 = geometric(c, d, m).graph if m else root_only(1)
    gens = {c ** m * a ** (n - k) * b ** k for k in range(n + 1)}
    gens |= {a ** n * c ** (m - j) * d ** j for j in range(m + 1)}
    return FamilyInstance("composed-geometric", dict(a=a, b=b, c=c, d=d, n=n, m=m),
                          compose(g1, g2), tuple(sorted(gens)))


def compound(a: Sequence[int], b: Sequence[int]) -> FamilyInstance:
    a, b = list(a), list(b)
    _need(len(a) == len(b) and a, "compound needs equally long nonempty lists")
    k = len(a)
    for i in range(k):
        for j in range(i + 1):
            _need(math.gcd(a[i], b[j]) == 1, f"gcd(a{i + 1}, b{j + 1}) must be 1")
    ns = [math.prod(a[i:]) * math.prod(b[:i]) for i in range(k + 1)]
    specs = [binary_edge(ns[i], ns[i + 1]) for i in range(k)]
    g = graph_from_specs(specs, Monogenic(ns[0]))
    return FamilyInstance("compound", dict(a=tuple(a), b=tuple(b)), g, tuple(ns))


def special_triplet(a: int, b: int, c: int) -> FamilyInstance:
    _need(min(a, b, c) > 0, "special triplet needs positive integers")
    _need(math.lcm(a, b) % c == 0, "special triplet needs c | lcm(a, b)")
    _need(math.gcd(a, math.gcd(b, c)) == 1, "special triplet needs gcd(a, b, c) = 1")
    specs = [binary_edge(c, x) for x in sorted({a, b}) if x != c]
    g = graph_from_specs(specs, Monogenic(c))
    return FamilyInstance("special-triplet", dict(a=a, b=b, c=c), g, (a, b, c))


def fibonacci(n: int) -> int:
    return int(_fib(n))


def fibonacci_triplet(i: int, k: int) -> FamilyInstance:
    """Root <F_i>, a linear edge out of <F_{i+2} F_k> and a split-tail residue edge.

    The node sum of this graph is <F_i, F_{i+2}, F_{i+k}>: the linear identity
    F_{i+2} F_k = F_{k-2} F_i + F_{i+k} produces F_{i+k}, not F_k.
    """
    _need(i >= 1 and k >= 3, "fibonacci triplet needs i >= 1 and k >= 3")
    F = fibonacci
    fi, fi2, fk, fik, fk2 = F(i), F(i + 2), F(k), F(i + k), F(k - 2)
    lin = linear_edge([fi, fik], fi2 * fk)
    table = [-fk2 * (r // fk) for r in range(fi)]
    res = residue_edge(fi, fi2, table, inputs=[ScaledRange(fi2, fk), Monogenic(fik)])
    g = graph_from_specs([lin, res], Monogenic(fi))
    return FamilyInstance("fibonacci-triplet", dict(i=i, k=k), g, (fi, fi2, fik),
                          notes=f"the triple <F_i, F_i+2, F_k> is <{fi}, {fi2}, {fk}>")


def telescopic(seq: Sequence[int]) -> FamilyInstance:
    seq = [int(x) for x in seq]
    _need(seq and min(seq) > 0, "telescopic needs positive integers")
    _need(len(set(seq)) == len(seq), "telescopic sequence has repeated terms")
    _need(reduce(math.gcd, seq) == 1, "telescopic sequence must have gcd 1")
    specs = []
    for k in range(1, len(seq)):
        try:
            specs.append(linear_binary_edge(seq[:k], seq[k]))
        except PreconditionError as exc:
            raise PreconditionError(f"not telescopic at position {k + 1}: {exc}") from None
    g = graph_from_specs(specs, Monogenic(seq[0]))
    return FamilyInstance("telescopic", dict(seq=tuple(seq)), g, tuple(seq))


def is_telescopic(seq: Sequence[int]) -> bool:
    """The divisibility-and-membership condition, checked directly on the sequence."""
    for k in range(1, len(seq)):
        gk = reduce(math.gcd, seq[:k])
        gk1 = math.gcd(gk, seq[k])
        target = seq[k] // gk1
        scaled = [x // gk for x in seq[:k]]
        if not numcore.membership_table(scaled, target)[target]:
            return False
    return True


def tri(n: int) -> int:
    return n * (n + 1) // 2


def tetra(n: int) -> int:
    return n * (n + 1) * (n + 2) // 6


def triangular(n: int) -> FamilyInstance:
    _need(n >= 1, "triangular needs n >= 1")
    t0, t1, t2 = tri(n), tri(n + 1), tri(n + 2)
    g = graph_from_specs([binary_edge(t0, t1), binary_edge(t1, t2)], Monogenic(t0))
    return FamilyInstance("triangular", dict(n=n), g, (t0, t1, t2))


def tetrahedral_mod6(n: int) -> FamilyInstance:
    _need(n >= 6 and n % 6 == 0, "tetrahedral construction needs n = 0 mod 6")
    t = [tetra(n + j) for j in range(4)]
    # ((n+4)/2) TH_{n+1} + 2 TH_{n+2} = ((n+2)/2) TH_{n+3}
    specs = [binary_edge(t[0], t[1]), binary_edge(t[1], t[2]), linear_binary_edge([t[1], t[2]], t[3])]
    g = graph_from_specs(specs, Monogenic(t[0]))
    return FamilyInstance("tetrahedral-mod6", dict(n=n), g, tuple(t))


# -- families with closed-form Frobenius numbers ------------------------------

def extended_triangular(n: int, k: int, p: int | None = None, q: int | None = None) -> FamilyInstance:
    _need(n >= 1 and k >= 3, "extended triangular needs n >= 1 and k >= 3")
    p = k // 2 if p is None else p
    q = (k - 1) // 2 if q is None else q
    _need(p >= 1 and q >= 1, "p and q must be positive")
    t0, t1 = tri(n), tri(n + 1)
    specs = [modified_arithmetic_edge(t0, n + 1, p), modified_arithmetic_edge(t1, n + 2, q)]
    # for small n the two input lists can share a value (n = 1, k = 8 shares 9)
    g = graph_from_specs(specs, Monogenic(t0), separate_inputs=True)
    gens = {t0} | {t0 + j * (n + 1) for j in range(1, p + 1)} | {t1 + j * (n + 2) for j in range(1, q + 1)}
    if n % 2 == 0:
        cf = _ceil(n - 2, 2 * p) * t0 + _ceil(n, q) * t1 + n * n + n - 1
    else:
        cf = _ceil(n - 1, p) * t0 + _ceil(n - 1, 2 * q) * t1 + n * n - 2
    return FamilyInstance("extended-triangular", dict(n=n, k=k, p=p, q=q), g, tuple(sorted(gens)), cf)


def extended_triangular_generators(n: int, k: int) -> tuple[int, ...]:
    """Generators by the direct formula (n+i)(n+i%2+1)/2 for 0 <= i <= k."""
    return tuple(sorted({(n + i) * (n + i % 2 + 1) // 2 for i in range(k + 1)}))


def arith_geo_terms(a: int, b: int, n: int, variant: int) -> list[int]:
    """A_{i,1..n}: shifted geometric terms (variant 1) or partial sums (variant 2)."""
    if variant == 1:
        return [a ** (n - j) * b ** j for j in range(1, n + 1)]
    return [sum(a ** (n - i) * b ** i for i in range(1, j + 1)) for j in range(1, n + 1)]


def arith_geo_closed_form(a: int, b: int, d: int, n: int, variant: int) -> int:
    head = a ** (n - 1) * (a * _ceil((a - 1) * d, b) + a * d - a - d)
    if a != b:
        if variant == 1:
            num = (n - 1) * a ** n * (a - b) + b * b * (a ** (n - 1) - b ** (n - 1))
            den = a - b
        else:
            num = (n - 1) * a ** (n + 1) * (a - b) - b ** 3 * (a ** (n - 1) - b ** (n - 1))
            den = (a - b) ** 2
        tail = Fraction((a - 1) * num, den)
        if tail.denominator != 1:
            raise PreconditionError("closed form is not integral")
        return head + int(tail)
    # a = b forces a = b = 1; the summed form of the proof has no division
    A = arith_geo_terms(a, b, n, variant)
    return -a ** n + a ** (n - 1) * (a * _ceil((a - 1) * d, b) + d * (a - 1)) + \
        sum(A[k] * (a - 1) for k in range(1, n))


def arith_geo_sums(a: int, b: int, d: int, n: int, variant: int = 1) -> FamilyInstance:
    _need(min(a, b, d, n) >= 1, "parameters must be positive")
    _need(b % d == 0, "d must divide b")
    _need(math.gcd(a, b) == 1, "gcd(a, b) must be 1")
    _need(variant in (1, 2), "variant is 1 or 2")
    _need(variant == 2 or b <= a, "variant 1 needs b <= a")
    an = a ** n
    A = arith_geo_terms(a, b, n, variant)
    specs = [modified_arithmetic_edge(an, a ** (n - 1) * d, b // d)]
    for k in range(1, n):
        specs.append(linear_binary_edge([an, an + A[k - 1]], an + A[k]))
    g = graph_from_specs(specs, Monogenic(an))
    gens = {an} | {an + a ** (n - 1) * d * j for j in range(1, b // d + 1)} | {an + x for x in A[1:]}
    return FamilyInstance("arith-geo-sums", dict(a=a, b=b, d=d, n=n, variant=variant), g,
                          tuple(sorted(gens)), arith_geo_closed_form(a, b, d, n, variant))


def nu2(n: int) -> int:
    return (n & -n).bit_length() - 1


def shifted_powers_closed_form(n: int, k: int) -> int:
    if k <= nu2(n):
        return Fraction(n * n, 2 ** k) + (k - 1) * n - 1
    return Fraction(n * n, 2 ** k) + Fraction(2 * k - 3, 2) * n - 1


def shifted_powers_of_two(n: int, k: int) -> FamilyInstance:
    _need(n >= 1, "n must be positive")
    v = nu2(n)
    _need(0 <= k <= v + 1, f"k must lie in [0, {v + 1}]")
    last = min(k, v)
    specs = [linear_binary_edge([n, n + 2 ** (i + 1)], n + 2 ** i) for i in range(last)]
    if k <= v:
        specs.append(binary_edge(n, n + 2 ** k))
    else:
        # the binary edge out of n + 2^v, enriched with the input n + 2^(v+1)
        specs.append(modified_arithmetic_edge(n, 2 ** v, 2))
    g = graph_from_specs(specs, Monogenic(n))
    cf = shifted_powers_closed_form(n, k)
    if Fraction(cf).denominator != 1:
        raise PreconditionError("closed form is not integral")
    gens = (n,) + tuple(n + 2 ** i for i in range(k + 1))
    return FamilyInstance("shifted-powers-of-two", dict(n=n, k=k), g, gens, int(cf))


def sigma(n: int, t: int) -> int:
    return int(divisor_sigma(n, t))


def repunit_generators(p: int, k: int, t: int) -> list[int]:
    """sigma_t(p^j) for j > k, stopping once the next one exceeds the current Frobenius number."""
    a = sigma(p ** k, t)
    gens: list[int] = []
    j = k + 1
    while True:
        x = sigma(p ** j, t)
        if gens and math.gcd(a, *gens) == 1:
            if x > numcore.frobenius_oracle([a] + gens):
                return gens
        gens.append(x)
        j += 1


def repunit_max(p: int, k: int, t: int) -> int:
    """(b^(2m) - 1)/(b - 1) - 1 with b = p^t and m = k + 1."""
    b, m = p ** t, k + 1
    return (b ** (2 * m) - 1) // (b - 1) - 1


def divisor_function(n: int, t: int) -> FamilyInstance:
    _need(n >= 1 and t >= 1, "n and t must be positive")
    fac = sorted(factorint(n).items())
    heads = [sigma(p ** k, t) for p, k in fac]
    for i in range(len(heads)):
        for j in range(i + 1, len(heads)):
            _need(math.gcd(heads[i], heads[j]) == 1,
                  f"gcd(sigma_t({fac[i][0]}^{fac[i][1]}), sigma_t({fac[j][0]}^{fac[j][1]})) != 1")
    graphs = [graph_from_specs([apery_edge(sigma(p ** k, t), repunit_generators(p, k, t))])
              for p, k in fac]
    g = _compose_all(graphs)
    s = sigma(n, t)
    gens = {s}
    for (p, k), h in zip(fac, heads):
        gens |= {s // h * x for x in repunit_generators(p, k, t)}
    total = sum((Fraction(p ** (2 * t * (k + 1)) - p ** t, p ** (t * (k + 1)) - 1) for p, k in fac), Fraction(0))
    cf = s * (total - 1)
    if cf.denominator != 1:
        raise PreconditionError("closed form is not integral")
    return FamilyInstance("divisor-function", dict(n=n, t=t), g, tuple(sorted(gens)), int(cf))


def almost_divisible(n: int, variant: str = "le") -> FamilyInstance:
    _need(n >= 1, "n must be positive")
    _need(variant in ("le", "ge"), "variant is 'le' or 'ge'")
    pks = [p ** k for p, k in sorted(factorint(n).items())]
    if variant == "le":
        graphs = [graph_from_specs([binary_edge(q, 1)]) for q in pks]
        gens = {n // q for q in pks} or {1}
        cf = n * (sum((Fraction(q - 1, q) for q in pks), Fraction(0)) - 1)
    else:
        graphs = [graph_from_specs([infinite_arithmetic_edge(q, 1)]) for q in pks]
        gens = {n} | {n + u * (n // q) for q in pks for u in range(1, q)}
        if n == 1:
            gens = {1}
        cf = n * (sum((Fraction(2 * q - 1, q) for q in pks), Fraction(0)) - 1)
    g = _compose_all(graphs)
    return FamilyInstance("almost-divisible", dict(n=n, variant=variant), g, tuple(sorted(gens)), int(cf))


@dataclass(frozen=True)
class BrauerShockley:
    left: FamilyInstance
    right: FamilyInstance
    d: int
    frobenius_ok: bool
    genus_ok: bool
    hilbert_ok: bool

    @property
    def ok(self) -> bool:
        return self.frobenius_ok and self.genus_ok and self.hilbert_ok


def _series(h: HilbertSeries, bound: int) -> list[int]:
    return h.expand(bound)


def brauer_shockley(gens: Sequence[int], d: int) -> BrauerShockley:
    gens = [int(x) for x in gens]
    _need(len(gens) >= 2 and min(gens) > 0, "need at least two positive generators")
    *head, an = gens
    _need(d >= 1 and all(x % d == 0 for x in head), "d must divide every generator but the last")
    _need(reduce(math.gcd, gens) == 1, "generators must have gcd 1")
    reduced = [x // d for x in head]
    others = sorted({x for x in reduced if x != an})
    if others:
        left_g = graph_from_specs([apery_edge(an, others)])
    else:
        left_g = root_only(an)
    left = FamilyInstance("brauer-shockley-left", dict(gens=tuple(gens), d=d), left_g,
                          tuple(reduced) + (an,))
    right_g = compose(left_g, graph_from_specs([binary_edge(d, 1)])) if d > 1 else left_g
    rl, rr = analyze(left_g), analyze(right_g)
    f_ok = rr.frobenius == d * rl.frobenius + an * (d - 1)
    g_ok = Fraction(rr.genus) == d * rl.genus + Fraction((an - 1) * (d - 1), 2)
    bound = 2 * max(rr.frobenius, 0) + 20
    lhs = _series(rr.hilbert, bound)
    base = _series(rl.hilbert, bound // d + 1)
    sub = [0] * (bound + 1)
    for e, v in enumerate(base):
        if e * d <= bound:
            sub[e * d] = v
    factor = Poly({j * an: 1 for j in range(d)})  # (X^{d a_n} - 1)/(X^{a_n} - 1)
    rhs = [0] * (bound + 1)
    for e, v in enumerate(sub):
        if v:
            for fe, fv in factor.terms():
                if e + fe <= bound:
                    rhs[e + fe] += v * fv
    h_ok = lhs == rhs
    right = FamilyInstance("brauer-shockley", dict(gens=tuple(gens), d=d), right_g, tuple(gens),
                           d * rl.frobenius + an * (d - 1))
    return BrauerShockley(left, right, d, f_ok, g_ok, h_ok)


# -- checking an instance against the oracle ----------------------------------

def verify_instance(inst: FamilyInstance, k_max: int = 2) -> dict:
    """Compare the graph analysis with brute force on the expected generators."""
    rep = validate(inst.graph)
    out: dict = {"family": inst.name, "params": inst.params, "valid": rep.ok,
                 "violations": list(rep.violations)}
    if not rep.ok:
        out["ok"] = False
        return out
    bal = balance(inst.graph)
    out["balance"] = bal
    res = analyze(inst.graph, k_max)
    r = res.root_generator
    gens = list(inst.generators)
    gaps = numcore.gaps_oracle(gens)
    oracle = {
        "apery": tuple(numcore.apery_oracle(gens, r)),
        "frobenius": gaps.frobenius,
        "genus": gaps.genus,
        "asymmetry": 2 * gaps.genus - gaps.frobenius - 1,
        "power_sums": tuple(sum(x ** j for x in gaps.gaps) for j in range(k_max + 1)),
    }
    graph_vals = {"apery": res.apery, "frobenius": res.frobenius, "genus": res.genus,
                  "asymmetry": res.asymmetry, "power_sums": res.power_sums}
    bound = max(res.frobenius, 0) + 2 * r
    member = numcore.membership_table(gens, bound)
    span = set(truncated_span(inst.graph, bound))
    hil = res.hilbert.expand(bound)
    checks = {k: graph_vals[k] == oracle[k] for k in oracle}
    checks["balance"] = bal == 1
    checks["span"] = span == {x for x in range(bound + 1) if member[x]}
    checks["hilbert"] = hil == [int(m) for m in member]
    if inst.closed_form_frobenius is not None:
        checks["closed_form"] = inst.closed_form_frobenius == res.frobenius
    out.update(graph=graph_vals, oracle=oracle, closed_form=inst.closed_form_frobenius,
               checks=checks, ok=all(checks.values()))
    return out


# -- registry for the command line ------------------------------------------------

def _ints(v) -> tuple[int, ...]:
    if isinstance(v, (list, tuple)):
        return tuple(int(x) for x in v)
    return tuple(int(x) for x in str(v).replace("/", ":").split(":") if x)


@dataclass(frozen=True)
class FamilyEntry:
    build: Callable
    schema: dict
    doc: str


def _bs_build(gens, d):
    return brauer_shockley(gens, d).right


FAMILIES: dict[str, FamilyEntry] = {
    "geometric": FamilyEntry(geometric, dict(a=int, b=int, n=int), "<a^n, a^(n-1) b, ..., b^n>"),
    "composed-geometric": FamilyEntry(composed_geometric, dict(a=int, b=int, c=int, d=int, n=int, m=int),
                                      "root composition of two geometric graphs"),
    "compound": FamilyEntry(compound, dict(a=_ints, b=_ints), "compound sequence, lists as 2:3"),
    "special-triplet": FamilyEntry(special_triplet, dict(a=int, b=int, c=int), "c | lcm(a, b)"),
    "fibonacci-triplet": FamilyEntry(fibonacci_triplet, dict(i=int, k=int), "Fibonacci triplet graph"),
    "telescopic": FamilyEntry(telescopic, dict(seq=_ints), "telescopic sequence, as 4:6:9"),
    "triangular": FamilyEntry(triangular, dict(n=int), "<T_n, T_n+1, T_n+2>"),
    "tetrahedral-mod6": FamilyEntry(tetrahedral_mod6, dict(n=int), "four tetrahedral numbers, n = 0 mod 6"),
    "extended-triangular": FamilyEntry(extended_triangular, dict(n=int, k=int, p=int, q=int),
                                       "extended triangular numbers"),
    "arith-geo-sums": FamilyEntry(arith_geo_sums, dict(a=int, b=int, d=int, n=int, variant=int),
                                  "arithmetic-geometric sums"),
    "shifted-powers-of-two": FamilyEntry(shifted_powers_of_two, dict(n=int, k=int), "<n, n+1, n+2, ..., n+2^k>"),
    "divisor-function": FamilyEntry(divisor_function, dict(n=int, t=int), "divisor function values"),
    "almost-divisible": FamilyEntry(almost_divisible, dict(n=int, variant=str), "almost divisible numbers"),
    "brauer-shockley": FamilyEntry(_bs_build, dict(gens=_ints, d=int), "recursive construction, gens as 6:10:15"),
}


def build_family(name: str, params: dict) -> FamilyInstance:
    if name not in FAMILIES:
        raise PreconditionError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    entry = FAMILIES[name]
    kwargs = {}
    for key, value in params.items():
        if key not in entry.schema:
            raise PreconditionError(f"family {name} has no parameter {key!r}")
        try:
            kwargs[key] = entry.schema[key](value)
        except (TypeError, ValueError):
            raise PreconditionError(f"bad value {value!r} for parameter {key}") from None
    try:
        return entry.build(**kwargs)
    except TypeError as exc:
        raise PreconditionError(str(exc)) from None
