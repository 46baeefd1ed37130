"""Reduction graphs: structure, validation, balance, deconstruction and analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

from . import numcore
from .errors import (InconsistencyError, InternalError, NotTotalError,
                     PreconditionError, ValidationError)
from .genpoly import (HilbertSeries, Poly, direct_sum_certificate, gap_polynomial,
                      gen_poly, mean, power_sums_from_gaps)

INF = None  # count of an infinite ArithmeticFamily


# -- node descriptors --------------------------------------------------------

@dataclass(frozen=True)
class Monogenic:
    a: int

    def __post_init__(self):
        if self.a <= 0:
            raise PreconditionError(f"monogenic generator must be positive, got {self.a}")

    def scale(self, k: int) -> Monogenic:
        return Monogenic(self.a * k)

    def bits(self, bound: int) -> int:
        return numcore.multiples_bits(self.a, bound)

    def generators(self) -> list[int]:
        return [self.a]

    def size_param(self) -> int:
        return self.a

    def label(self) -> str:
        return f"<{self.a}>"


@dataclass(frozen=True)
class ScaledRange:
    step: int
    count: int

    def __post_init__(self):
        if self.step <= 0 or self.count <= 0:
            raise PreconditionError("scaled range needs positive step and count")

    def scale(self, k: int) -> ScaledRange:
        return ScaledRange(self.step * k, self.count)

    def bits(self, bound: int) -> int:
        return numcore.bits_of((self.step * r for r in range(self.count)), bound)

    def generators(self) -> list[int]:
        return [self.step] if self.count > 1 else []

    def size_param(self) -> int:
        return self.step * (self.count - 1)

    def label(self) -> str:
        return f"{{{self.step}r : r < {self.count}}}"


@dataclass(frozen=True)
class Semigroup:
    gens: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(sorted(set(self.gens))))
        if not self.gens or self.gens[0] <= 0:
            raise PreconditionError("semigroup node needs positive generators")

    def scale(self, k: int) -> Semigroup:
        return Semigroup(tuple(g * k for g in self.gens))

    def bits(self, bound: int) -> int:
        return numcore.closure_bits(self.gens, bound)

    def generators(self) -> list[int]:
        return list(self.gens)

    def size_param(self) -> int:
        return max(self.gens)

    def label(self) -> str:
        return "<" + ", ".join(map(str, self.gens)) + ">"


@dataclass(frozen=True)
class ExplicitFinite:
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))
        if not self.elements or self.elements[0] != 0:
            raise PreconditionError("explicit node must contain 0 and no negatives")

    def scale(self, k: int) -> ExplicitFinite:
        return ExplicitFinite(tuple(e * k for e in self.elements))

    def bits(self, bound: int) -> int:
        return numcore.bits_of(self.elements, bound)

    def generators(self) -> list[int]:
        return [e for e in self.elements if e]

    def size_param(self) -> int:
        return self.elements[-1]

    def label(self) -> str:
        return "{" + ", ".join(map(str, self.elements)) + "}"


@dataclass(frozen=True)
class ArithmeticFamily:
    """The bundle <h*base + diff>, <h*base + 2*diff>, ... (count terms, None = infinitely many)."""

    base: int
    diff: int
    h: int
    count: int | None

    def __post_init__(self):
        if self.h < 1 or self.base < 0:
            raise PreconditionError("arithmetic family needs h >= 1 and base >= 0")
        if self.count is None:
            if self.diff < 0:
                raise PreconditionError("infinite arithmetic family needs diff >= 0")
        elif self.count < 1:
            raise PreconditionError("arithmetic family count must be positive")
        last = self.term(1 if self.count is None else self.count)
        if self.term(1) <= 0 or last <= 0:
            raise PreconditionError("arithmetic family terms must be positive")

    def term(self, j: int) -> int:
        return self.h * self.base + j * self.diff

    def terms(self, bound: int | None = None) -> list[int]:
        if self.count is not None:
            return [self.term(j) for j in range(1, self.count + 1)]
        if bound is None:
            raise PreconditionError("infinite family needs a bound")
        if self.diff == 0:
            return [self.term(1)]
        out, j = [], 1
        while self.term(j) <= bound:
            out.append(self.term(j))
            j += 1
        return out or [self.term(1)]

    def scale(self, k: int) -> ArithmeticFamily:
        return ArithmeticFamily(self.base * k, self.diff * k, self.h, self.count)

    def bits(self, bound: int) -> int:
        return numcore.closure_bits(self.terms(bound), bound)

    def generators(self) -> list[int]:
        first = self.term(1)
        if self.count == 1 or self.diff == 0:
            return [first]
        return [first, abs(self.diff)]

    def size_param(self) -> int:
        if self.count is None:
            return self.term(1) + abs(self.diff)
        return max(self.term(1), self.term(self.count))

    def label(self) -> str:
        n = "inf" if self.count is None else str(self.count)
        return f"<{self.h}*{self.base} + j*{self.diff} : 1 <= j <= {n}>"


NodeDescriptor = Union[Monogenic, ScaledRange, Semigroup, ExplicitFinite, ArithmeticFamily]


# -- edges and graphs --------------------------------------------------------

@dataclass(frozen=True)
class ReductionEdge:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    kind: str
    remainder: tuple[int, ...]
    params: tuple = ()

    @property
    def weight(self) -> int:
        return len(self.remainder)


@dataclass(frozen=True)
class ReductionGraph:
    nodes: tuple[tuple[str, NodeDescriptor], ...]
    edges: tuple[ReductionEdge, ...]
    root: str
    provenance: tuple[tuple[str, str], ...] = ()

    @property
    def node_map(self) -> dict[str, NodeDescriptor]:
        return dict(self.nodes)

    def node(self, nid: str) -> NodeDescriptor:
        for k, v in self.nodes:
            if k == nid:
                return v
        raise KeyError(nid)

    @property
    def root_generator(self) -> int:
        d = self.node(self.root)
        if not isinstance(d, Monogenic):
            raise PreconditionError("root is not monogenic")
        return d.a

    def outdegree(self) -> dict[str, int]:
        deg = {nid: 0 for nid, _ in self.nodes}
        for e in self.edges:
            for i in e.inputs:
                if i in deg:
                    deg[i] += 1
        return deg

    def indegree(self) -> dict[str, int]:
        deg = {nid: 0 for nid, _ in self.nodes}
        for e in self.edges:
            for o in e.outputs:
                if o in deg:
                    deg[o] += 1
        return deg


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class AnalysisReport:
    root_generator: int
    balance: Fraction
    total: bool
    apery: tuple[int, ...]
    frobenius: int
    genus: int
    asymmetry: int
    hilbert: HilbertSeries
    gap_poly: Poly
    power_sums: tuple[int, ...] | None = None

    @property
    def symmetry(self) -> str:
        return {0: "symmetric", 1: "pseudo-symmetric"}.get(self.asymmetry, "neither")


def build_graph(nodes: Sequence[tuple[str, NodeDescriptor]], edges: Sequence[ReductionEdge],
                root: str | None = None, provenance=()) -> ReductionGraph:
    """Assemble a graph; when root is None it is the unique node with outdegree 0."""
    g = ReductionGraph(tuple(nodes), tuple(edges), root or "", tuple(provenance))
    if root is None:
        sinks = [n for n, d in g.outdegree().items() if d == 0]
        if len(sinks) != 1:
            raise ValidationError([f"multiple roots: {sinks}" if sinks else "no root"])
        g = ReductionGraph(g.nodes, g.edges, sinks[0], g.provenance)
    return g


# -- validation --------------------------------------------------------------

def _find_cycle(g: ReductionGraph) -> bool:
    succ: dict[str, set[str]] = {n: set() for n, _ in g.nodes}
    for e in g.edges:
        for i in e.inputs:
            succ.setdefault(i, set()).update(e.outputs)
    state: dict[str, int] = {}
    for start in succ:
        if start in state:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return True
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return False


def span_gcd(g: ReductionGraph) -> int:
    gens = [x for _, d in g.nodes for x in d.generators()]
    return reduce(math.gcd, gens, 0)


def validate(g: ReductionGraph, check_kinds: bool = True) -> ValidationReport:
    v: list[str] = []
    warn: list[str] = []
    ids = [n for n, _ in g.nodes]
    if len(set(ids)) != len(ids):
        v.append("duplicate node id")
    known = set(ids)
    for idx, e in enumerate(g.edges):
        for nid in e.inputs + e.outputs:
            if nid not in known:
                v.append(f"edge {idx} references unknown node {nid!r}")
        if not e.inputs:
            v.append(f"edge {idx} has no inputs")
        if not e.outputs:
            v.append(f"edge {idx} has no outputs")
        if not e.remainder or e.remainder[0] != 0 or list(e.remainder) != sorted(set(e.remainder)):
            v.append(f"edge {idx} remainder must be a sorted set containing 0")
    if g.root not in known:
        v.append(f"root {g.root!r} is not a node")
        return ValidationReport(tuple(v))
    if not isinstance(g.node(g.root), Monogenic):
        v.append("root is not monogenic")
    out = g.outdegree()
    sinks = [n for n, d in out.items() if d == 0]
    if len(sinks) > 1:
        v.append(f"multiple roots: {sinks}")
    if out[g.root] != 0:
        v.append("root has outgoing edges")
    for n, d in out.items():
        if n != g.root and d > 1:
            v.append(f"node {n} has outdegree {d}")
    if _find_cycle(g):
        v.append("cycle")
    if check_kinds and not v:
        from .edges import check_edge
        for idx, e in enumerate(g.edges):
            problem = check_edge(g, e)
            if problem:
                v.append(f"edge {idx} ({e.kind}): {problem}")
    if not v:
        bal = balance(g)
        if bal > 1 and span_gcd(g) == 1:
            warn.append(f"balance {bal} exceeds 1 for a numerical span; some edge is invalid")
    return ValidationReport(tuple(v), tuple(warn))


def require_valid(g: ReductionGraph) -> None:
    rep = validate(g)
    if not rep.ok:
        raise ValidationError(rep.violations)


def balance(g: ReductionGraph) -> Fraction:
    prod = 1
    for e in g.edges:
        prod *= e.weight
    return Fraction(g.root_generator, prod)


def is_total(g: ReductionGraph) -> bool:
    return balance(g) == span_gcd(g)


def deconstruct(g: ReductionGraph, order_key=None) -> list[int]:
    """An admissible elimination order: each edge's inputs have indegree 0 when it is removed.

    order_key, when given, picks among the currently admissible edges (used to test
    that the result does not depend on the choice).
    """
    indeg = g.indegree()
    remaining = set(range(len(g.edges)))
    order: list[int] = []
    while remaining:
        ready = [i for i in sorted(remaining) if all(indeg[n] == 0 for n in g.edges[i].inputs)]
        if not ready:
            raise InternalError("deconstruction is stuck; the graph has a cycle")
        pick = order_key(ready) if order_key else ready[0]
        remaining.discard(pick)
        order.append(pick)
        for o in g.edges[pick].outputs:
            indeg[o] -= 1
    return order


def apery_from_graph(g: ReductionGraph, order: Sequence[int] | None = None) -> list[int]:
    if balance(g) != 1:
        raise NotTotalError(f"balance is {balance(g)}, not 1")
    if order is None:
        order = deconstruct(g)
    acc = [0]
    for i in order:
        nxt = direct_sum_certificate(acc, g.edges[i].remainder)
        if nxt is None:
            raise NotTotalError(f"sum with remainder of edge {i} is not direct")
        acc = nxt
    r = g.root_generator
    if len(acc) != r or len({x % r for x in acc}) != r:
        raise NotTotalError(f"remainders do not cover each residue mod {r} exactly once")
    return acc


def analyze(g: ReductionGraph, k_max: int | None = None, order: Sequence[int] | None = None) -> AnalysisReport:
    require_valid(g)
    r = g.root_generator
    bal = balance(g)
    apery = apery_from_graph(g, order)
    frob = -r + sum(max(e.remainder) for e in g.edges)
    if frob != max(apery) - r:
        raise InconsistencyError("Frobenius from remainder maxima disagrees with max(Ap) - r")
    numer = Poly({0: 1})
    for e in g.edges:
        numer = numer * gen_poly(e.remainder)
    hilbert = HilbertSeries(numer, r)
    g39 = Fraction(1 - r, 2) + sum((mean(e.remainder) for e in g.edges), Fraction(0))
    if g39.denominator != 1 or g39 < 0:
        raise InconsistencyError(f"genus from remainder means is {g39}, not a nonnegative integer")
    gaps = gap_polynomial(apery, r)
    if len(gaps) != g39:
        raise InconsistencyError(f"genus {g39} from means but {len(gaps)} gaps from division")
    asym = sum((2 * mean(e.remainder) - max(e.remainder) for e in g.edges), Fraction(0))
    if asym != 2 * g39 - frob - 1:
        raise InconsistencyError("edge asymmetries do not sum to 2g - F - 1")
    ps = tuple(power_sums_from_gaps(gaps, k_max)) if k_max is not None else None
    return AnalysisReport(r, bal, bal == span_gcd(g), tuple(apery), frob, int(g39),
                          int(asym), hilbert, gaps, ps)


# -- bounded semantics -------------------------------------------------------

@dataclass(frozen=True)
class EdgeCheck:
    passed: bool
    counterexample: int | None = None
    reason: str = ""


def default_bound(g: ReductionGraph, e: ReductionEdge) -> int:
    m = max(g.node(n).size_param() for n in e.inputs + e.outputs)
    return 2 * (max(e.remainder) + m)


def _sum_nodes(g: ReductionGraph, ids: Iterable[str], bound: int) -> int:
    acc = 1
    for n in ids:
        acc = numcore.sumset_bits(acc, g.node(n).bits(bound), bound)
    return acc


def semantic_verify_edge(g: ReductionGraph, e: int | ReductionEdge, bound: int | None = None) -> EdgeCheck:
    """Check A + B = A (+) R on [0, bound], A = sum of outputs, B = sum of inputs."""
    edge = g.edges[e] if isinstance(e, int) else e
    if bound is None:
        bound = default_bound(g, edge)
    a = _sum_nodes(g, edge.outputs, bound)
    b = _sum_nodes(g, edge.inputs, bound)
    lhs = numcore.sumset_bits(a, b, bound)
    m = numcore.mask(bound)
    rhs = 0
    overlap = 0
    for x in edge.remainder:
        if x > bound:
            break
        shifted = (a << x) & m
        overlap |= rhs & shifted
        rhs |= shifted
    diff = lhs ^ rhs
    bad = diff | overlap
    if not bad:
        return EdgeCheck(True)
    first = (bad & -bad).bit_length() - 1
    if overlap >> first & 1 and not diff >> first & 1:
        reason = "sum with remainder is not direct"
    elif lhs >> first & 1:
        reason = "element of A + B missing from A + R"
    else:
        reason = "element of A + R missing from A + B"
    return EdgeCheck(False, first, reason)


def truncated_span(g: ReductionGraph, bound: int) -> list[int]:
    return numcore.elements_of(_sum_nodes(g, [n for n, _ in g.nodes], bound))


def span_generators(g: ReductionGraph, bound: int) -> tuple[int, ...]:
    """Minimal generators of the span, read off the truncated span up to bound."""
    gens = [x for x in truncated_span(g, bound) if x]
    return numcore.minimal_generators(gens) if gens else ()


# -- canonical form and DOT --------------------------------------------------

def _desc_key(d: NodeDescriptor) -> str:
    return f"{type(d).__name__}{tuple(vars(d).values())!r}"


def canonical_form(g: ReductionGraph) -> str:
    """Serialization independent of node ids and edge order."""
    key = {n: _desc_key(d) for n, d in g.nodes}
    edges = sorted(
        repr((e.kind, sorted(key[i] for i in e.inputs), sorted(key[o] for o in e.outputs),
              e.remainder))
        for e in g.edges)
    nodes = sorted(key.values())
    return repr((key[g.root], nodes, edges))


def to_dot(g: ReductionGraph) -> str:
    lines = ["digraph reduction {", "  rankdir=BT;"]
    prov = dict(g.provenance)
    for nid, d in g.nodes:
        label = d.label().replace('"', '\\"')
        if nid in prov:
            label += "\\n" + prov[nid]
        shape = "doublecircle" if nid == g.root else "ellipse"
        lines.append(f'  "{nid}" [label="{label}", shape={shape}];')
    for idx, e in enumerate(g.edges):
        j = f"e{idx}"
        lines.append(f'  "{j}" [shape=point, xlabel="O({e.weight})"];')
        for i in e.inputs:
            lines.append(f'  "{i}" -> "{j}" [arrowhead=none];')
        for o in e.outputs:
            lines.append(f'  "{j}" -> "{o}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
