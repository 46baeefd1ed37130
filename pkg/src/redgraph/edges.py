"""Constructors for the basic reduction edges.

Each constructor checks its preconditions, materializes the remainder set and
declares the node descriptors it connects.  Coprimality is never demanded of
the raw parameters of binary and arithmetic edges: the common divisor is
computed and the scaled form is produced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from . import numcore
from .errors import PreconditionError
from .graph import (ArithmeticFamily, Monogenic, NodeDescriptor, ReductionEdge,
                    ReductionGraph, build_graph, _desc_key)


@dataclass(frozen=True)
class EdgeSpec:
    kind: str
    params: tuple
    remainder: tuple[int, ...]
    inputs: tuple[NodeDescriptor, ...]
    outputs: tuple[NodeDescriptor, ...]

    @property
    def weight(self) -> int:
        return len(self.remainder)


def _rem(values) -> tuple[int, ...]:
    vals = sorted(set(values))
    if not vals or vals[0] != 0:
        raise PreconditionError("remainder must contain 0")
    return tuple(vals)


def _positive(**kw):
    for name, v in kw.items():
        if v <= 0:
            raise PreconditionError(f"{name} must be positive, got {v}")


def _in_span(x: int, gens: Sequence[int]) -> bool:
    return bool(numcore.closure_bits(gens, x) >> x & 1)


def linear_edge(outputs: Sequence[int], b: int) -> EdgeSpec:
    outs = tuple(outputs)
    _positive(b=b)
    for a in outs:
        _positive(output=a)
    if not _in_span(b, outs):
        raise PreconditionError(f"{b} is not in <{', '.join(map(str, outs))}>")
    return EdgeSpec("linear", (outs, b), (0,), (Monogenic(b),), tuple(Monogenic(a) for a in outs))


def binary_edge(a: int, b: int) -> EdgeSpec:
    _positive(a=a, b=b)
    g = math.gcd(a, b)
    kind = "binary" if g == 1 else "scaled-binary"
    return EdgeSpec(kind, (a, b), tuple(b * r for r in range(a // g)),
                    (Monogenic(b),), (Monogenic(a),))


def arithmetic_remainder(a: int, d: int, k: int, h: int) -> list[int]:
    g = math.gcd(a, abs(d))
    return [h * a * (-(-r // k)) + d * r for r in range(a // g)]


def modified_arithmetic_edge(a: int, d: int, k: int, h: int = 1) -> EdgeSpec:
    _positive(a=a, k=k, h=h)
    if a + k * d <= 0:
        raise PreconditionError(f"a + k*d = {a + k * d} must be positive")
    rem = arithmetic_remainder(a, d, k, h)
    if min(rem) < 0:
        raise PreconditionError(f"remainder has negative element {min(rem)}")
    ins = tuple(Monogenic(x) for x in sorted({h * a + j * d for j in range(1, k + 1)}))
    return EdgeSpec("modified-arithmetic", (a, d, k, h), _rem(rem), ins, (Monogenic(a),))


def infinite_arithmetic_edge(a: int, d: int, h: int = 1) -> EdgeSpec:
    _positive(a=a, h=h)
    if d < 0:
        raise PreconditionError("infinite arithmetic edge needs d >= 0")
    if d == 0:
        raise PreconditionError("d = 0 is degenerate: every input equals h*a")
    g = math.gcd(a, d)
    rem = [0] + [h * a + d * r for r in range(1, a // g)]
    return EdgeSpec("infinite-arithmetic", (a, d, h), _rem(rem),
                    (ArithmeticFamily(a, d, h, None),), (Monogenic(a),))


def residue_edge(a: int, b: int, f_table: Sequence[int],
                 inputs: Sequence[NodeDescriptor] | None = None, scale: int = 1) -> EdgeSpec:
    """<a> + {a f(y) + b y : y >= 0} = <a> (+) {a f(r) + b r : r < a}, all scaled by `scale`.

    The input nodes must sum to {a f(y) + b y}; when omitted and f is zero they default to <b>.
    Validity of the table beyond r < a is left to bounded semantic verification.
    """
    _positive(a=a, scale=scale)
    if math.gcd(a, abs(b)) != 1:
        raise PreconditionError(f"gcd({a}, {b}) must be 1")
    table = tuple(int(t) for t in f_table)
    if len(table) != a:
        raise PreconditionError(f"table has {len(table)} entries, expected {a}")
    rem = [a * table[r] + b * r for r in range(a)]
    if min(rem) < 0:
        raise PreconditionError(f"remainder has negative element {min(rem)}")
    if len({x % a for x in rem}) != a:
        raise PreconditionError("remainder elements collide mod a")
    if inputs is None:
        if any(table) or b <= 0:
            raise PreconditionError("residue edge with nonzero table needs explicit input nodes")
        inputs = (Monogenic(b * scale),)
    return EdgeSpec("residue", (a, b, table, scale), _rem(scale * x for x in rem),
                    tuple(inputs), (Monogenic(a * scale),))


def linear_binary_edge(outputs: Sequence[int], b: int) -> EdgeSpec:
    outs = tuple(outputs)
    _positive(b=b)
    for a in outs:
        _positive(output=a)
    g = reduce(math.gcd, outs)
    c = g // math.gcd(g, b)
    if not _in_span(b * c, outs):
        raise PreconditionError(f"b*c = {b * c} is not in <{', '.join(map(str, outs))}>")
    return EdgeSpec("linear-binary", (outs, b), tuple(b * r for r in range(c)),
                    (Monogenic(b),), tuple(Monogenic(a) for a in outs))


def apery_edge(a: int, gens: Sequence[int], scale: int = 1) -> EdgeSpec:
    _positive(a=a, scale=scale)
    gs = tuple(sorted(set(gens) - {a}))
    if not gs:
        raise PreconditionError("apery edge needs a generator other than its output")
    if reduce(math.gcd, gs, a) != 1:
        raise PreconditionError(f"gcd of {a} and {list(gs)} must be 1")
    ap = numcore.apery_oracle((a,) + gs, a)
    return EdgeSpec("apery", (a, gs, scale), _rem(scale * x for x in ap),
                    tuple(Monogenic(scale * x) for x in gs), (Monogenic(scale * a),))


def explicit_edge(inputs: Sequence[NodeDescriptor], outputs: Sequence[NodeDescriptor],
                  remainder: Sequence[int]) -> EdgeSpec:
    if 0 not in set(remainder):
        raise PreconditionError("remainder must contain 0")
    if min(remainder) < 0:
        raise PreconditionError("remainder must be nonnegative")
    if not inputs or not outputs:
        raise PreconditionError("explicit edge needs inputs and outputs")
    return EdgeSpec("explicit", (), _rem(remainder), tuple(inputs), tuple(outputs))


def rebuild(kind: str, params: tuple, inputs=None, outputs=None) -> EdgeSpec:
    """Re-run the constructor that produced an edge of this kind."""
    if kind == "linear":
        return linear_edge(*params)
    if kind in ("binary", "scaled-binary"):
        return binary_edge(*params)
    if kind == "modified-arithmetic":
        return modified_arithmetic_edge(*params)
    if kind == "infinite-arithmetic":
        return infinite_arithmetic_edge(*params)
    if kind == "residue":
        a, b, table, scale = params
        return residue_edge(a, b, table, inputs, scale)
    if kind == "linear-binary":
        return linear_binary_edge(*params)
    if kind == "apery":
        return apery_edge(*params)
    if kind == "explicit":
        return explicit_edge(inputs, outputs, params[0] if params else [0])
    raise PreconditionError(f"unknown edge kind {kind!r}")


def check_edge(g: ReductionGraph, e: ReductionEdge) -> str | None:
    """Structural consistency of a graph edge with its kind; None when fine."""
    ins = [g.node(n) for n in e.inputs]
    outs = [g.node(n) for n in e.outputs]
    if e.kind == "explicit":
        return None
    try:
        spec = rebuild(e.kind, e.params, ins, outs)
    except PreconditionError as exc:
        return str(exc)
    if spec.kind != e.kind:
        return f"parameters describe a {spec.kind} edge"
    if spec.remainder != e.remainder:
        return "remainder does not match the kind's formula"
    if sorted(map(_desc_key, spec.inputs)) != sorted(map(_desc_key, ins)):
        return "input nodes do not match the kind's declaration"
    if sorted(map(_desc_key, spec.outputs)) != sorted(map(_desc_key, outs)):
        return "output nodes do not match the kind's declaration"
    return None


class GraphBuilder:
    """Collects edge specs, deduplicating nodes by descriptor value."""

    def __init__(self):
        self._ids: dict[str, str] = {}
        self.nodes: list[tuple[str, NodeDescriptor]] = []
        self.edges: list[ReductionEdge] = []
        self._used_as_input: set[str] = set()

    def node(self, d: NodeDescriptor) -> str:
        key = _desc_key(d)
        if key not in self._ids:
            nid = f"n{len(self.nodes)}"
            self._ids[key] = nid
            self.nodes.append((nid, d))
        return self._ids[key]

    def fresh(self, d: NodeDescriptor) -> str:
        """A new node even when an equal descriptor already exists."""
        nid = f"n{len(self.nodes)}"
        self.nodes.append((nid, d))
        return nid

    def add(self, spec: EdgeSpec, separate_inputs: bool = False) -> int:
        if separate_inputs:
            ins = tuple(self.node(d) if _desc_key(d) not in self._used_as_input else self.fresh(d)
                        for d in spec.inputs)
        else:
            ins = tuple(self.node(d) for d in spec.inputs)
        self._used_as_input.update(_desc_key(d) for d in spec.inputs)
        outs = tuple(self.node(d) for d in spec.outputs)
        params = spec.params if spec.kind != "explicit" else (spec.remainder,)
        self.edges.append(ReductionEdge(ins, outs, spec.kind, spec.remainder, params))
        return len(self.edges) - 1

    def build(self, root: NodeDescriptor | None = None) -> ReductionGraph:
        rid = self.node(root) if root is not None else None
        return build_graph(self.nodes, self.edges, rid)


def graph_from_specs(specs: Sequence[EdgeSpec], root: NodeDescriptor | None = None,
                     separate_inputs: bool = False) -> ReductionGraph:
    """separate_inputs: an input already feeding an earlier edge becomes its own node."""
    b = GraphBuilder()
    for s in specs:
        b.add(s, separate_inputs)
    return b.build(root)


def root_only(a: int) -> ReductionGraph:
    b = GraphBuilder()
    return b.build(Monogenic(a))
