"""Graph-to-graph operations: scaling, partial scaling, composition, artificial nodes, enrichment."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import numcore
from .edges import EdgeSpec, rebuild
from .errors import PreconditionError, ValidationError
from .graph import (Monogenic, ReductionEdge, ReductionGraph, _desc_key, build_graph,
                    validate)

FULL_KINDS = ("binary", "scaled-binary", "modified-arithmetic", "infinite-arithmetic")


def _scaled_params(e: ReductionEdge, k: int) -> tuple:
    p = e.params
    kind = e.kind
    if kind in ("linear", "linear-binary"):
        return (tuple(x * k for x in p[0]), p[1] * k)
    if kind in ("binary", "scaled-binary"):
        return (p[0] * k, p[1] * k)
    if kind == "modified-arithmetic":
        return (p[0] * k, p[1] * k, p[2], p[3])
    if kind == "infinite-arithmetic":
        return (p[0] * k, p[1] * k, p[2])
    if kind == "residue":
        return (p[0], p[1], p[2], p[3] * k)
    if kind == "apery":
        return (p[0], p[1], p[2] * k)
    if kind == "explicit":
        return (tuple(x * k for x in e.remainder),)
    raise PreconditionError(f"cannot scale edge kind {kind!r}")


def _remake(g_nodes: dict, e: ReductionEdge, params: tuple) -> ReductionEdge:
    ins = [g_nodes[n] for n in e.inputs]
    outs = [g_nodes[n] for n in e.outputs]
    spec = rebuild(e.kind if e.kind != "scaled-binary" else "binary", params, ins, outs)
    if sorted(map(_desc_key, spec.inputs)) != sorted(map(_desc_key, ins)) or \
            sorted(map(_desc_key, spec.outputs)) != sorted(map(_desc_key, outs)):
        raise PreconditionError(f"rescaled {e.kind} edge no longer matches its nodes")
    return ReductionEdge(e.inputs, e.outputs, spec.kind, spec.remainder,
                         params if e.kind != "explicit" else (spec.remainder,))


def scale_graph(g: ReductionGraph, k: int) -> ReductionGraph:
    if k <= 0:
        raise PreconditionError("scale factor must be positive")
    if k == 1:
        return g
    nodes = tuple((n, d.scale(k)) for n, d in g.nodes)
    nm = dict(nodes)
    edges = []
    for e in g.edges:
        ne = _remake(nm, e, _scaled_params(e, k))
        if ne.remainder != tuple(k * x for x in e.remainder):
            raise PreconditionError("scaled remainder is not the elementwise multiple")
        edges.append(ne)
    return ReductionGraph(nodes, tuple(edges), g.root, g.provenance)


# -- partial scaling ---------------------------------------------------------

@dataclass(frozen=True)
class PartialScalePattern:
    """One of the three safe patterns.

    mode "edge":   every input and output of edge `edge`;
    mode "inputs": every input of a binary or arithmetic edge (k coprime to its output);
    mode "linear": the input of a linear edge plus the listed outputs.
    """

    mode: str
    edge: int
    outputs: tuple[str, ...] = ()

    def nodes(self, g: ReductionGraph) -> set[str]:
        e = g.edges[self.edge]
        if self.mode == "edge":
            return set(e.inputs) | set(e.outputs)
        if self.mode == "inputs":
            if e.kind not in FULL_KINDS:
                raise PreconditionError("input-only scaling needs a binary or arithmetic edge")
            return set(e.inputs)
        if self.mode == "linear":
            if e.kind != "linear":
                raise PreconditionError("pattern 'linear' needs a linear edge")
            if not set(self.outputs) <= set(e.outputs):
                raise PreconditionError("listed nodes are not outputs of the edge")
            return set(e.inputs) | set(self.outputs)
        raise PreconditionError(f"unknown partial scaling mode {self.mode!r}")


def _input_scaled_params(e: ReductionEdge, k: int) -> tuple:
    p = e.params
    if e.kind in ("binary", "scaled-binary"):
        return (p[0], p[1] * k)
    if e.kind == "modified-arithmetic":
        return (p[0], p[1] * k, p[2], p[3] * k)
    return (p[0], p[1] * k, p[2] * k)


def partial_scale(g: ReductionGraph, pattern: PartialScalePattern | Iterable[str], k: int) -> ReductionGraph:
    """Scale a node subset by k, re-deriving every touched edge.

    Each touched edge must fall under one of the safe patterns; otherwise the
    operation is refused.
    """
    if k <= 0:
        raise PreconditionError("scale factor must be positive")
    chosen = pattern.nodes(g) if isinstance(pattern, PartialScalePattern) else set(pattern)
    nodes = tuple((n, d.scale(k) if n in chosen else d) for n, d in g.nodes)
    nm = dict(nodes)
    edges = []
    for idx, e in enumerate(g.edges):
        ins, outs = set(e.inputs), set(e.outputs)
        touched = (ins | outs) & chosen
        if not touched:
            edges.append(e)
        elif ins | outs <= chosen:
            edges.append(_remake(nm, e, _scaled_params(e, k)))
        elif e.kind in FULL_KINDS and ins <= chosen and not outs & chosen:
            a = e.params[0]
            if math.gcd(k, a) != 1:
                raise PreconditionError(f"k = {k} is not coprime to output {a} of edge {idx}")
            ne = _remake(nm, e, _input_scaled_params(e, k))
            if ne.weight != e.weight:
                raise PreconditionError(f"weight of edge {idx} changed")
            edges.append(ne)
        elif e.kind == "linear" and ins <= chosen:
            outs_vals = tuple(nm[o].a for o in e.outputs)
            edges.append(_remake(nm, e, (outs_vals, nm[e.inputs[0]].a)))
        else:
            raise PreconditionError(f"edge {idx} ({e.kind}) is not covered by a safe scaling pattern")
    out = ReductionGraph(nodes, tuple(edges), g.root, g.provenance)
    rep = validate(out)
    if not rep.ok:
        raise ValidationError(rep.violations)
    return out


# -- composition -------------------------------------------------------------

def compose(g: ReductionGraph, g2: ReductionGraph, at: str | None = None) -> ReductionGraph:
    """G o_a G': scale G by the root generator of G', G' by a, identify <a a'>."""
    at = g.root if at is None else at
    da = g.node(at)
    if not isinstance(da, Monogenic):
        raise PreconditionError(f"composition node {at!r} is not monogenic")
    a, a2 = da.a, g2.root_generator
    left, right = scale_graph(g, a2), scale_graph(g2, a)
    ids: dict[tuple[str, str], str] = {}
    nodes = []
    for n, d in left.nodes:
        ids[("L", n)] = f"n{len(nodes)}"
        nodes.append((ids[("L", n)], d))
    merged = ids[("L", at)]
    for n, d in right.nodes:
        if n == right.root:
            ids[("R", n)] = merged
        else:
            ids[("R", n)] = f"n{len(nodes)}"
            nodes.append((ids[("R", n)], d))

    def remap(side, e):
        return ReductionEdge(tuple(ids[(side, i)] for i in e.inputs),
                             tuple(ids[(side, o)] for o in e.outputs), e.kind, e.remainder, e.params)

    edges = [remap("L", e) for e in left.edges] + [remap("R", e) for e in right.edges]
    prov = [(ids[("L", n)], p) for n, p in left.provenance]
    prov += [(ids[("R", n)], p) for n, p in right.provenance if ids[("R", n)] != merged]
    prov = [(n, p) for n, p in prov if n != merged]
    prov.append((merged, f"identified <{a * a2}> = {a2}*<{a}> ~ {a}*<{a2}>"))
    return ReductionGraph(tuple(nodes), tuple(edges), ids[("L", left.root)], tuple(prov))


# -- artificial nodes and enrichment -------------------------------------------

def _fresh_id(nodes) -> str:
    used = {n for n, _ in nodes}
    i = len(nodes)
    while f"n{i}" in used:
        i += 1
    return f"n{i}"


def _attach(g: ReductionGraph, specs: Sequence[EdgeSpec], fresh: Sequence = ()) -> tuple[list, list]:
    by_key = {}
    for n, d in g.nodes:
        by_key.setdefault(_desc_key(d), n)
    nodes = list(g.nodes)
    fresh_keys = {_desc_key(d): None for d in fresh}

    def nid(d):
        key = _desc_key(d)
        if key in fresh_keys:
            if fresh_keys[key] is None:
                fresh_keys[key] = _fresh_id(nodes)
                nodes.append((fresh_keys[key], d))
            return fresh_keys[key]
        if key not in by_key:
            by_key[key] = _fresh_id(nodes)
            nodes.append((by_key[key], d))
        return by_key[key]

    edges = []
    for s in specs:
        ins = tuple(nid(d) for d in s.inputs)
        outs = tuple(nid(d) for d in s.outputs)
        params = s.params if s.kind != "explicit" else (s.remainder,)
        edges.append(ReductionEdge(ins, outs, s.kind, s.remainder, params))
    return nodes, edges


def add_artificial_node(g: ReductionGraph, b: int, attach: EdgeSpec | Sequence[EdgeSpec]) -> ReductionGraph:
    """Add <b>, b in the span of the monogenic nodes, connected by the given edges."""
    mono = [d.a for _, d in g.nodes if isinstance(d, Monogenic)]
    if b <= 0 or not numcore.closure_bits(mono, b) >> b & 1:
        raise PreconditionError(f"{b} is not a combination of monogenic nodes {mono}")
    specs = [attach] if isinstance(attach, EdgeSpec) else list(attach)
    if not any(_desc_key(Monogenic(b)) in map(_desc_key, s.inputs + s.outputs) for s in specs):
        raise PreconditionError(f"no attached edge touches <{b}>")
    nodes, new_edges = _attach(g, specs, fresh=[Monogenic(b)])
    out = build_graph(nodes, list(g.edges) + new_edges, None, g.provenance)
    rep = validate(out)
    if not rep.ok:
        raise ValidationError(rep.violations)
    return out


def enrich(g: ReductionGraph, e: int, e2: EdgeSpec, new_nodes: Sequence | None = None) -> ReductionGraph:
    old = g.edges[e]
    if old.weight != e2.weight:
        raise PreconditionError(f"weights differ: {old.weight} vs {e2.weight}")
    old_in = [_desc_key(g.node(n)) for n in old.inputs]
    old_out = {_desc_key(g.node(n)) for n in old.outputs}
    new_in = [_desc_key(d) for d in e2.inputs]
    if not {_desc_key(d) for d in e2.outputs} <= old_out:
        raise PreconditionError("outputs of the new edge must be outputs of the old edge")
    if not set(old_in) <= set(new_in):
        raise PreconditionError("inputs of the old edge must be inputs of the new edge")
    added = [d for d in e2.inputs if _desc_key(d) not in set(old_in)]
    if new_nodes is not None and sorted(map(_desc_key, new_nodes)) != sorted(map(_desc_key, added)):
        raise PreconditionError("new_nodes must be exactly the added inputs")
    # old inputs and outputs map to their existing ids; added inputs are fresh nodes
    ids = {_desc_key(g.node(n)): n for n in old.inputs + old.outputs}
    nodes = list(g.nodes)
    ins = []
    for d in e2.inputs:
        key = _desc_key(d)
        if key not in ids:
            ids[key] = _fresh_id(nodes)
            nodes.append((ids[key], d))
        ins.append(ids[key])
    outs = [ids[_desc_key(d)] for d in e2.outputs]
    params = e2.params if e2.kind != "explicit" else (e2.remainder,)
    edges = list(g.edges)
    edges[e] = ReductionEdge(tuple(ins), tuple(outs), e2.kind, e2.remainder, params)
    out = ReductionGraph(tuple(nodes), tuple(edges), g.root, g.provenance)
    rep = validate(out)
    if not rep.ok:
        raise ValidationError(rep.violations)
    return out
