"""Edge-list scripts: tokenizer, recursive descent parser, printer and assembler.

A script is a sequence of `let` bindings and edge statements, each ending in
`;` (or `:`).  Values are exact integers; see README.md for the grammar.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from . import numcore
from .edges import (GraphBuilder, apery_edge, binary_edge, explicit_edge, infinite_arithmetic_edge,
                    linear_binary_edge, linear_edge, modified_arithmetic_edge, residue_edge, root_only)
from .errors import DSLError, InconsistencyError, PreconditionError, ValidationError
from .graph import (ArithmeticFamily, ExplicitFinite, Monogenic, ReductionGraph, ScaledRange,
                    Semigroup, truncated_span, validate)

# -- syntax tree -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Gcd:
    args: tuple
    pos: tuple = field(default=(0, 0), compare=False)


Expr = Union[Num, Var, Neg, BinOp, Gcd]


@dataclass(frozen=True)
class Infinity:
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class NodeExpr:
    """Range(step, count), Set(...), Family(base, diff, h, count), Semigroup(...)."""

    kind: str
    args: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ListArg:
    items: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Statement:
    name: str
    args: tuple
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Script:
    bindings: tuple[Let, ...]
    statements: tuple[Statement, ...]


EDGE_STATEMENTS = ("Binary", "Arithmetic", "Linear", "LinearBinary", "Residue", "Apery", "Explicit")
DIRECTIVES = ("generators", "expect_root")
NODE_KINDS = ("Range", "Set", "Family", "Semigroup")

# -- tokenizer -----------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^(),\[\];:=]|−)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    line, start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise DSLError(f"unexpected character {text[i]!r}", line, i - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            s = m.group()
            toks.append(Token(kind, "-" if s == "−" else s, line, i - start + 1))
        i = m.end()
    toks.append(Token("eof", "", line, i - start + 1))
    return toks


# -- parser --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.bound: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.col)

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            self.error(f"expected {want}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind == "op" or \
            (self.tok.kind == "name" and self.tok.text == text)

    def script(self) -> Script:
        lets, stmts = [], []
        while self.tok.kind != "eof":
            if self.tok.kind == "name" and self.tok.text == "let":
                lets.append(self.let())
            else:
                stmts.append(self.statement())
            if self.tok.text not in (";", ":"):
                self.error(f"expected ';' or ':', found {self.tok.text or 'end of input'!r}")
            self.i += 1
        return Script(tuple(lets), tuple(stmts))

    def let(self) -> Let:
        t = self.take("let")
        name = self.take(kind="name")
        if name.text in ("let", "gcd", "infinity"):
            self.error(f"{name.text!r} is reserved", name)
        self.take("=")
        e = self.expr()
        self.bound.add(name.text)
        return Let(name.text, e, (t.line, t.col))

    def statement(self) -> Statement:
        t = self.take(kind="name")
        if t.text not in EDGE_STATEMENTS + DIRECTIVES:
            self.error(f"unknown statement {t.text!r}", t)
        self.take("(")
        args = []
        if not self.at(")"):
            args.append(self.arg())
            while self.at(","):
                self.i += 1
                args.append(self.arg())
        self.take(")")
        return Statement(t.text, tuple(args), (t.line, t.col))

    def arg(self):
        t = self.tok
        if self.at("["):
            self.i += 1
            items = []
            if not self.at("]"):
                items.append(self.item())
                while self.at(","):
                    self.i += 1
                    items.append(self.item())
            self.take("]")
            return ListArg(tuple(items), (t.line, t.col))
        if t.kind == "name" and t.text == "infinity":
            self.i += 1
            return Infinity((t.line, t.col))
        return self.expr()

    def item(self):
        t = self.tok
        if t.kind == "name" and t.text in NODE_KINDS:
            self.i += 1
            self.take("(")
            args = [self.arg()]
            while self.at(","):
                self.i += 1
                args.append(self.arg())
            self.take(")")
            return NodeExpr(t.text, tuple(args), (t.line, t.col))
        return self.expr()

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            t = self.take()
            left = BinOp(t.text, left, self.term(), (t.line, t.col))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*"):
            t = self.take()
            left = BinOp("*", left, self.unary(), (t.line, t.col))
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            t = self.take()
            return Neg(self.unary(), (t.line, t.col))
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.at("^"):
            t = self.take()
            return BinOp("^", base, self.unary(), (t.line, t.col))
        return base

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text), (t.line, t.col))
        if t.kind == "name" and t.text == "gcd":
            self.i += 1
            self.take("(")
            args = [self.expr()]
            while self.at(","):
                self.i += 1
                args.append(self.expr())
            self.take(")")
            return Gcd(tuple(args), (t.line, t.col))
        if t.kind == "name":
            if t.text not in self.bound:
                self.error(f"unbound name {t.text!r}")
            self.i += 1
            return Var(t.text, (t.line, t.col))
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        self.error(f"expected an expression, found {t.text or 'end of input'!r}")


def parse(text: str) -> Script:
    return _Parser(text).script()


# -- printer -------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "neg": 3, "^": 4}


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return 5


def format_expr(e) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Gcd):
        return "gcd(" + ", ".join(format_expr(a) for a in e.args) + ")"
    if isinstance(e, Neg):
        inner = format_expr(e.operand)
        return "-" + (f"({inner})" if _prec(e.operand) < _PREC["neg"] else inner)
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        ls, rs = format_expr(e.left), format_expr(e.right)
        if e.op == "^":
            # right associative; the exponent may be a bare unary minus
            if _prec(e.left) <= p:
                ls = f"({ls})"
            if _prec(e.right) < _PREC["neg"]:
                rs = f"({rs})"
        else:
            if _prec(e.left) < p:
                ls = f"({ls})"
            if _prec(e.right) <= p:
                rs = f"({rs})"
        return f"{ls} {e.op} {rs}"
    if isinstance(e, Infinity):
        return "infinity"
    if isinstance(e, ListArg):
        return "[" + ", ".join(format_expr(x) for x in e.items) + "]"
    if isinstance(e, NodeExpr):
        return f"{e.kind}(" + ", ".join(format_expr(x) for x in e.args) + ")"
    raise TypeError(f"not a script value: {e!r}")


def format_script(s: Script) -> str:
    lines = [f"let {b.name} = {format_expr(b.expr)};" for b in s.bindings]
    lines += [f"{st.name}(" + ", ".join(format_expr(a) for a in st.args) + ");" for st in s.statements]
    return "\n".join(lines) + "\n"


# -- evaluation ------------------------------------------------------------------------

def _err(msg: str, node) -> DSLError:
    line, col = getattr(node, "pos", (0, 0))
    return DSLError(msg, line, col)


def evaluate(e, env: dict[str, int]) -> int:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.name not in env:
            raise _err(f"unbound name {e.name!r}", e)
        return env[e.name]
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    if isinstance(e, Gcd):
        return math.gcd(*(evaluate(a, env) for a in e.args))
    if isinstance(e, BinOp):
        x, y = evaluate(e.left, env), evaluate(e.right, env)
        if e.op == "+":
            return x + y
        if e.op == "-":
            return x - y
        if e.op == "*":
            return x * y
        if y < 0:
            raise _err(f"{x}^{y} is not an integer", e)
        return x ** y
    raise _err("expected an integer expression", e)


def bindings_env(s: Script) -> dict[str, int]:
    env: dict[str, int] = {}
    for b in s.bindings:
        env[b.name] = evaluate(b.expr, env)
    return env


def _nat(e, env, what: str, positive: bool = True) -> int:
    v = evaluate(e, env)
    if v < 0 or (positive and v == 0):
        raise _err(f"{what} must be {'positive' if positive else 'nonnegative'}, got {v}", e)
    return v


def _list(e, what: str) -> ListArg:
    if not isinstance(e, ListArg):
        raise _err(f"{what} must be a bracketed list", e)
    return e


def _node(item, env):
    if not isinstance(item, NodeExpr):
        return Monogenic(_nat(item, env, "node generator"))
    if item.kind == "Range":
        if len(item.args) != 2:
            raise _err("Range takes (step, count)", item)
        return ScaledRange(_nat(item.args[0], env, "step"), _nat(item.args[1], env, "count"))
    if item.kind == "Family":
        if len(item.args) != 4:
            raise _err("Family takes (base, diff, h, count)", item)
        base, diff, h = (evaluate(a, env) for a in item.args[:3])
        c = item.args[3]
        count = None if isinstance(c, Infinity) else _nat(c, env, "count")
        return ArithmeticFamily(base, diff, h, count)
    vals = [_nat(a, env, "element", positive=item.kind != "Set") for a in item.args]
    return Semigroup(tuple(vals)) if item.kind == "Semigroup" else ExplicitFinite(tuple(vals))


def _arity(st: Statement, lo: int, hi: int):
    if not lo <= len(st.args) <= hi:
        want = str(lo) if lo == hi else f"{lo} to {hi}"
        raise _err(f"{st.name} takes {want} arguments, got {len(st.args)}", st)


def statement_spec(st: Statement, env: dict[str, int]):
    """The EdgeSpec built by one edge statement."""
    a = st.args
    n = st.name
    if n == "Binary":
        _arity(st, 2, 2)
        return binary_edge(_nat(a[0], env, "output"), _nat(a[1], env, "input"))
    if n == "Arithmetic":
        _arity(st, 3, 4)
        out, d = _nat(a[0], env, "output"), evaluate(a[1], env)
        h = _nat(a[3], env, "h") if len(a) == 4 else 1
        if isinstance(a[2], Infinity):
            return infinite_arithmetic_edge(out, d, h)
        return modified_arithmetic_edge(out, d, _nat(a[2], env, "k"), h)
    if n in ("Linear", "LinearBinary"):
        _arity(st, 2, 2)
        outs = [_nat(x, env, "output") for x in _list(a[0], "outputs").items]
        b = _nat(a[1], env, "input")
        return linear_edge(outs, b) if n == "Linear" else linear_binary_edge(outs, b)
    if n == "Residue":
        _arity(st, 3, 5)
        table = [evaluate(x, env) for x in _list(a[2], "table").items]
        ins = [_node(x, env) for x in _list(a[3], "inputs").items] if len(a) >= 4 else None
        scale = _nat(a[4], env, "scale") if len(a) == 5 else 1
        return residue_edge(_nat(a[0], env, "output"), evaluate(a[1], env), table, ins, scale)
    if n == "Apery":
        _arity(st, 2, 3)
        gens = [_nat(x, env, "generator") for x in _list(a[1], "generators").items]
        scale = _nat(a[2], env, "scale") if len(a) == 3 else 1
        return apery_edge(_nat(a[0], env, "output"), gens, scale)
    if n == "Explicit":
        _arity(st, 3, 3)
        ins = [_node(x, env) for x in _list(a[0], "inputs").items]
        outs = [_node(x, env) for x in _list(a[1], "outputs").items]
        rem = [_nat(x, env, "remainder element", positive=False) for x in _list(a[2], "remainder").items]
        return explicit_edge(ins, outs, rem)
    raise _err(f"{n} is not an edge statement", st)


# -- assembly --------------------------------------------------------------------------

@dataclass(frozen=True)
class Assembly:
    graph: ReductionGraph
    implied_root: int
    generators: tuple[int, ...] | None = None
    expected_root: int | None = None


def assemble(s: Script) -> Assembly:
    """Build the graph; node identity is descriptor value.

    A value listed as input of a second edge gets a node of its own, since one
    node can feed only one edge.
    """
    env = bindings_env(s)
    b = GraphBuilder()
    gens = expect = None
    implied = 1
    for st in s.statements:
        if st.name == "generators":
            if not st.args:
                raise _err("generators needs at least one value", st)
            gens = tuple(_nat(x, env, "generator") for x in st.args)
            continue
        if st.name == "expect_root":
            _arity(st, 1, 1)
            expect = _nat(st.args[0], env, "root")
            continue
        try:
            spec = statement_spec(st, env)
        except PreconditionError as exc:
            line, col = st.pos
            raise PreconditionError(f"{line}:{col}: {st.name}: {exc}") from None
        for side in (spec.inputs, spec.outputs):
            if len(set(side)) != len(side):
                line, col = st.pos
                raise ValidationError([f"{line}:{col}: {st.name} lists the same node twice"])
        b.add(spec, separate_inputs=True)
        implied *= spec.weight
    if not b.edges:
        if expect is None:
            raise ValidationError(["script has no edges and no expect_root"])
        g = root_only(expect)
    else:
        sinks = [nid for nid, _ in b.nodes if all(nid not in e.inputs for e in b.edges)]
        listing = "; ".join(f"e{i}: {e.kind} {list(e.inputs)} -> {list(e.outputs)}"
                            for i, e in enumerate(b.edges))
        if not sinks:
            raise ValidationError([f"edges form a cycle ({listing})"])
        if len(sinks) > 1:
            raise ValidationError([f"ambiguous root: {len(sinks)} nodes without outgoing edges ({listing})"])
        try:
            g = b.build()
        except ValidationError as exc:
            raise ValidationError(exc.violations + [f"e{i}: {e.kind} {list(e.inputs)} -> {list(e.outputs)}"
                                                    for i, e in enumerate(b.edges)]) from None
    rep = validate(g)
    if not rep.ok:
        raise ValidationError(rep.violations + [f"e{i}: {e.kind} {list(e.inputs)} -> {list(e.outputs)}"
                                                for i, e in enumerate(g.edges)])
    if expect is not None and not (isinstance(g.node(g.root), Monogenic) and g.root_generator == expect):
        raise ValidationError([f"expected root <{expect}>, graph root is {g.node(g.root).label()}"])
    if gens is not None:
        _check_generators(g, gens)
    return Assembly(g, implied, gens, expect)


def _check_generators(g: ReductionGraph, gens: tuple[int, ...]):
    if numcore.gcd_set(gens) != 1:
        raise PreconditionError(f"declared generators {list(gens)} have gcd != 1")
    f = numcore.frobenius_oracle(gens)
    bound = max(f, 0) + 2 * max(gens) + 1
    member = numcore.membership_table(gens, bound)
    want = [x for x in range(bound + 1) if member[x]]
    got = truncated_span(g, bound)
    if got != want:
        diff = sorted(set(got) ^ set(want))
        raise InconsistencyError(f"graph spans a different set than <{', '.join(map(str, gens))}>; "
                                 f"first difference at {diff[0]}")


def load(text: str) -> Assembly:
    return assemble(parse(text))


# -- emitting scripts from graphs ----------------------------------------------------------

def lit(v: int):
    return Num(v) if v >= 0 else Neg(Num(-v))


def _node_item(d):
    if isinstance(d, Monogenic):
        return lit(d.a)
    if isinstance(d, ScaledRange):
        return NodeExpr("Range", (lit(d.step), lit(d.count)))
    if isinstance(d, ArithmeticFamily):
        c = Infinity() if d.count is None else lit(d.count)
        return NodeExpr("Family", (lit(d.base), lit(d.diff), lit(d.h), c))
    if isinstance(d, Semigroup):
        return NodeExpr("Semigroup", tuple(map(lit, d.gens)))
    return NodeExpr("Set", tuple(map(lit, d.elements)))


def _ints(xs) -> ListArg:
    return ListArg(tuple(map(lit, xs)))


def script_from_graph(g: ReductionGraph, generators=None) -> Script:
    stmts = []
    for e in g.edges:
        p = e.params
        if e.kind in ("binary", "scaled-binary"):
            stmts.append(Statement("Binary", (lit(p[0]), lit(p[1]))))
        elif e.kind == "modified-arithmetic":
            stmts.append(Statement("Arithmetic", tuple(map(lit, p))))
        elif e.kind == "infinite-arithmetic":
            stmts.append(Statement("Arithmetic", (lit(p[0]), lit(p[1]), Infinity(), lit(p[2]))))
        elif e.kind in ("linear", "linear-binary"):
            name = "Linear" if e.kind == "linear" else "LinearBinary"
            stmts.append(Statement(name, (_ints(p[0]), lit(p[1]))))
        elif e.kind == "residue":
            ins = ListArg(tuple(_node_item(g.node(n)) for n in e.inputs))
            stmts.append(Statement("Residue", (lit(p[0]), lit(p[1]), _ints(p[2]), ins, lit(p[3]))))
        elif e.kind == "apery":
            stmts.append(Statement("Apery", (lit(p[0]), _ints(p[1]), lit(p[2]))))
        else:
            stmts.append(Statement("Explicit", (ListArg(tuple(_node_item(g.node(n)) for n in e.inputs)),
                                                ListArg(tuple(_node_item(g.node(n)) for n in e.outputs)),
                                                _ints(e.remainder))))
    root = g.node(g.root)
    if isinstance(root, Monogenic):
        stmts.append(Statement("expect_root", (lit(root.a),)))
    if generators is not None:
        stmts.append(Statement("generators", tuple(map(lit, generators))))
    return Script((), tuple(stmts))
