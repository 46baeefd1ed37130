from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

import naive
from redgraph import families as fam
from redgraph.dsl import (BinOp, Gcd, Neg, Num, Var, bindings_env, format_expr,
                          format_script, load, parse, script_from_graph)
from redgraph.errors import DSLError, InconsistencyError, PreconditionError, ValidationError
from redgraph.graph import analyze, balance, canonical_form

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"

EX33 = ("let a=2; let b=3; let c=5; Binary(a*b, b*c); Arithmetic(a*b, a*c−a*b, 2); "
        "Linear([a*b,b*c,c*a], a*b+b*c+c*a); generators(6,15,10,14,31);")


def test_three_edge_script():
    asm = load(EX33)
    r = analyze(asm.graph)
    assert r.root_generator == 6 and balance(asm.graph) == 1
    assert asm.implied_root == 6
    assert r.frobenius == naive.frobenius([6, 15, 10, 14, 31])
    assert list(r.apery) == naive.apery([6, 15, 10, 14, 31], 6)


def test_small_scripts():
    assert analyze(load("Binary(5,7);").graph).root_generator == 5
    r = analyze(load("Arithmetic(4,1,2);").graph)
    assert r.apery == (0, 5, 6, 11)
    assert load("Binary(4, 6): LinearBinary([4, 6], 5):").implied_root == 4


def test_expect_root():
    assert load((SCRIPTS / "root9.rg").read_text()).expected_root == 9
    with pytest.raises(ValidationError):
        load("Binary(5, 7); expect_root(7);")


def test_generators_mismatch():
    with pytest.raises(InconsistencyError):
        load("Binary(5, 7); generators(5, 8);")


def test_errors_carry_positions():
    with pytest.raises(DSLError) as exc:
        parse("Binary(5,\n  x);")
    assert (exc.value.line, exc.value.col) == (2, 3)
    with pytest.raises(DSLError, match="unexpected character"):
        parse("Binary(5, 7) $")
    with pytest.raises(DSLError, match="expected"):
        parse("Binary(5 7);")
    with pytest.raises(DSLError, match="unknown statement"):
        parse("Ternary(5, 7);")
    with pytest.raises(DSLError, match="must be positive"):
        load("Binary(5, 2 - 9);")
    with pytest.raises(DSLError, match="not an integer"):
        load("let a = 2 ^ -1; Binary(5, 7);")


def test_cycle_and_ambiguous_root():
    with pytest.raises(ValidationError, match="cycle"):
        load("Binary(5, 7); Binary(7, 5);")
    with pytest.raises(ValidationError, match="ambiguous root"):
        load("Binary(5, 7); Binary(11, 13);")
    with pytest.raises(PreconditionError):
        load("Linear([4, 5], 3);")


def test_precedence():
    env = bindings_env(parse("let a = 2 ^ 3 ^ 2; let b = -2 ^ 2; let c = 2 * 3 + 4; let d = gcd(12, 18) - 1;"))
    assert env == {"a": 512, "b": -4, "c": 10, "d": 5}


def test_infinity_and_nodes():
    s = parse("Arithmetic(4, 1, infinity); Explicit([Set(0, 6), Family(1, 2, 1, infinity)], [Semigroup(4, 5)], [0]);")
    assert format_script(s) == ("Arithmetic(4, 1, infinity);\n"
                                "Explicit([Set(0, 6), Family(1, 2, 1, infinity)], [Semigroup(4, 5)], [0]);\n")


def test_round_trip_files():
    for path in sorted(SCRIPTS.glob("*.rg")):
        s = parse(path.read_text())
        text = format_script(s)
        assert parse(text) == s
        assert format_script(parse(text)) == text


FAMILY_CASES = [
    fam.geometric(2, 3, 3), fam.composed_geometric(2, 3, 5, 7, 1, 2), fam.compound([2, 3], [5, 7]),
    fam.special_triplet(4, 9, 6), fam.fibonacci_triplet(5, 4), fam.telescopic([8, 12, 10, 15]),
    fam.triangular(5), fam.tetrahedral_mod6(6), fam.extended_triangular(7, 6),
    fam.arith_geo_sums(3, 2, 1, 3, 2), fam.shifted_powers_of_two(12, 3), fam.divisor_function(12, 1),
    fam.almost_divisible(12, "le"), fam.almost_divisible(12, "ge"),
    fam.brauer_shockley([6, 10, 15], 2).right, fam.almost_divisible(1, "le"),
]


@pytest.mark.parametrize("inst", FAMILY_CASES, ids=lambda i: f"{i.name}-{i.params}")
def test_family_scripts_reassemble(inst):
    text = format_script(script_from_graph(inst.graph, inst.generators))
    asm = load(text)
    assert canonical_form(asm.graph) == canonical_form(inst.graph)


names = st.sampled_from(["a", "b", "c"])


def exprs():
    leaf = st.one_of(st.integers(0, 20).map(Num), names.map(Var))
    return st.recursive(leaf, lambda sub: st.one_of(
        st.tuples(st.sampled_from("+-*^"), sub, sub).map(lambda t: BinOp(*t)),
        sub.map(Neg),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: Gcd(tuple(xs)))), max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(exprs())
def test_expression_round_trip(e):
    text = f"let a = 1; let b = 2; let c = 3; expect_root({format_expr(e)});"
    s = parse(text)
    assert s.statements[0].args[0] == e
    assert parse(format_script(s)) == s
