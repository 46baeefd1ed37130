"""Acceptance suite: one test per numbered criterion, each printing a PASS or FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the lines.
"""
import math
import random
import time
from fractions import Fraction
from pathlib import Path

from sympy import factorint

import naive
import randgraphs
from redgraph import families as fam
from redgraph import numcore
from redgraph.dsl import format_script, load, parse, script_from_graph
from redgraph.edges import apery_edge, binary_edge, graph_from_specs, modified_arithmetic_edge
from redgraph.errors import PreconditionError
from redgraph.genpoly import mean
from redgraph.graph import (Monogenic, analyze, apery_from_graph, balance, canonical_form,
                            deconstruct, truncated_span, validate)
from redgraph.transform import compose, enrich, scale_graph

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def report(n: int, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def mismatches(instances) -> list:
    return [(i.params, r.get("checks", r.get("violations")))
            for i, r in ((i, fam.verify_instance(i)) for i in instances) if not r["ok"]]


# -- the graphs of suites 1 to 10, shared with the Hilbert consistency check ------

def sylvester_graphs():
    for b in range(3, 41):
        for a in range(2, b):
            if math.gcd(a, b) == 1:
                yield (a, b), graph_from_specs([binary_edge(a, b)]), (a, b)


def four_five_six_graph():
    return load((SCRIPTS / "four_five_six.rg").read_text()).graph


def two_roots_graphs():
    return [load((SCRIPTS / name).read_text()).graph for name in ("root9.rg", "root20.rg")]


def arithmetic_cases():
    for a in range(3, 21):
        for h in range(1, 4):
            for k in range(1, a + 1):
                for d in range(-2, 6):
                    if d == 0 or math.gcd(a, abs(d)) != 1 or a + k * d <= 0:
                        continue
                    try:
                        spec = modified_arithmetic_edge(a, d, k, h)
                    except PreconditionError:
                        continue  # negative remainder
                    yield (a, d, k, h), spec


def arith_geo_instances():
    for variant in (1, 2):
        for a in range(2, 6):
            for b in range(1, 6):
                if math.gcd(a, b) != 1 or (variant == 1 and b > a):
                    continue
                for d in (x for x in range(1, b + 1) if b % x == 0):
                    for n in range(1, 5):
                        yield fam.arith_geo_sums(a, b, d, n, variant)


def shifted_instances():
    for n in range(2, 129):
        for k in range(fam.nu2(n) + 2):
            yield fam.shifted_powers_of_two(n, k)


def extended_triangular_instances():
    for n in range(1, 21):
        for k in range(3, 9):
            yield fam.extended_triangular(n, k)


DIVISOR_NS = (4, 8, 9, 12, 25, 27)


def divisor_instances():
    for n in DIVISOR_NS:
        for t in (1, 2):
            try:
                yield fam.divisor_function(n, t)
            except PreconditionError:
                continue  # fails the gcd condition


def almost_divisible_instances():
    for n in range(2, 501):
        for variant in ("le", "ge"):
            yield fam.almost_divisible(n, variant)


def fibonacci_instances():
    for i in range(2, 10):
        for k in range(3, 10):
            yield fam.fibonacci_triplet(i, k)


# -- criteria ---------------------------------------------------------------------

def test_criterion_01_sylvester_grid():
    t0 = time.perf_counter()
    bad, count = [], 0
    for (a, b), g, gens in sylvester_graphs():
        r = analyze(g)
        f = a * b - a - b
        d = numcore.gaps_oracle(gens)
        count += 1
        if not (r.frobenius == f == d.frobenius and 2 * r.genus == f + 1 and r.genus == d.genus):
            bad.append((a, b))
    dt = time.perf_counter() - t0
    report(1, not bad and dt < 5, f"{count} coprime pairs, {len(bad)} mismatches, {dt:.2f} s")


def test_criterion_02_four_five_six():
    r = analyze(four_five_six_graph())
    ok = r.apery == (0, 5, 6, 11) and r.frobenius == 7 and r.genus == 4
    ok = ok and list(r.apery) == naive.apery([4, 5, 6], 4)
    report(2, ok, f"Ap = {list(r.apery)}, F = {r.frobenius}, g = {r.genus}")


def test_criterion_03_two_graphs_one_semigroup():
    left, right = two_roots_graphs()
    gens = [9, 12, 15, 20]
    ap_l, ap_r = apery_from_graph(left), apery_from_graph(right)
    ok = ap_l == numcore.apery_oracle(gens, left.root_generator) == naive.apery(gens, 9)
    ok = ok and ap_r == numcore.apery_oracle(gens, right.root_generator) == naive.apery(gens, 20)
    weights = [sorted(e.weight for e in g.edges) for g in (left, right)]
    ok = ok and weights == [[3, 3], [4, 5]] and balance(left) == balance(right) == 1
    ok = ok and analyze(left).frobenius == analyze(right).frobenius == 46
    report(3, ok, f"roots 9 and 20, weights {weights}, both Apery sets equal brute force")


def test_criterion_04_modified_arithmetic_sweep():
    t0 = time.perf_counter()
    bad, count, negative = [], 0, 0
    for (a, d, k, h), spec in arithmetic_cases():
        gens = [a] + [h * a + j * d for j in range(1, k + 1)]
        count += 1
        negative += d < 0
        if sorted(spec.remainder) != numcore.apery_oracle(gens, a):
            bad.append((a, d, k, h))
    dt = time.perf_counter() - t0
    report(4, not bad and dt < 30 and negative > 0,
           f"{count} cases ({negative} with d < 0), {len(bad)} mismatches, {dt:.2f} s")


def test_criterion_05_arith_geo_sums():
    insts = list(arith_geo_instances())
    bad = mismatches(insts)
    no_cf = [i.params for i in insts if i.closed_form_frobenius is None]
    report(5, not bad and not no_cf and len(insts) > 0,
           f"{len(insts)} instances over both variants, {len(bad)} mismatches")


def test_criterion_06_shifted_powers():
    insts = list(shifted_instances())
    bad = mismatches(insts)
    spot = analyze(fam.shifted_powers_of_two(8, 2).graph).frobenius
    branches = {i.params["k"] <= fam.nu2(i.params["n"]) for i in insts}
    report(6, not bad and spot == 23 and branches == {True, False},
           f"{len(insts)} instances, {len(bad)} mismatches, F(8, 2) = {spot}")


def test_criterion_07_extended_triangular():
    insts = list(extended_triangular_instances())
    bad = mismatches(insts)
    parities = {i.params["n"] % 2 for i in insts}
    report(7, not bad and parities == {0, 1}, f"{len(insts)} instances, {len(bad)} mismatches")


def test_criterion_08_divisor_function():
    insts = list(divisor_instances())
    bad = mismatches(insts)
    max_bad = []
    for inst in insts:
        t = inst.params["t"]
        for p, k in factorint(inst.params["n"]).items():
            edge = apery_edge(fam.sigma(p ** k, t), fam.repunit_generators(p, k, t))
            if max(edge.remainder) != fam.repunit_max(p, k, t):
                max_bad.append((p, k, t))
    used = sorted({(i.params["n"], i.params["t"]) for i in insts})
    report(8, not bad and not max_bad and len(insts) > 0,
           f"instances {used}, {len(bad)} mismatches, {len(max_bad)} repunit max mismatches")


def test_criterion_09_almost_divisible():
    insts = list(almost_divisible_instances())
    bad = mismatches(insts)
    le = analyze(fam.almost_divisible(12, "le").graph).frobenius
    ge = analyze(fam.almost_divisible(12, "ge").graph).frobenius
    report(9, not bad and (le, ge) == (5, 29),
           f"{len(insts)} instances, {len(bad)} mismatches, F(12) = {le} and {ge}")


def test_criterion_10_fibonacci_literal():
    """Compares each graph with <F_i, F_{i+2}, F_k> exactly as stated."""
    total, bad = 0, []
    spanned_ok = 0
    for inst in fibonacci_instances():
        i, k = inst.params["i"], inst.params["k"]
        total += 1
        r = analyze(inst.graph)
        literal = [fam.fibonacci(i), fam.fibonacci(i + 2), fam.fibonacci(k)]
        if math.gcd(*literal) != 1 or r.apery != tuple(numcore.apery_oracle(literal, r.root_generator)):
            bad.append((i, k))
        spanned_ok += fam.verify_instance(inst)["ok"]
    report(10, not bad,
           f"literal <F_i, F_i+2, F_k>: {total - len(bad)}/{total} match; "
           f"graphs equal <F_i, F_i+2, F_i+k> in {spanned_ok}/{total}; mismatched (i, k): {bad}")


def test_criterion_11_brauer_shockley():
    rng = random.Random(11)
    done, bad = 0, []
    while done < 200:
        d = rng.randint(1, 6)
        m = rng.randint(1, 3)
        head = [d * rng.randint(2, 12) for _ in range(m)]
        an = rng.randint(2, 25)
        gens = head + [an]
        if math.gcd(*gens) != 1 or an in head:
            continue
        try:
            bs = fam.brauer_shockley(gens, d)
        except PreconditionError:
            continue
        done += 1
        truth = numcore.gaps_oracle(gens)
        r = analyze(bs.right.graph)
        if not (bs.ok and r.frobenius == truth.frobenius and r.genus == truth.genus):
            bad.append((gens, d))
    report(11, not bad, f"{done} instances, {len(bad)} violations")


def edge_asymmetry(g) -> Fraction:
    return sum((2 * mean(e.remainder) - max(e.remainder) for e in g.edges), Fraction(0))


def test_criterion_12_structural_laws():
    rng = random.Random(12)
    failures = []
    for trial in range(100):
        g = randgraphs.random_graph(rng)
        h = randgraphs.random_graph(rng)
        while math.gcd(g.root_generator, h.root_generator) != 1:
            h = randgraphs.random_graph(rng)  # root composition is numerical only for coprime roots
        k = rng.randint(2, 5)
        # scaling
        s = scale_graph(g, k)
        rem_ok = sorted(tuple(sorted(e.remainder)) for e in s.edges) == \
            sorted(tuple(sorted(k * x for x in e.remainder)) for e in g.edges)
        if not (rem_ok and balance(s) == k * balance(g) and edge_asymmetry(s) == k * edge_asymmetry(g)):
            failures.append((trial, "scaling"))
        # root composition
        a, a2 = g.root_generator, h.root_generator
        c = compose(g, h)
        rc, rg, rh = analyze(c), analyze(g), analyze(h)
        bound = 200
        left, right = truncated_span(g, bound), truncated_span(h, bound)
        summed = sorted({a2 * x + a * y for x in left for y in right if a2 * x + a * y <= bound})
        if not (balance(c) == balance(g) * balance(h) and rc.asymmetry == a2 * rg.asymmetry + a * rh.asymmetry
                and truncated_span(c, bound) == summed):
            failures.append((trial, "compose"))
        # enrichment of a binary edge into a modified arithmetic edge
        while True:
            p, q = rng.randint(2, 15), rng.randint(2, 30)
            hh, kk = rng.randint(1, 2), rng.randint(1, 4)
            if math.gcd(p, q) != 1 or q == hh * p:
                continue
            base = graph_from_specs([binary_edge(p, q)])
            try:
                e2 = enrich(base, 0, modified_arithmetic_edge(p, q - hh * p, kk, hh))
            except PreconditionError:
                continue
            break
        if not (balance(e2) == balance(base) == 1 and validate(e2).ok):
            failures.append((trial, "enrich"))
        # elimination order
        order = deconstruct(g, lambda ready: rng.choice(ready))
        if analyze(g, 2, order) != analyze(g, 2):
            failures.append((trial, "order"))
    report(12, not failures, f"100 random graphs, failures: {failures}")


def test_criterion_13_telescopic_symmetric():
    rng = random.Random(13)
    bad = []
    for _ in range(100):
        inst = randgraphs.random_telescopic(rng)
        r = analyze(inst.graph)
        if not (r.asymmetry == 0 and numcore.classify_symmetry(list(inst.generators)) == "symmetric"
                and fam.verify_instance(inst)["ok"]):
            bad.append(inst.generators)
    report(13, not bad, f"100 telescopic sequences, {len(bad)} failures")


def hilbert_gap_consistency(g, gens) -> bool:
    r = analyze(g, 2)
    rg = r.root_generator
    bound = max(r.frobenius, 0) + 2 * rg
    member = numcore.membership_table(list(gens), bound)
    if r.hilbert.expand(bound) != [int(x) for x in member]:
        return False
    genus = Fraction(1 - rg, 2) + sum((mean(e.remainder) for e in g.edges), Fraction(0))
    if genus.denominator != 1 or genus != len(r.gap_poly):
        return False
    gaps = [x for x in range(bound + 1) if not member[x]]
    return list(r.power_sums) == [sum(x ** j for x in gaps) for j in range(3)]


def all_suite_graphs():
    for _, g, gens in sylvester_graphs():
        yield g, gens
    yield four_five_six_graph(), (4, 5, 6)
    for g in two_roots_graphs():
        yield g, (9, 12, 15, 20)
    for (a, d, k, h), spec in arithmetic_cases():
        yield graph_from_specs([spec]), [a] + [h * a + j * d for j in range(1, k + 1)]
    for gen in (arith_geo_instances, shifted_instances, extended_triangular_instances,
                divisor_instances, almost_divisible_instances, fibonacci_instances):
        for inst in gen():
            yield inst.graph, inst.generators


def test_criterion_14_hilbert_and_gaps():
    count, bad = 0, []
    for g, gens in all_suite_graphs():
        count += 1
        if not hilbert_gap_consistency(g, gens):
            bad.append(tuple(gens))
    report(14, not bad, f"{count} graphs, {len(bad)} inconsistent")


def family_instances_for_dsl():
    for gen in (arith_geo_instances, shifted_instances, extended_triangular_instances,
                divisor_instances, fibonacci_instances):
        yield from gen()
    for n in range(2, 80):
        yield fam.almost_divisible(n, "le")
        yield fam.almost_divisible(n, "ge")
    yield fam.geometric(2, 3, 3)
    yield fam.composed_geometric(2, 3, 5, 7, 1, 2)
    yield fam.compound([2, 3], [5, 7])
    yield fam.special_triplet(4, 9, 6)
    yield fam.telescopic([8, 12, 10, 15])
    yield fam.triangular(5)
    yield fam.tetrahedral_mod6(6)
    yield fam.brauer_shockley([6, 10, 15], 2).right


def test_criterion_15_dsl():
    text = (SCRIPTS / "three_edge.rg").read_text()
    asm = load(text)
    r = analyze(asm.graph, 2)
    gens = [6, 15, 10, 14, 31]
    ok = r.apery == tuple(numcore.apery_oracle(gens, 6)) and r.frobenius == numcore.frobenius_oracle(gens)
    ok = ok and r.genus == numcore.gaps_oracle(gens).genus
    printed = format_script(parse(text))
    ok = ok and format_script(parse(printed)) == printed and parse(printed) == parse(text)
    count, bad = 0, []
    for inst in family_instances_for_dsl():
        count += 1
        script = format_script(script_from_graph(inst.graph, inst.generators))
        again = load(script)
        if canonical_form(again.graph) != canonical_form(inst.graph) or \
                format_script(parse(script)) != script:
            bad.append((inst.name, inst.params))
    ok = ok and not bad and isinstance(asm.graph.node(asm.graph.root), Monogenic)
    report(15, ok, f"example script F = {r.frobenius}, g = {r.genus}; "
                   f"{count} family scripts re-assembled, {len(bad)} differ")
