"""Random small valid total graphs for property tests."""
import math
import random

from redgraph import families as fam
from redgraph.edges import (binary_edge, graph_from_specs, linear_binary_edge, modified_arithmetic_edge)
from redgraph.errors import PreconditionError
from redgraph.graph import Monogenic


def _coprime_pair(rng):
    while True:
        a, b = rng.randint(2, 12), rng.randint(2, 15)
        if math.gcd(a, b) == 1 and a != b:
            return a, b


def random_telescopic(rng, length=None):
    """Grow a sequence by multiplying the prefix and appending a representable element."""
    length = length or rng.randint(2, 4)
    while True:
        seq = [1]
        for _ in range(length - 1):
            c = rng.randint(2, 6)
            seq = [x * c for x in seq]
            prefix = [x // c for x in seq]  # v must lie in <prefix> and be coprime to c
            choices = [sum(rng.randint(0, 4) * p for p in prefix) for _ in range(10)]
            choices = [v for v in choices if v > 1 and math.gcd(v, c) == 1]
            if not choices:
                break
            seq.append(rng.choice(choices))
        else:
            seq = sorted(set(seq), key=seq.index)
            if len(seq) == length and seq[0] > 1:
                try:
                    return fam.telescopic(seq)
                except PreconditionError:
                    pass


def random_graph(rng: random.Random):
    kind = rng.randrange(8)
    if kind == 0:
        a, b = _coprime_pair(rng)
        return graph_from_specs([binary_edge(a, b)])
    if kind == 1:
        while True:
            a, d, k, h = rng.randint(2, 12), rng.randint(-2, 5), rng.randint(1, 4), rng.randint(1, 2)
            if d and math.gcd(a, abs(d)) == 1:
                try:
                    return graph_from_specs([modified_arithmetic_edge(a, d, k, h)])
                except PreconditionError:
                    continue
    if kind == 2:
        a, b = _coprime_pair(rng)
        return fam.geometric(a, b, rng.randint(1, 3)).graph
    if kind == 3:
        a, b = _coprime_pair(rng)
        c, d = _coprime_pair(rng)
        try:
            return fam.compound([a, c], [b, d]).graph
        except PreconditionError:
            return fam.geometric(a, b, 2).graph
    if kind == 4:
        return random_telescopic(rng).graph
    if kind == 5:
        return fam.triangular(rng.randint(1, 8)).graph
    if kind == 6:
        n = 2 * rng.randint(1, 8)
        return fam.shifted_powers_of_two(n, rng.randint(0, fam.nu2(n) + 1)).graph
    return graph_from_specs([binary_edge(4, 6), linear_binary_edge([4, 6], 5)], Monogenic(4))
