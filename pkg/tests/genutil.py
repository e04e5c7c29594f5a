"""Seeded random instance generators shared across the test modules."""

import random
from fractions import Fraction

from treespectra import GaussianRational, Multigraph


def rand_fraction(rng: random.Random, zero_ok: bool = True) -> Fraction:
    num = rng.randint(-6, 6)
    if not zero_ok:
        while num == 0:
            num = rng.randint(-6, 6)
    return Fraction(num, rng.randint(1, 5))


def rand_weight(
    rng: random.Random,
    complex_ok: bool = False,
    radical_ok: bool = False,
) -> GaussianRational:
    re = rand_fraction(rng)
    im = rand_fraction(rng) if complex_ok else Fraction(0)
    if re == 0 and im == 0:
        re = Fraction(1)
    rad = rng.choice((1, 2, 3, 5)) if radical_ok else 1
    return GaussianRational(re, im, rad)


def random_connected_multigraph(
    rng: random.Random,
    max_vertices: int = 5,
    max_pairs: int = 6,
    complex_ok: bool = True,
    radical_ok: bool = False,
    loops_ok: bool = True,
    zero_potential: bool = False,
) -> Multigraph:
    """Connected multigraph with random rational data.

    A random spanning tree guarantees connectivity; extra pairs, possibly
    loops or parallels, fill up to the pair budget.
    """
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    vertices = [
        (names[i], Fraction(0) if zero_potential else rand_fraction(rng))
        for i in range(n)
    ]
    pairs = []
    for i in range(1, n):
        j = rng.randrange(i)
        pairs.append((names[j], names[i], rand_weight(rng, complex_ok, radical_ok)))
    extra = rng.randint(0, max(0, max_pairs - len(pairs)))
    for _ in range(extra):
        a = rng.randrange(n)
        b = rng.randrange(n)
        if a == b and not loops_ok:
            continue
        pairs.append((names[a], names[b], rand_weight(rng, complex_ok, radical_ok)))
    return Multigraph.build(vertices, pairs)


def random_tree(
    rng: random.Random,
    max_vertices: int = 8,
    complex_ok: bool = True,
    radical_ok: bool = False,
    zero_potential: bool = False,
) -> Multigraph:
    n = rng.randint(1, max_vertices)
    names = [f"t{i}" for i in range(n)]
    vertices = [
        (names[i], Fraction(0) if zero_potential else rand_fraction(rng))
        for i in range(n)
    ]
    pairs = [
        (names[rng.randrange(i)], names[i], rand_weight(rng, complex_ok, radical_ok))
        for i in range(1, n)
    ]
    return Multigraph.build(vertices, pairs)


def random_cyclic_multigraph(rng: random.Random, **kw) -> Multigraph:
    while True:
        g = random_connected_multigraph(rng, **kw)
        if not g.is_acyclic():
            return g
