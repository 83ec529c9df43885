"""Seeded random inputs for property checks (``verify`` suites and tests)."""

import random
from fractions import Fraction
from itertools import product

from .char_classes import BundleClass
from .cobordism import EMPTY, ChowElement, FormalVariety
from .graded_ring import Alphabet, GradedPoly, TriangularSystem, monomials_of_degree
from .partitions import enumerate_partitions
from .universal_cycles import StandardCycle, cycle_alphabet

__all__ = ["random_rational", "random_homogeneous", "random_poly", "random_bundle",
           "random_triangular_system", "random_variety", "random_chow_element",
           "random_standard_cycle", "seeded"]


def random_rational(rng, size=5, denominators=(1, 1, 1, 2, 3)):
    num = rng.randint(-size, size)
    return Fraction(num, rng.choice(denominators))


def random_homogeneous(rng, alphabet, truncation, degree, density=0.6, caps=None):
    terms = {}
    for e in monomials_of_degree(alphabet.weights, degree):
        if caps is not None and any(k is not None and x > k for x, k in zip(e, caps)):
            continue
        if rng.random() < density:
            terms[e] = random_rational(rng)
    return GradedPoly(alphabet, truncation, terms)


def random_poly(rng, alphabet, truncation, density=0.5, low=0, caps=None):
    out = GradedPoly.zero(alphabet, truncation)
    for n in range(low, truncation + 1):
        out = out + random_homogeneous(rng, alphabet, truncation, n, density, caps)
    return out


BASE_ALPHABET = Alphabet((("a", 1), ("b", 1), ("e", 2), ("f", 3)))


def random_bundle(rng, max_rank=4, max_truncation=6, alphabet=BASE_ALPHABET, truncation=None):
    rank = rng.randint(0, max_rank)
    T = truncation if truncation is not None else rng.randint(1, max_truncation)
    total = GradedPoly.one(alphabet, T)
    for i in range(1, min(rank, T) + 1):
        total = total + random_homogeneous(rng, alphabet, T, i, 0.5)
    return BundleClass(rank, total)


def random_triangular_system(rng, n_base=2, n_targets=3, truncation=4):
    base = [("x%d" % i, rng.randint(1, 2)) for i in range(1, n_base + 1)]
    targets = [("y%d" % j, rng.randint(1, 2)) for j in range(1, n_targets + 1)]
    alphabet = Alphabet(tuple(base + targets))
    tails, leading = [], []
    for j, (y, w) in enumerate(targets):
        allowed = Alphabet(tuple(base + targets[:j]))
        q = random_poly(rng, allowed, truncation, 0.4, low=w)
        tails.append(q.embed(alphabet))
        mu = Fraction(0)
        while not mu:
            mu = random_rational(rng)
        leading.append(mu)
    return TriangularSystem(alphabet, truncation, [y for y, _ in targets], leading, tails)


def random_variety(rng, d_max=3, n_cells=2, d=None):
    if d is None:
        d = rng.randint(1, d_max)
    cells = []
    for _ in range(rng.randint(1, n_cells)):
        dims, left = [], d
        while left:
            r = rng.randint(1, left)
            dims.append(r)
            left -= r
        cells.append(tuple(dims))
    return FormalVariety(d, tuple(cells))


def random_chow_element(rng, factors, density=0.4, coefficients=EMPTY, coefficient_bound=0):
    out = ChowElement._raw(tuple(factors), {}, coefficients, coefficient_bound)
    comps = {}
    for key in out.keys():
        alphabet, bound, caps = out.ring(key)
        comps[key] = random_poly(rng, alphabet, bound, density, caps=caps)
    return ChowElement(tuple(factors), comps, coefficients, coefficient_bound)


def _block_monomials(d):
    return [e for m in range(d + 1) for e in monomials_of_degree(tuple(range(1, d + 1)), m)]


def random_standard_cycle(rng, d, k, density=0.3, coefficients=EMPTY, coefficient_bound=0,
                          partition_density=0.7):
    table = {}
    blocks = _block_monomials(d)
    coef_monos = [e for m in range(coefficient_bound + 1)
                  for e in monomials_of_degree(coefficients.weights, m)] if len(coefficients) else [()]
    for I in enumerate_partitions(k):
        if rng.random() > partition_density:
            continue
        l = I.length
        alphabet = cycle_alphabet(d, l, coefficients)
        bound = d * l + coefficient_bound
        terms = {}
        for combo in product(blocks, repeat=l):
            for ce in coef_monos:
                if rng.random() < density:
                    e = tuple(x for J in combo for x in J) + tuple(ce)
                    terms[e] = random_rational(rng)
        table[I] = GradedPoly(alphabet, bound, terms)
    return StandardCycle(d, k, table, coefficients, coefficient_bound)


def seeded(seed):
    return random.Random(seed)
