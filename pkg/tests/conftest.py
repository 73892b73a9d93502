"""Shared helpers for the test suite.

Randomized checks draw instances from the harness generator with fixed
seeds, so every run exercises the identical inputs.
"""

from fractions import Fraction

import pytest

from diffmod.exactla import PrimeField, Rationals
from diffmod.harness import InstanceRecipe, derive_seed, generate


@pytest.fixture
def qq():
    return Rationals()


@pytest.fixture
def fp():
    return PrimeField()


def seeded_instances(field, count, seed, d=2, strategies=None, **sizes):
    """Deterministic list of generated modules cycling over strategies."""
    if strategies is None:
        strategies = (
            "compressed-random-complex",
            "conjugated-fixture",
            "direct-sum",
            "koszul-product",
        )
    out = []
    for idx in range(count):
        recipe = InstanceRecipe(
            d=d,
            field=field,
            strategy=strategies[idx % len(strategies)],
            seed=derive_seed(seed, idx),
            **sizes,
        )
        out.append(generate(recipe))
    return out


def naive_rank(rows):
    """Plain fraction Gaussian elimination, independent of the library."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][c]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def brute_pattern(shifts, caps, m):
    """Membership oracle: which generators contribute a monomial at m."""
    out = []
    for j, (shift, cap) in enumerate(zip(shifts, caps)):
        ok = True
        for x, a, c in zip(m, shift, cap):
            e = x - a
            if e < 0 or (c is not None and e > c):
                ok = False
                break
        if ok:
            out.append(j)
    return tuple(out)
