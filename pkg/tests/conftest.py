import random
from fractions import Fraction

import pytest

from polyzeta import Precision, lambda_from_z_string, lambda_to_word


@pytest.fixture
def prec30():
    return Precision(30)


@pytest.fixture
def prec40():
    return Precision(40)


@pytest.fixture
def prec50():
    return Precision(50)


def random_z_entries(rng: random.Random, max_weight: int = 8, max_depth: int = 4):
    """A convergent signed exponent string (no leading unsigned 1)."""
    while True:
        depth = rng.randint(1, max_depth)
        exps = []
        budget = max_weight
        for j in range(depth):
            hi = budget - (depth - j - 1)
            if hi < 1:
                break
            exps.append(rng.randint(1, min(hi, 4)))
            budget -= exps[-1]
        if len(exps) < depth:
            continue
        entries = tuple(e * rng.choice((1, -1)) for e in exps)
        if entries[0] != 1:
            return entries


def word_pool(count: int, seed: int, max_weight: int = 8):
    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < count:
        word = lambda_to_word(lambda_from_z_string(random_z_entries(rng, max_weight)))
        if word not in seen:
            seen.add(word)
            out.append(word)
    return out


def frac(p, q=1) -> Fraction:
    return Fraction(p, q)
