"""Shared fixtures: built-in models and random rational class generators."""

import random
from fractions import Fraction

import pytest

from noct import DivisorClass, builtin_model, is_big


@pytest.fixture(scope="session")
def p2():
    return builtin_model("p2")


@pytest.fixture(scope="session")
def blp():
    return builtin_model("blp-p2")


@pytest.fixture(scope="session")
def example5():
    return builtin_model("example5")


def random_rational(rng: random.Random, lo=0, hi=3, denominator_bound=8) -> Fraction:
    denominator = rng.randint(1, denominator_bound)
    numerator = rng.randint(lo * denominator, hi * denominator)
    return Fraction(numerator, denominator)


def random_big_class(rng: random.Random, model, attempts=200) -> DivisorClass:
    """A random big class: a positive rational combination of effective rays."""
    gens = model.effective_generators
    for _ in range(attempts):
        coeffs = [random_rational(rng) for _ in gens]
        candidate = model.zero_class()
        for c, g in zip(coeffs, gens):
            candidate = candidate + c * g
        if is_big(model, candidate):
            return candidate
    raise AssertionError(f"could not sample a big class on {model.name}")
