"""Germ valuation engine, witness sections, and the monomial oracle.

Core claims:
    - the chart algorithm reproduces the hand-traced vectors and satisfies
      nu_2 + ... + nu_n <= nu_1 on every output
    - the valuation is multiplicative on products of germs
    - witness germs realize the inverted-simplex vertex vectors in every
      dimension and degree
    - the oracle body for O(d) on the plane is the inverted simplex of size d,
      is stable in the level m, and its interior rational points of
      denominator q are hit by scaled monomial vectors at level q
"""

import math
import random
from fractions import Fraction

import pytest

from noct import DomainError, InputError, ResourceError
from noct.germs import (
    GermPolynomial,
    ValuationVector,
    inverted_simplex_witnesses,
    monomial_oracle_body,
    oracle_polygon,
    parse_germ,
    valuation_vector,
)


def random_germ(rng: random.Random, n: int, max_degree: int, max_terms: int = 6) -> GermPolynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exponent = tuple(rng.randint(0, max_degree) for _ in range(n))
        if sum(exponent) > max_degree:
            continue
        terms[exponent] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    if not terms:
        terms[(0,) * n] = Fraction(1)
    germ = GermPolynomial.from_terms(n, terms)
    if germ.is_zero():
        germ = GermPolynomial.constant(n, 1)
    return germ


class TestValuationVector:
    def test_unit_germ(self):
        assert valuation_vector(GermPolynomial.constant(2, 1)).nu == (0, 0)

    def test_coordinate_germs(self):
        assert valuation_vector(GermPolynomial.monomial(2, (1, 0))).nu == (1, 1)
        assert valuation_vector(GermPolynomial.monomial(2, (0, 1))).nu == (1, 0)

    @pytest.mark.parametrize("a,b", [(0, 3), (2, 0), (3, 2), (1, 4)])
    def test_plane_monomials(self, a, b):
        assert valuation_vector(GermPolynomial.monomial(2, (a, b))).nu == (a + b, a)

    def test_three_variables(self):
        germ = parse_germ("u1 + u2^2", 3)
        assert valuation_vector(germ).nu == (1, 1, 0)

    def test_pure_last_coordinate_power(self):
        # lowest form c*u_n^m dehomogenizes to a constant: all later entries 0
        assert valuation_vector(GermPolynomial.monomial(3, (0, 0, 4))).nu == (4, 0, 0)

    def test_zero_germ_rejected(self):
        with pytest.raises(DomainError):
            valuation_vector(GermPolynomial.constant(2, 0))

    def test_tail_bound_holds_on_random_germs(self):
        rng = random.Random(2024)
        for _ in range(300):
            n = rng.randint(2, 4)
            nu = valuation_vector(random_germ(rng, n, 6)).nu
            assert sum(nu[1:]) <= nu[0]

    def test_multiplicative_on_products(self):
        rng = random.Random(2025)
        for _ in range(100):
            n = rng.randint(2, 4)
            s = random_germ(rng, n, 4)
            t = random_germ(rng, n, 4)
            left = valuation_vector(s * t)
            right = valuation_vector(s) + valuation_vector(t)
            assert left.nu == right.nu

    def test_linear_coordinate_change(self):
        # swapping u1, u2 swaps the roles of the two flag directions
        swap = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
        germ = GermPolynomial.monomial(2, (1, 0))
        assert valuation_vector(germ.substitute_linear(swap)).nu == (1, 0)
        mixed = parse_germ("u1 + u2", 2)
        sheared = mixed.substitute_linear([[1, 0], [1, 1]])  # u1 -> u1, u2 -> u1 + u2
        assert valuation_vector(sheared).nu == (1, 0)

    def test_invalid_vector_rejected(self):
        from noct import InternalError

        with pytest.raises(InternalError):
            ValuationVector((1, 2))


class TestWitnesses:
    def test_plane_degree_one(self):
        witnesses = inverted_simplex_witnesses(2, 1)
        assert [v.nu for _, v in witnesses] == [(0, 0), (1, 0), (1, 1)]
        for germ, expected in witnesses:
            assert valuation_vector(germ).nu == expected.nu

    def test_threefold_degree_one(self):
        witnesses = inverted_simplex_witnesses(3, 1)
        assert [v.nu for _, v in witnesses] == [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 0, 1)]
        for germ, expected in witnesses:
            assert valuation_vector(germ).nu == expected.nu

    @pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2), (4, 1)])
    def test_vectors_do_not_depend_on_degree(self, n, d):
        witnesses = inverted_simplex_witnesses(n, d)
        assert len(witnesses) == n + 1
        e1 = tuple(int(k == 0) for k in range(n))
        expected = [(0,) * n, e1] + [
            tuple(e1[k] + int(k == i - 1) for k in range(n)) for i in range(2, n + 1)
        ]
        assert [v.nu for _, v in witnesses] == expected
        for germ, vector in witnesses:
            assert valuation_vector(germ).nu == vector.nu

    def test_scaled_witness_hull_matches_oracle(self):
        # multiplying witnesses together realizes every vertex of the size-d
        # simplex as an actual degree-d germ
        for d in (2, 3):
            witnesses = inverted_simplex_witnesses(2, d)
            germs = [g for g, _ in witnesses]
            power = lambda g, k: math.prod([g] * k, start=GermPolynomial.constant(2, 1))
            assert valuation_vector(power(germs[1], d)).nu == (d, 0)
            assert valuation_vector(power(germs[2], d)).nu == (d, d)


class TestOracle:
    def test_plane_degree_one(self):
        assert oracle_polygon(1, 1) == oracle_polygon(1, 1)
        assert [tuple(v) for v in monomial_oracle_body(2, 1, 1)] == [
            (0, 0),
            (1, 0),
            (1, 1),
        ]

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_plane_bodies_are_inverted_simplices(self, d):
        from noct import InvertedSimplex

        assert oracle_polygon(d, 1) == InvertedSimplex(d).polygon()

    @pytest.mark.parametrize("d,m", [(1, 2), (1, 3), (2, 2), (3, 2)])
    def test_stability_in_the_level(self, d, m):
        assert oracle_polygon(d, m) == oracle_polygon(d, 1)

    def test_threefold_body(self):
        vertices = {tuple(v) for v in monomial_oracle_body(3, 1, 2)}
        assert vertices == {(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 0, 1)}

    def test_monotone_in_the_level(self):
        coarse = oracle_polygon(2, 1)
        fine = oracle_polygon(2, 3)
        assert fine.contains_polygon(coarse)

    def test_interior_rational_points_are_hit(self):
        # every rational point of the size-1 simplex with denominator q, off
        # the outer face, comes from a monomial vector at level q
        for q in (1, 2, 3, 4):
            scale = Fraction(1, q)
            hit = set()
            for a in range(q + 1):
                for b in range(a + 1):
                    vec = valuation_vector(GermPolynomial.monomial(2, (b, a - b)))
                    hit.add(vec.scaled(scale))
            for i in range(q + 1):
                for j in range(i + 1):
                    point = (Fraction(i, q), Fraction(j, q))
                    if point[0] == 1:
                        continue
                    assert point in hit

    def test_resource_cap(self):
        with pytest.raises(ResourceError):
            monomial_oracle_body(4, 10, 10, cap=1000)

    def test_bad_arguments(self):
        with pytest.raises(InputError):
            monomial_oracle_body(1, 1, 1)


class TestGermParsing:
    def test_cli_example(self):
        germ = parse_germ("u1^2*u2 + 3*u1^4", 2)
        assert dict(germ.terms) == {(2, 1): Fraction(1), (4, 0): Fraction(3)}

    def test_rational_coefficients_and_signs(self):
        germ = parse_germ("1/2*u1 - u2^3 + 2", 2)
        assert dict(germ.terms) == {
            (1, 0): Fraction(1, 2),
            (0, 3): Fraction(-1),
            (0, 0): Fraction(2),
        }

    def test_variable_out_of_range(self):
        with pytest.raises(InputError):
            parse_germ("u3", 2)

    def test_garbage_rejected(self):
        with pytest.raises(InputError):
            parse_germ("u1 + + u2", 2)
        with pytest.raises(InputError):
            parse_germ("x^2", 2)

    def test_roundtrip_through_str(self):
        germ = parse_germ("u1^2*u2 - 2/3*u2^5 + 1", 2)
        assert parse_germ(str(germ), 2) == germ
