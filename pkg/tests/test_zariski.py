"""Zariski decomposition, volume, cone classification, and thresholds.

Core claims:
    - the decomposition satisfies orthogonality, negative definiteness,
      nonnegativity, and P + N = D on every output
    - results do not depend on the order of the negative-curve list
    - volume is the self-intersection of the positive part, zero iff not big
    - the bigness threshold agrees with the vanishing of the volume
"""

import random
from fractions import Fraction

import pytest

from noct import (
    ConePosition,
    DomainError,
    SurfaceModel,
    bigness_threshold,
    classify,
    divisor,
    is_big,
    is_nef,
    volume,
    zariski_decompose,
)
from conftest import random_big_class, random_rational


def check_invariants(model, d, decomposition):
    p = decomposition.positive_part
    recomposed = p
    for idx, coeff in decomposition.negative_part:
        assert coeff > 0
        recomposed = recomposed + coeff * model.negative_curves[idx]
        assert model.pair(p, model.negative_curves[idx]) == 0
    assert recomposed == d
    for curve in model.negative_curves:
        assert model.pair(p, curve) >= 0
    for gen in model.nef_generators:
        assert model.pair(p, gen) >= 0
    support = [model.negative_curves[i] for i in sorted(decomposition.support)]
    gram = model.gram(support)
    from noct.linalg import is_negative_definite

    if support:
        assert is_negative_definite(gram)


class TestDecomposition:
    def test_pullback_of_thin_class(self, example5):
        model, _ = example5
        d = divisor("3/4", 1, "1/4")
        decomposition = zariski_decompose(model, d)
        assert decomposition.positive_part == divisor("1/4", "1/2", "1/4")
        assert decomposition.negative_part == ((0, Fraction(1, 2)), (1, Fraction(1, 2)))
        check_invariants(model, d, decomposition)

    def test_nef_class_is_its_own_positive_part(self, example5):
        model, _ = example5
        d = divisor(0, 1, 1)
        decomposition = zariski_decompose(model, d)
        assert decomposition.positive_part == d
        assert decomposition.negative_part == ()

    def test_two_curve_support(self, example5):
        model, _ = example5
        d = divisor(1, Fraction(1, 2), 1)  # pullback of H minus 3/2 the exceptional
        decomposition = zariski_decompose(model, d)
        assert sorted(decomposition.support) == [0, 2]
        assert decomposition.coefficient(0) == Fraction(3, 4)
        assert decomposition.coefficient(2) == Fraction(1, 2)
        assert model.pair(decomposition.positive_part, model.negative_curves[1]) == Fraction(1, 4)
        check_invariants(model, d, decomposition)

    def test_not_pseudoeffective_rejected(self, blp):
        model, _ = blp
        with pytest.raises(DomainError):
            zariski_decompose(model, divisor(-1, 0))

    def test_order_independence(self, example5):
        model, _ = example5
        permuted = SurfaceModel(
            name="example5-permuted",
            rank=3,
            basis_labels=model.basis_labels,
            intersection_matrix=model.intersection_matrix,
            negative_curves=tuple(reversed(model.negative_curves)),
            effective_generators=tuple(reversed(model.effective_generators)),
            nef_generators=model.nef_generators,
        )
        rng = random.Random(23)
        for _ in range(25):
            d = random_big_class(rng, model)
            forward = zariski_decompose(model, d)
            backward = zariski_decompose(permuted, d)
            assert forward.positive_part == backward.positive_part
            relabel = {0: 2, 1: 1, 2: 0}
            assert {relabel[i]: c for i, c in backward.negative_part} == dict(forward.negative_part)

    def test_invariants_on_random_classes(self, example5, blp):
        rng = random.Random(31)
        for model, _ in (example5, blp):
            for _ in range(40):
                d = random_big_class(rng, model)
                check_invariants(model, d, zariski_decompose(model, d))


class TestVolume:
    def test_plane_degree(self, p2):
        model, _ = p2
        assert volume(model, divisor(3)) == 9

    def test_thin_class_volume(self, example5):
        model, _ = example5
        assert volume(model, divisor("3/4", 1, "1/4")) == Fraction(1, 16)

    def test_boundary_nef_class(self, blp):
        model, _ = blp
        assert volume(model, divisor(1, -1)) == 0

    def test_equals_volume_of_positive_part(self, example5):
        model, _ = example5
        rng = random.Random(43)
        for _ in range(30):
            d = random_big_class(rng, model)
            p = zariski_decompose(model, d).positive_part
            assert volume(model, d) == volume(model, p)

    def test_monotone_along_rays(self, example5):
        model, _ = example5
        rng = random.Random(47)
        d = random_big_class(rng, model)
        f = divisor(0, 1, 1)
        limit = bigness_threshold(model, d, f)
        values = [
            volume(model, d - (limit * Fraction(k, 8)) * f) for k in range(8)
        ]
        assert all(a >= b for a, b in zip(values, values[1:]))


class TestClassify:
    def test_examples_on_the_one_point_model(self, blp):
        model, _ = blp
        assert classify(model, divisor(2, -1)) == ConePosition.AMPLE
        assert classify(model, divisor(1, 0)) == ConePosition.NEF_NOT_AMPLE
        assert classify(model, divisor(0, 2)) == ConePosition.PSEFF_NOT_BIG
        assert classify(model, divisor(1, 1)) == ConePosition.BIG_NOT_NEF
        assert classify(model, divisor(-1, 0)) == ConePosition.NOT_PSEFF
        assert classify(model, divisor(2, -3)) == ConePosition.NOT_PSEFF

    def test_big_not_nef(self, example5):
        model, _ = example5
        d = divisor("3/4", 1, "1/4")
        assert classify(model, d) == ConePosition.BIG_NOT_NEF

    def test_zero_class(self, blp):
        model, _ = blp
        assert classify(model, divisor(0, 0)) == ConePosition.NEF_NOT_AMPLE


class TestBignessThreshold:
    def test_plane_blown_up(self, blp):
        model, _ = blp
        for degree in (1, 2, 5):
            assert bigness_threshold(model, divisor(degree, 0), divisor(0, 1)) == degree

    def test_exceptional_direction(self, example5):
        model, _ = example5
        assert bigness_threshold(model, divisor(1, 2, 1), divisor(0, 1, 0)) == 2

    def test_first_curve_direction_matches_volume_vanishing(self, example5):
        # the threshold is where the volume polynomial 1 - t^2 vanishes
        model, _ = example5
        d = divisor(1, 2, 1)
        f = divisor(1, 0, 0)
        threshold = bigness_threshold(model, d, f)
        assert threshold == 1
        assert volume(model, d - threshold * f) == 0
        assert volume(model, d - (threshold - Fraction(1, 7)) * f) > 0

    def test_threshold_is_volume_vanishing_on_random_classes(self, example5):
        model, _ = example5
        rng = random.Random(59)
        for _ in range(20):
            d = random_big_class(rng, model)
            f = model.effective_generators[rng.randrange(3)]
            threshold = bigness_threshold(model, d, f)
            assert volume(model, d - threshold * f) == 0
            probe = threshold * Fraction(15, 16)
            if probe > 0:
                assert volume(model, d - probe * f) > 0

    def test_not_big_rejected(self, blp):
        model, _ = blp
        with pytest.raises(DomainError):
            bigness_threshold(model, divisor(0, 1), divisor(0, 1))


def test_nef_check_matches_cone_data(example5):
    model, _ = example5
    for gen in model.nef_generators:
        assert is_nef(model, gen)
    assert not is_nef(model, divisor(1, 0, 0))
    assert is_big(model, divisor(1, 2, 1))
