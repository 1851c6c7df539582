"""Seshadri machinery: multiplicities, moving/extended values, profiles, jets.

Core claims:
    - asymptotic multiplicity reads off the exceptional coefficient upstairs
      and equals the smallest first coordinate of the body for big classes
    - moving Seshadri values agree exactly with the nef-cone route on nef
      classes and match the worked piecewise answer on the segment
    - the extended function is homogeneous and glues continuously
    - the exact profile reproduces the worked pieces, breakpoints, slope jump,
      and empirical concavity of its segment
    - jet certificates obey the strict threshold and base-locus verdicts match
      their certificates
"""

import random
from fractions import Fraction

import pytest

from noct import (
    BaseLocusPosition,
    DomainError,
    InputError,
    base_locus_membership,
    asymptotic_multiplicity,
    blowup_setup,
    divisor,
    extended_seshadri,
    infinitesimal_body,
    is_nef,
    jets_separated,
    moving_seshadri,
    seshadri_profile,
    seshadri_via_nef_cone,
)
from conftest import random_big_class


def F_t(t):
    t = Fraction(t)
    return divisor(t, 1 - 2 * t)


def D_t(t):
    t = Fraction(t)
    return divisor(1 - t, 1, t)


class TestAsymptoticMultiplicity:
    def test_thin_class_on_the_curve(self, blp):
        model, points = blp
        assert asymptotic_multiplicity(model, points["on-E"], F_t("1/4")) == Fraction(1, 2)

    def test_nef_pullback(self, blp):
        model, points = blp
        assert asymptotic_multiplicity(model, points["on-E"], divisor(1, 0)) == 0

    def test_generic_point_misses_the_curve(self, blp):
        model, points = blp
        assert asymptotic_multiplicity(model, points["generic"], F_t("1/4")) == 0

    def test_equals_min_first_coordinate(self, blp):
        model, points = blp
        rng = random.Random(301)
        for label in ("on-E", "generic"):
            for _ in range(15):
                d = random_big_class(rng, model)
                mult = asymptotic_multiplicity(model, points[label], d)
                body = infinitesimal_body(model, points[label], d)
                assert body.min_x() == mult

    def test_boundary_classes_allowed(self, blp):
        model, points = blp
        assert asymptotic_multiplicity(model, points["on-E"], divisor(0, 1)) == 1
        assert asymptotic_multiplicity(model, points["on-E"], divisor(1, -1)) == 0

    def test_not_pseudoeffective_rejected(self, blp):
        model, points = blp
        with pytest.raises(DomainError):
            asymptotic_multiplicity(model, points["on-E"], divisor(-1, 0))


class TestSeshadriValues:
    def test_segment_values(self, blp):
        model, points = blp
        assert moving_seshadri(model, points["on-E"], F_t("3/5")) == Fraction(1, 5)
        assert moving_seshadri(model, points["on-E"], F_t("3/4")) == Fraction(1, 4)

    @pytest.mark.parametrize("degree", [1, 2, 4])
    def test_plane(self, p2, degree):
        model, points = p2
        assert moving_seshadri(model, points["generic"], divisor(degree)) == degree

    def test_nef_cone_route_examples(self, example5):
        model, _ = example5
        assert seshadri_via_nef_cone(model, D_t("3/5"), 1) == Fraction(1, 5)
        assert seshadri_via_nef_cone(model, D_t("2/3"), 1) == Fraction(1, 3)
        assert seshadri_via_nef_cone(model, divisor(1, 2, 1), 1) == 0

    def test_nef_cone_route_requires_nef(self, example5):
        model, _ = example5
        with pytest.raises(DomainError):
            seshadri_via_nef_cone(model, divisor(1, 0, 0), 1)

    def test_two_routes_agree_on_nef_classes(self, blp):
        model, points = blp
        setup = blowup_setup(model, points["on-E"])
        rng = random.Random(307)
        for _ in range(25):
            d = random_big_class(rng, model)
            if not is_nef(model, d):
                continue
            direct = moving_seshadri(model, points["on-E"], d)
            upstairs = seshadri_via_nef_cone(setup.model, setup.pullback(d), setup.e_index)
            assert direct == upstairs

    def test_extended_values_on_the_segment(self, blp):
        model, points = blp
        assert extended_seshadri(model, points["on-E"], F_t("1/4")) == Fraction(-1, 2)
        assert extended_seshadri(model, points["on-E"], F_t("1/2")) == 0
        assert extended_seshadri(model, points["on-E"], F_t(1)) == 0

    def test_extended_homogeneous(self, blp):
        model, points = blp
        rng = random.Random(311)
        for _ in range(15):
            d = random_big_class(rng, model)
            base = extended_seshadri(model, points["on-E"], d)
            for k in (2, 5):
                assert extended_seshadri(model, points["on-E"], k * d) == k * base

    def test_zero_class_rejected(self, blp):
        model, points = blp
        with pytest.raises(DomainError):
            extended_seshadri(model, points["on-E"], divisor(0, 0))


class TestProfiles:
    def test_worked_segment(self, blp):
        model, points = blp
        profile = seshadri_profile(model, points["on-E"], divisor(0, 1), divisor(1, -1))
        assert profile.pieces.pieces() == [
            (Fraction(0), Fraction(2, 3), Fraction(2), Fraction(-1)),
            (Fraction(2, 3), Fraction(1), Fraction(-1), Fraction(1)),
        ]
        assert profile.breakpoints() == (Fraction(1, 2), Fraction(2, 3))
        assert profile.regime_breakpoints == (Fraction(1, 2),)

    def test_continuity_at_the_regime_change(self, blp):
        model, points = blp
        profile = seshadri_profile(model, points["on-E"], divisor(0, 1), divisor(1, -1))
        t = Fraction(1, 2)
        assert profile.value(t) == 0
        eps = Fraction(1, 1000)
        assert profile.value(t - eps) == -2 * eps
        assert profile.value(t + eps) == 2 * eps

    def test_slope_jump_at_the_kink(self, blp):
        model, points = blp
        profile = seshadri_profile(model, points["on-E"], divisor(0, 1), divisor(1, -1))
        slopes = profile.pieces.slopes
        assert slopes == (2, -1)

    def test_concave_on_this_segment(self, blp):
        model, points = blp
        profile = seshadri_profile(model, points["on-E"], divisor(0, 1), divisor(1, -1))
        slopes = profile.pieces.slopes
        assert all(a >= b for a, b in zip(slopes, slopes[1:]))

    def test_sampled_mode(self, blp):
        model, points = blp
        samples = [Fraction(k, 10) for k in range(11)]
        profile = seshadri_profile(
            model, points["on-E"], divisor(0, 1), divisor(1, -1), exact=False, samples=samples
        )
        assert profile.sampled
        assert profile.value(Fraction(3, 10)) == Fraction(-2, 5)
        exact = seshadri_profile(model, points["on-E"], divisor(0, 1), divisor(1, -1))
        for t in samples:
            assert profile.value(t) == exact.value(t)

    def test_generic_point_profile_is_different(self, blp):
        # at a point off the curve the function never goes negative
        model, points = blp
        profile = seshadri_profile(model, points["generic"], divisor(0, 1), divisor(1, -1))
        lo, hi = profile.domain
        assert profile.value(hi) == 0
        ts = [lo + (hi - lo) * Fraction(k, 7) for k in range(8)]
        assert all(profile.value(t) >= 0 for t in ts)

    def test_outside_cone_rejected(self, blp):
        model, points = blp
        with pytest.raises(DomainError):
            seshadri_profile(model, points["on-E"], divisor(-1, 0), divisor(-2, 1))

    def test_exact_and_samples_conflict(self, blp):
        model, points = blp
        with pytest.raises(InputError):
            seshadri_profile(
                model,
                points["on-E"],
                divisor(0, 1),
                divisor(1, -1),
                exact=True,
                samples=[Fraction(1, 2)],
            )


class TestJets:
    def test_certified_case(self, p2):
        model, points = p2
        certificate = jets_separated(model, points["generic"], divisor(6), 3)
        assert certificate.certified
        assert certificate.xi == 6
        assert certificate.threshold == 5

    def test_boundary_case_not_certified(self, p2):
        model, points = p2
        assert not jets_separated(model, points["generic"], divisor(3), 1).certified

    def test_small_class_not_certified(self, blp):
        model, points = blp
        certificate = jets_separated(model, points["on-E"], divisor(2, -1), 0)
        assert not certificate.certified
        assert certificate.xi == 1

    def test_requires_integral_class(self, p2):
        model, points = p2
        with pytest.raises(InputError):
            jets_separated(model, points["generic"], divisor("1/2"), 0)

    def test_requires_canonical_class(self, p2):
        from noct import SurfaceModel

        model, points = p2
        stripped = SurfaceModel(
            name="p2-nok",
            rank=1,
            basis_labels=("H",),
            intersection_matrix=((Fraction(1),),),
            effective_generators=model.effective_generators,
            nef_generators=model.nef_generators,
        )
        with pytest.raises(InputError):
            jets_separated(stripped, points["generic"], divisor(2), 0)


class TestBaseLocus:
    def test_three_verdicts(self, blp):
        model, points = blp
        on_curve = base_locus_membership(model, points["on-E"], divisor(1, 0))
        assert on_curve.verdict == BaseLocusPosition.IN_BPLUS_NOT_BMINUS
        assert on_curve.xi == 0 and on_curve.asymptotic_mult == 0

        thin = base_locus_membership(model, points["on-E"], F_t("1/4"))
        assert thin.verdict == BaseLocusPosition.IN_BMINUS
        assert thin.asymptotic_mult == Fraction(1, 2)

        ample = base_locus_membership(model, points["on-E"], divisor(2, -1))
        assert ample.verdict == BaseLocusPosition.OUTSIDE_BPLUS
        assert ample.xi == 1

    def test_certificates_are_consistent(self, blp):
        model, points = blp
        rng = random.Random(313)
        for _ in range(20):
            d = random_big_class(rng, model)
            verdict = base_locus_membership(model, points["on-E"], d)
            assert not (verdict.xi > 0 and verdict.asymptotic_mult > 0)
            if verdict.verdict == BaseLocusPosition.OUTSIDE_BPLUS:
                assert verdict.xi > 0
            if verdict.verdict == BaseLocusPosition.IN_BMINUS:
                assert verdict.asymptotic_mult > 0
