"""Built-in surface models with verified cone data.

Names accepted by the registry:

  p2            the projective plane, basis (H)
  blp-p2        the plane blown up at one point, basis (H, E)
  hirzebruch:n  the n-th Hirzebruch surface, basis (C, f) with C.C = -n
  example5      the plane blown up at a point and then at a point of the
                exceptional curve, in the negative-curve basis (E1, E2, E3)

Each point-carrying model also ships the cone data of its blow-up at that
point, which is what makes infinitesimal computations possible: those cones
record which curves through the point become negative upstairs and cannot be
inferred from the lattice.

On example5 the nef cone is generated by H' = E1 + 2*E2 + E3 together with
H' + E3 and E2 + E3.  Rays of the form D - eps*E2 with D on the face spanned
by H' and E2 + E3 leave the nef cone through the face spanned by H' and
H' + E3 while D.E1 <= D.E3, and through the face spanned by H' + E3 and
E2 + E3 after that; both facts follow from the pairing table and are pinned
down in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import InputError
from .lattice import (
    BlowupCones,
    DivisorClass,
    PointProfile,
    SurfaceModel,
    divisor,
)

BUILTIN_NAMES = ("p2", "blp-p2", "example5", "hirzebruch:n")


def _p2() -> tuple[SurfaceModel, dict[str, PointProfile]]:
    model = SurfaceModel(
        name="p2",
        rank=1,
        basis_labels=("H",),
        intersection_matrix=((Fraction(1),),),
        negative_curves=(),
        effective_generators=(divisor(1),),
        nef_generators=(divisor(1),),
        canonical_class=divisor(-3),
        dimension_of_variety=2,
    )
    # blow-up at any point: basis (H, E); the line through the point becomes
    # the boundary of both cones
    cones = BlowupCones(
        negative_curves=(divisor(0, 1),),
        effective_generators=(divisor(0, 1), divisor(1, -1)),
        nef_generators=(divisor(1, 0), divisor(1, -1)),
    )
    generic = PointProfile(
        label="generic", multiplicities=(), flag_incidence=(0,), blowup=cones
    )
    return model, {"generic": generic}


def _blp_p2() -> tuple[SurfaceModel, dict[str, PointProfile]]:
    model = SurfaceModel(
        name="blp-p2",
        rank=2,
        basis_labels=("H", "E"),
        intersection_matrix=(
            (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(-1)),
        ),
        negative_curves=(divisor(0, 1),),
        effective_generators=(divisor(0, 1), divisor(1, -1)),
        nef_generators=(divisor(1, 0), divisor(1, -1)),
        canonical_class=divisor(-3, 1),
        dimension_of_variety=2,
    )
    # point on E: upstairs (basis H, E, E2) the negative curves are the strict
    # transform of E, the new exceptional curve, and the strict transform of
    # the line whose direction at the centre is the chosen point of E
    on_e = PointProfile(
        label="on-E",
        multiplicities=(1,),
        flag_incidence=(0, 0, 0),
        blowup=BlowupCones(
            negative_curves=(divisor(0, 1, -1), divisor(0, 0, 1), divisor(1, -1, -1)),
            effective_generators=(divisor(0, 1, -1), divisor(0, 0, 1), divisor(1, -1, -1)),
            nef_generators=(divisor(1, 0, 0), divisor(2, -1, -1), divisor(1, -1, 0)),
        ),
    )
    # generic point off E: upstairs this is the plane blown up at two distinct
    # points, with the line through both of them the third negative curve
    generic = PointProfile(
        label="generic",
        multiplicities=(0,),
        flag_incidence=(0, 0, 0),
        blowup=BlowupCones(
            negative_curves=(divisor(0, 1, 0), divisor(0, 0, 1), divisor(1, -1, -1)),
            effective_generators=(divisor(0, 1, 0), divisor(0, 0, 1), divisor(1, -1, -1)),
            nef_generators=(divisor(1, 0, 0), divisor(1, -1, 0), divisor(1, 0, -1)),
        ),
    )
    return model, {"on-E": on_e, "generic": generic}


def _example5() -> tuple[SurfaceModel, dict[str, PointProfile]]:
    model = SurfaceModel(
        name="example5",
        rank=3,
        basis_labels=("E1", "E2", "E3"),
        intersection_matrix=(
            (Fraction(-2), Fraction(1), Fraction(0)),
            (Fraction(1), Fraction(-1), Fraction(1)),
            (Fraction(0), Fraction(1), Fraction(-1)),
        ),
        negative_curves=(divisor(1, 0, 0), divisor(0, 1, 0), divisor(0, 0, 1)),
        effective_generators=(divisor(1, 0, 0), divisor(0, 1, 0), divisor(0, 0, 1)),
        nef_generators=(divisor(1, 2, 1), divisor(1, 2, 2), divisor(0, 1, 1)),
        canonical_class=divisor(-2, -4, -3),
        dimension_of_variety=2,
    )
    return model, {}


def _hirzebruch(n: int) -> tuple[SurfaceModel, dict[str, PointProfile]]:
    if n < 0:
        raise InputError("hirzebruch surfaces need n >= 0")
    negative = (divisor(1, 0),) if n > 0 else ()
    model = SurfaceModel(
        name=f"hirzebruch:{n}",
        rank=2,
        basis_labels=("C", "f"),
        intersection_matrix=(
            (Fraction(-n), Fraction(1)),
            (Fraction(1), Fraction(0)),
        ),
        negative_curves=negative,
        effective_generators=(divisor(1, 0), divisor(0, 1)),
        nef_generators=(divisor(0, 1), divisor(1, n)),
        canonical_class=divisor(-2, -(n + 2)),
        dimension_of_variety=2,
    )
    return model, {}


def builtin_model(name: str) -> tuple[SurfaceModel, dict[str, PointProfile]]:
    """Look up a built-in model and its named point profiles."""
    if name == "p2":
        return _p2()
    if name == "blp-p2":
        return _blp_p2()
    if name == "example5":
        return _example5()
    if name.startswith("hirzebruch:"):
        suffix = name.split(":", 1)[1]
        if not suffix.isdigit():
            raise InputError(f"bad hirzebruch index in {name!r}")
        return _hirzebruch(int(suffix))
    raise InputError(
        f"unknown model {name!r}; built-ins are {', '.join(BUILTIN_NAMES)}"
    )


def is_builtin(name: str) -> bool:
    try:
        builtin_model(name)
        return True
    except InputError:
        return False
