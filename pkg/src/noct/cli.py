"""Command line interface.

Exit codes: 0 success, 2 bad input (models, classes, flags), 3 i/o failure,
4 violated domain precondition (e.g. polygon of a non-big class).
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import DomainError, InputError, NoctError
from .germs import monomial_oracle_body, parse_germ, valuation_vector
from .infinitesimal import (
    check_origin,
    infinitesimal_body,
    largest_simplex_constant,
)
from .lattice import DivisorClass, SurfaceModel, validate_model
from .modelio import (
    ParsedModel,
    emit_json,
    emit_model_data,
    load_model,
    polygon_svg,
    profile_rows,
    profile_svg,
    write_csv,
    write_text,
)
from .models import BUILTIN_NAMES
from .polygon import FlagSpec, okounkov_polygon, slice_at
from .positivity import (
    asymptotic_multiplicity,
    base_locus_membership,
    jets_separated,
    moving_seshadri,
    seshadri_profile,
    seshadri_via_nef_cone,
)
from .rational import parse_rational
from .zariski import classify, is_nef, volume, zariski_decompose


def _parse_class_arg(model: SurfaceModel, text: str) -> DivisorClass:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != model.rank:
        raise InputError(
            f"class {text!r} has {len(parts)} coordinates; model {model.name!r} has rank {model.rank}"
        )
    return DivisorClass(tuple(parse_rational(p) for p in parts))


def _resolve_curve_token(model: SurfaceModel, token: str) -> int:
    """A negative curve named by index, basis label, or coordinate vector."""
    token = token.strip()
    if token.isdigit():
        index = int(token)
        if 0 <= index < len(model.negative_curves):
            return index
        raise InputError(f"no negative curve with index {index}")
    if token in model.basis_labels:
        target = model.basis_class(model.basis_labels.index(token))
        for i, curve in enumerate(model.negative_curves):
            if curve == target:
                return i
        raise InputError(f"basis class {token!r} is not a negative curve")
    if "," in token:
        target = _parse_class_arg(model, token)
        for i, curve in enumerate(model.negative_curves):
            if curve == target:
                return i
        raise InputError(f"class {token!r} is not a negative curve")
    raise InputError(f"cannot resolve curve {token!r}")


def _parse_flag_args(model: SurfaceModel, curve_text: str, incidence_text: Optional[str]) -> FlagSpec:
    curve_text = curve_text.strip()
    if curve_text.startswith("curve="):
        curve_text = curve_text[len("curve="):]
    curve: object
    try:
        curve = _resolve_curve_token(model, curve_text)
    except InputError:
        if curve_text in model.basis_labels:
            curve = model.basis_class(model.basis_labels.index(curve_text))
        elif "," in curve_text:
            curve = _parse_class_arg(model, curve_text)
        else:
            raise
    incidence = {}
    if incidence_text:
        for chunk in incidence_text.split(","):
            if not chunk.strip():
                continue
            if "=" not in chunk:
                raise InputError(f"incidence entry {chunk!r} is not LABEL=INT")
            key, value = chunk.split("=", 1)
            index = _resolve_curve_token(model, key)
            try:
                incidence[index] = int(value)
            except ValueError:
                raise InputError(f"incidence value {value!r} is not an integer") from None
    return FlagSpec.of(model, curve, incidence)


def _parse_z_incidence(parsed: ParsedModel, point, text: Optional[str]):
    if text is None:
        return None
    if point.blowup is None:
        raise InputError("cannot interpret --z without blow-up cone data")
    size = len(point.blowup.negative_curves)
    values = [0] * size
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise InputError(f"--z entry {chunk!r} is not INDEX=INT")
        key, value = chunk.split("=", 1)
        values[int(key)] = int(value)
    return tuple(values)


def _result(command: str, started: float, outputs: dict, artifacts=()) -> dict:
    return {
        "command": command,
        "outputs": outputs,
        "artifacts": list(artifacts),
        "elapsed_ms": int((time.monotonic() - started) * 1000),
    }


def _load(args) -> ParsedModel:
    source = getattr(args, "file", None) or getattr(args, "model", None)
    if not source:
        raise InputError("pass --model NAME or --file PATH")
    return load_model(source)


def _add_model_options(parser: argparse.ArgumentParser, point: bool = False):
    parser.add_argument("--model", help=f"built-in or registered model name ({', '.join(BUILTIN_NAMES)})")
    parser.add_argument("--file", help="path to a model JSON file")
    if point:
        parser.add_argument("--point", help="named point profile of the model")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noct",
        description=(
            "Exact Newton-Okounkov polygons, Zariski decompositions, Seshadri "
            "functions, and base-locus certificates on explicit surface models."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("models", help="list built-in models")

    p = sub.add_parser("validate", help="validate a model file or built-in")
    _add_model_options(p)

    p = sub.add_parser("zariski", help="Zariski decomposition of a class")
    _add_model_options(p)
    p.add_argument("--class", dest="cls", required=True, help='coordinates "a/b,c,d/e"')

    p = sub.add_parser("classify", help="cone position and volume of a class")
    _add_model_options(p)
    p.add_argument("--class", dest="cls", required=True)

    p = sub.add_parser("polygon", help="Newton-Okounkov polygon for a flag")
    _add_model_options(p)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--flag", required=True, help="flag curve: index, basis label, or class")
    p.add_argument("--incidence", help="incidences at z, e.g. E1=1,E3=0")
    p.add_argument("--slice-at", dest="slice_t", help="emit the slice at this parameter instead")
    p.add_argument("--svg", help="write an SVG rendering here")

    p = sub.add_parser("inf-body", help="infinitesimal body at a point")
    _add_model_options(p, point=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--z", help="flag point incidences upstairs, e.g. 0=1")
    p.add_argument("--svg", help="write an SVG rendering here")

    p = sub.add_parser("xi", help="largest inverted simplex constant")
    _add_model_options(p, point=True)
    p.add_argument("--class", dest="cls", required=True)

    p = sub.add_parser("check", help="nefness / origin-membership criteria")
    _add_model_options(p, point=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--criterion", choices=("nef", "origin"), required=True)

    p = sub.add_parser("seshadri", help="moving Seshadri constant at a point")
    _add_model_options(p, point=True)
    p.add_argument("--class", dest="cls", required=True)

    p = sub.add_parser("seshadri-profile", help="Seshadri function along a segment")
    _add_model_options(p, point=True)
    p.add_argument("--from", dest="frm", required=True, help="segment start class")
    p.add_argument("--to", dest="to", required=True, help="segment end class")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--samples", help="comma list of parameters for sampled mode")
    p.add_argument("--csv", help="write t,value,regime rows here")
    p.add_argument("--svg", help="write an SVG rendering here")

    p = sub.add_parser("jets", help="jet-separation certificate for the adjoint class")
    _add_model_options(p, point=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("base-locus", help="augmented/restricted base locus membership")
    _add_model_options(p, point=True)
    p.add_argument("--class", dest="cls", required=True)

    p = sub.add_parser("valuate", help="valuation vector of a polynomial germ")
    p.add_argument("--n", type=int, required=True, help="number of local coordinates")
    p.add_argument("--germ", required=True, help='expression like "u1^2*u2 + 3*u1^4"')

    p = sub.add_parser("oracle", help="monomial oracle body for O(d) on P^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, default=1)

    return parser


def _run(args) -> dict:
    started = time.monotonic()
    command = args.subcommand

    if command == "models":
        return _result(command, started, {"builtin": list(BUILTIN_NAMES)})

    if command == "valuate":
        germ = parse_germ(args.germ, args.n)
        vector = valuation_vector(germ)
        return _result(command, started, {"germ": str(germ), "nu": list(vector.nu)})

    if command == "oracle":
        vertices = monomial_oracle_body(args.n, args.d, args.m)
        return _result(
            command,
            started,
            {"n": args.n, "d": args.d, "m": args.m, "vertices": [list(v) for v in vertices]},
        )

    parsed = _load(args)
    model = parsed.model

    if command == "validate":
        report = validate_model(model)
        outputs = {
            "model": model.name,
            "ok": report.ok,
            "checks": [
                {"check": e.check, "ok": e.ok, "witness": e.witness} for e in report.entries
            ],
        }
        if not report.ok:
            raise InputError(f"model {model.name!r} fails validation:\n{report}")
        return _result(command, started, outputs)

    if command == "zariski":
        d = _parse_class_arg(model, args.cls)
        decomposition = zariski_decompose(model, d)
        outputs = {
            "class": d,
            "P": decomposition.positive_part,
            "N": [
                {"curve": idx, "label": model.curve_label(idx), "coefficient": coeff}
                for idx, coeff in decomposition.negative_part
            ],
            "support": sorted(decomposition.support),
            "volume": model.self_intersection(decomposition.positive_part),
        }
        return _result(command, started, outputs)

    if command == "classify":
        d = _parse_class_arg(model, args.cls)
        position = classify(model, d)
        outputs = {"class": d, "position": position.value}
        if position.value not in ("not-pseff",):
            outputs["volume"] = volume(model, d)
        return _result(command, started, outputs)

    if command == "polygon":
        d = _parse_class_arg(model, args.cls)
        flag = _parse_flag_args(model, args.flag, args.incidence)
        if args.slice_t is not None:
            poly = slice_at(model, d, flag, parse_rational(args.slice_t))
        else:
            poly = okounkov_polygon(model, d, flag)
        artifacts = []
        if args.svg:
            write_text(polygon_svg(poly), args.svg)
            artifacts.append(args.svg)
        return _result(
            command,
            started,
            {"class": d, "vertices": poly, "area2": poly.area2()},
            artifacts,
        )

    def resolve_point(required: bool = True):
        label = getattr(args, "point", None)
        if not required and label is None and len(parsed.points) != 1:
            return None
        return parsed.point(label)

    point = None
    if command in ("inf-body", "xi", "seshadri", "seshadri-profile", "jets", "base-locus"):
        point = resolve_point()
    elif command == "check":
        point = resolve_point(required=args.criterion == "origin")

    if command == "inf-body":
        d = _parse_class_arg(model, args.cls)
        z = _parse_z_incidence(parsed, point, args.z)
        body = infinitesimal_body(model, point, d, z)
        artifacts = []
        if args.svg:
            write_text(polygon_svg(body), args.svg)
            artifacts.append(args.svg)
        return _result(command, started, {"class": d, "body": body}, artifacts)

    if command == "xi":
        d = _parse_class_arg(model, args.cls)
        result = largest_simplex_constant(model, point, d)
        return _result(command, started, {"class": d, "xi": result.xi, "body": result.body})

    if command == "check":
        d = _parse_class_arg(model, args.cls)
        if args.criterion == "nef":
            outputs = {"class": d, "criterion": "nef", "nef": is_nef(model, d)}
            if point is not None and point.blowup is not None:
                outputs["origin_in_body"] = check_origin(model, point, d)
            return _result(command, started, outputs)
        origin = check_origin(model, point, d)
        mult = asymptotic_multiplicity(model, point, d)
        return _result(
            command,
            started,
            {"class": d, "criterion": "origin", "origin_in_body": origin, "asymptotic_mult": mult},
        )

    if command == "seshadri":
        d = _parse_class_arg(model, args.cls)
        value = moving_seshadri(model, point, d)
        return _result(command, started, {"class": d, "moving_seshadri": value})

    if command == "seshadri-profile":
        d0 = _parse_class_arg(model, args.frm)
        d1 = _parse_class_arg(model, args.to)
        samples = None
        exact = True
        if args.samples:
            exact = False
            samples = [parse_rational(s) for s in args.samples.split(",")]
        profile = seshadri_profile(model, point, d0, d1, exact=exact, samples=samples)
        artifacts = []
        if args.csv:
            write_csv(profile_rows(model, point, profile), args.csv)
            artifacts.append(args.csv)
        if args.svg:
            write_text(profile_svg(profile), args.svg)
            artifacts.append(args.svg)
        outputs = {
            "from": d0,
            "to": d1,
            "pieces": profile.pieces,
            "regime_breakpoints": list(profile.regime_breakpoints),
            "breakpoints": list(profile.breakpoints()),
            "sampled": profile.sampled,
        }
        return _result(command, started, outputs, artifacts)

    if command == "jets":
        d = _parse_class_arg(model, args.cls)
        certificate = jets_separated(model, point, d, args.k)
        return _result(
            command,
            started,
            {
                "class": d,
                "k": certificate.k,
                "certified": certificate.certified,
                "xi": certificate.xi,
                "threshold": certificate.threshold,
            },
        )

    if command == "base-locus":
        d = _parse_class_arg(model, args.cls)
        verdict = base_locus_membership(model, point, d)
        return _result(
            command,
            started,
            {
                "class": d,
                "verdict": verdict.verdict.value,
                "xi": verdict.xi,
                "asymptotic_mult": verdict.asymptotic_mult,
            },
        )

    raise InputError(f"unknown subcommand {command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = _run(args)
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except NoctError as err:
        print(f"internal error: {err}", file=sys.stderr)
        return 1
    print(emit_json(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
