"""Command-line front end.

JSON goes to stdout, human-readable summaries to stderr. Exit codes: 0 all
checks pass, 1 an axiom or property fails, 2 a precondition fails (no inverse,
unsolvable triple, invalid witness), 3 usage or parse error, 4 a cap was hit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .axioms import check_derived_properties, check_structure
from .core import CapExceeded, MobiError, ParseError, PreconditionError
from .exemplars import EXAMPLE_IDS, ExampleStub, make_example
from .interchange import load_structure, serialize_structure
from .sampling import DEFAULT_SEED, SampleSpec

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(MobiError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = v
    return out


def _load(ref: str, params=None):
    """A structure from a file path or ``example:NAME``."""
    if ref.startswith("example:"):
        s = make_example(ref[len("example:"):], **(params or {}))
        if isinstance(s, ExampleStub):
            raise UsageError(f"{s.id} is not a structure: {s.note}")
        return s
    if not os.path.exists(ref):
        raise UsageError(f"no such file: {ref}")
    return load_structure(ref)


def _emit(out, text: str):
    out.write(text if text.endswith("\n") else text + "\n")


def _sample(args, s):
    if s.is_finite:
        return None
    base = s.sampling or SampleSpec()
    return SampleSpec(seed=base.seed if args.seed is None else args.seed,
                      count=base.count if args.samples is None else args.samples)


def cmd_verify(args, out, err) -> int:
    s = _load(args.input, _params(args.param))
    sample = _sample(args, s)
    report = check_structure(s, args.profile, sample)
    if args.derived:
        report.extend(check_derived_properties(s, sample))
    _emit(out, report.dumps())
    _emit(err, report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def _convert(s, target: str, via: str, two):
    from . import transforms as tf

    kind = "imm" if s.kind == "imm_star" else s.kind
    if kind == target:
        raise UsageError(f"input is already a {target}")
    if kind == "mobi" and target == "imm":
        return tf.derive_imm_from_mobi(s)
    if kind == "mobi" and target == "ring":
        if two is not None:
            w = s.element(two)
        elif s.is_finite:
            w = tf.half_inverse_by_bijection(s)
            if w is None:
                raise tf.NoInverseError("½ has no inverse")
        else:
            raise UsageError("converting a rational-domain mobi to a ring needs --two")
        return tf.mobi_to_ring(s, w)
    if kind == "imm" and target == "ring":
        return tf.imm_to_ring(s)
    if kind == "imm" and target == "mobi":
        if via == "inverse" or not s.is_finite:
            return tf.imm_to_mobi_via_half_inverse(s)
        return tf.imm_star_to_mobi(s)
    if kind == "ring" and target == "imm":
        return tf.ring_to_imm(s)
    if kind == "ring" and target == "mobi":
        return tf.ring_to_mobi(s)
    raise UsageError(f"no conversion from {s.kind} to {target}")


def cmd_convert(args, out, err) -> int:
    s = _load(args.input, _params(args.param))
    result = _convert(s, args.to, args.via, args.two)
    doc = serialize_structure(result)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(doc)
        _emit(out, json.dumps({"kind": result.kind, "output": args.output, "source": s.kind}, sort_keys=True))
    else:
        out.write(doc.decode("utf-8"))
    _emit(err, f"converted {s.kind} {s.name or args.input} -> {result.kind}")
    return EXIT_OK


def cmd_enumerate(args, out, err) -> int:
    from .search import EnumerationTask, enumerate_mobi, enumerate_rings_with_half, node_cap_from_env

    cap = node_cap_from_env()
    if args.signature == "mobi":
        result = enumerate_mobi(EnumerationTask(args.order, "mobi", args.up_to_iso, cap))
    else:
        result = enumerate_rings_with_half(args.order, args.up_to_iso, cap)
    for s in result.structures:
        out.write(serialize_structure(s).decode("utf-8"))
    _emit(out, json.dumps(result.summary(), sort_keys=True))
    _emit(err, f"order {args.order} {args.signature}: {result.count} structure(s)")
    return EXIT_OK


def cmd_iso(args, out, err) -> int:
    from .search import find_isomorphism
    from .interchange import _op_from_json

    s1, s2 = _load(args.first), _load(args.second)
    candidate = inverse = None
    if args.map:
        with open(args.map, encoding="utf-8") as fh:
            raw = json.load(fh)
        if s1.is_finite:
            candidate = raw.get("mapping", raw)
        else:
            candidate = _op_from_json(raw["map"], 1, None)
            if raw.get("inverse") is not None:
                inverse = _op_from_json(raw["inverse"], 1, None)
    sample = None
    if not s1.is_finite:
        sample = SampleSpec(seed=DEFAULT_SEED if args.seed is None else args.seed,
                            count=500 if args.samples is None else args.samples)
    bij = find_isomorphism(s1, s2, candidate, inverse, sample)
    doc = {"isomorphic": bij is not None}
    if bij is not None:
        doc["bijection"] = bij.to_json()
    _emit(out, json.dumps(doc, sort_keys=True, ensure_ascii=False))
    _emit(err, "isomorphic" if bij else "no isomorphism found")
    return EXIT_OK if bij else EXIT_FAIL


def cmd_example(args, out, err) -> int:
    s = make_example(args.id, **_params(args.param))
    if isinstance(s, ExampleStub):
        _emit(out, json.dumps(s.to_json(), sort_keys=True, ensure_ascii=False))
        _emit(err, s.note)
        return EXIT_OK
    out.write(serialize_structure(s).decode("utf-8"))
    _emit(err, f"{s.name}: {s.kind}")
    return EXIT_OK


def cmd_roundtrip(args, out, err) -> int:
    from .transforms import roundtrip_check

    s = _load(args.input, _params(args.param))
    report = roundtrip_check(s)
    _emit(out, report.dumps())
    _emit(err, report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mobi", description="Verify, convert and enumerate mobi algebras, IMMs and rings.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def structure_input(p):
        p.add_argument("input", help="structure document, or example:NAME")
        p.add_argument("--param", action="append", metavar="K=V", help="example parameter")

    p = sub.add_parser("verify", help="check a structure against the axioms of its kind")
    structure_input(p)
    p.add_argument("--profile", choices=["mobi-full", "mobi-dagger", "imm-star"])
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--derived", action="store_true", help="also check derived identities")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("convert", help="convert between structure kinds")
    structure_input(p)
    p.add_argument("--to", required=True, choices=["imm", "ring", "mobi"])
    p.add_argument("--via", choices=["equation", "inverse"], default="equation")
    p.add_argument("--two", help="inverse of ½ (mobi -> ring)")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_convert)

    p = sub.add_parser("enumerate", help="enumerate finite models")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--signature", choices=["mobi", "ring-with-half"], default="mobi")
    p.add_argument("--up-to-iso", action="store_true")
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("iso", help="find or certify an isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--map", help="JSON candidate bijection")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(run=cmd_iso)

    p = sub.add_parser("example", help="emit a named example")
    p.add_argument("--id", required=True, choices=EXAMPLE_IDS)
    p.add_argument("--param", action="append", metavar="K=V")
    p.set_defaults(run=cmd_example)

    p = sub.add_parser("roundtrip", help="certify the ring/mobi correspondence on a structure")
    structure_input(p)
    p.set_defaults(run=cmd_roundtrip)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "samples", None) is not None and args.samples < 1:
            raise UsageError("--samples must be positive")
        return args.run(args, out, err)
    except (UsageError, ParseError) as exc:
        _emit(err, f"error: {exc}")
        return EXIT_USAGE
    except PreconditionError as exc:
        _emit(err, f"precondition failed: {exc}")
        _emit(out, json.dumps({"error": "precondition", "message": str(exc)}, ensure_ascii=False))
        return EXIT_PRECONDITION
    except CapExceeded as exc:
        _emit(err, f"cap exceeded: {exc}")
        _emit(out, json.dumps({"error": "cap-exceeded", "message": str(exc)}, ensure_ascii=False))
        return EXIT_CAP
    except MobiError as exc:
        _emit(err, f"error: {exc}")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
