"""Command-line front end.

Exit status: 0 when the command ran and every check passed, 1 when a check
failed, 2 on usage or input errors. Output depends only on the arguments and
input files; random inputs need an explicit ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .atlas import AtlasQuery, UnsupportedQuery, component_report, exotic_dimension
from .curve import load_curve, pluri_basis, pluri_dim
from .exactcore import format_rational, parse_rational
from .hitchin import HitchinInput, hitchin_roundtrip, random_hitchin_input
from .invariants import Z2Class
from .model import (
    OrthogonalSplitBundle,
    TwistedPair,
    build_exotic_model,
    deserialize_model,
    dumps_canonical,
    model_charpoly,
    serialize_model,
    verify_model,
)


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _coords(obj, where: str) -> list[list[Fraction]]:
    if not isinstance(obj, list) or any(not isinstance(v, list) for v in obj):
        raise UsageError(f"{where}: expected a list of coordinate lists")
    try:
        return [[parse_rational(c) for c in v] for v in obj]
    except ValueError as exc:
        raise UsageError(f"{where}: {exc}") from None


def _field(obj, key: str, path: str):
    if not isinstance(obj, dict) or key not in obj:
        raise UsageError(f"{path}: missing field {key!r}")
    return obj[key]


def _fmt_vec(v) -> list[str]:
    return [format_rational(c) for c in v]


def _emit(out, payload: dict, as_json: bool, text: str):
    if as_json:
        out.write(dumps_canonical(payload).decode("utf-8"))
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _load_curve(path: str, genus: int):
    try:
        curve = load_curve(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    if curve.genus != genus:
        raise UsageError(f"{path}: curve has genus {curve.genus}, --genus says {genus}")
    return curve


def cmd_atlas_count(args, out) -> int:
    report = component_report(AtlasQuery(args.p, args.q, args.genus))
    payload = report.to_json()
    lines = [f"M(SO({args.p},{args.q})) genus {args.genus}: case {payload['case']}"]
    for fam in payload["families"]:
        lines.append(f"  {fam['name']:<22} {fam['count']:>8} {fam['unit']:<10} {fam['connectedness']}")
        for note in fam["notes"]:
            lines.append(f"      {note}")
    t = payload["totals"]
    lines.append(f"  topological {t['topological']}  exotic {t['exotic']}  total {t['total']}")
    for d in payload["dimension_checks"]:
        lines.append(f"  dimension {d['dimension']} (expected {d['expected']}) identity {'ok' if d['identity_ok'] else 'FAILED'}")
    _emit(out, payload, args.json, "\n".join(lines))
    return 0 if all(d.identity_ok for d in report.dimension_checks) else 1


def cmd_atlas_dims(args, out) -> int:
    q = AtlasQuery(args.p, args.q, args.genus)
    dim, ok = exotic_dimension(q)
    expected = (q.g - 1) * (q.p + q.q) * (q.p + q.q - 1) // 2
    payload = {
        "query": {"p": q.p, "q": q.q, "genus": q.g},
        "dimension": str(dim),
        "expected": str(expected),
        "identity_ok": ok,
    }
    text = f"dimension {dim} expected {expected} identity {'ok' if ok else 'FAILED'}"
    _emit(out, payload, args.json, text)
    return 0 if ok else 1


def cmd_curve_basis(args, out) -> int:
    curve = _load_curve(args.f, args.genus)
    basis = pluri_basis(curve, args.m)
    dim = pluri_dim(curve.genus, args.m)
    payload = {
        "genus": curve.genus,
        "m": args.m,
        "dimension": dim,
        "basis": [str(s) for s in basis],
    }
    lines = [f"H^0(K^{args.m}) on genus {curve.genus}: dimension {dim}"]
    lines += [f"  e{i}: {s}" for i, s in enumerate(basis)]
    _emit(out, payload, args.json, "\n".join(lines))
    return 0 if len(basis) == dim else 1


def cmd_hitchin_roundtrip(args, out) -> int:
    curve = _load_curve(args.f, args.genus)
    if args.diffs:
        obj = _read_json(args.diffs)
        coords = _coords(_field(obj, "diffs", args.diffs), args.diffs)
        if obj.get("p", args.p) != args.p:
            raise UsageError(f"{args.diffs}: file is for p={obj['p']}, --p says {args.p}")
        inp = HitchinInput.from_coordinates(curve, args.p, coords)
    elif args.seed is not None:
        inp = random_hitchin_input(curve, args.p, random.Random(args.seed))
    else:
        raise UsageError("hitchin roundtrip needs --diffs FILE or --seed S")
    before = inp.coordinates()
    after = hitchin_roundtrip(inp)
    ok = before == after
    payload = {
        "p": args.p,
        "genus": curve.genus,
        "input": [_fmt_vec(v) for v in before],
        "output": [_fmt_vec(v) for v in after],
        "result": "PASS" if ok else "FAIL",
    }
    lines = []
    for j, (u, v) in enumerate(zip(before, after), start=1):
        lines.append(f"q_{2 * j} in : {' '.join(_fmt_vec(u))}")
        lines.append(f"q_{2 * j} out: {' '.join(_fmt_vec(v))}")
    lines.append(payload["result"])
    _emit(out, payload, args.json, "\n".join(lines))
    return 0 if ok else 1


def cmd_model_build(args, out) -> int:
    curve = _load_curve(args.f, args.genus)
    w0_obj = _read_json(args.w0)
    try:
        w0 = OrthogonalSplitBundle(
            tuple(_field(w0_obj, "hyperbolic_twists", args.w0)),
            _field(w0_obj, "trivial_count", args.w0),
            Z2Class.parse(w0_obj.get("torsion_label", "0" * (2 * curve.genus)), curve.genus),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.w0}: {exc}") from None
    eta_obj = _read_json(args.eta_p)
    pair = TwistedPair.from_coordinates(
        curve, args.p, w0, _coords(_field(eta_obj, "components", args.eta_p), args.eta_p)
    )
    d_obj = _read_json(args.diffs)
    diffs = HitchinInput.from_coordinates(curve, args.p, _coords(_field(d_obj, "diffs", args.diffs), args.diffs))
    model = build_exotic_model(pair, diffs, args.q)
    data = serialize_model(model)
    if args.output in (None, "-"):
        out.write(data.decode("utf-8"))
    else:
        with open(args.output, "wb") as fh:
            fh.write(data)
    return 0


def _load_model(path: str):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return deserialize_model(data)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_model_verify(args, out) -> int:
    model = _load_model(args.file)
    report = verify_model(model)
    payload = report.to_json()
    lines = [f"{c.status.upper():<12} {c.name}" + (f"  ({c.detail})" if c.detail else "") for c in report.checks]
    _emit(out, payload, args.json, "\n".join(lines))
    if not report.ok:
        print(f"error: check failed: {', '.join(report.failed())}", file=sys.stderr)
        return 1
    return 0


def cmd_model_charpoly(args, out) -> int:
    model = _load_model(args.file)
    try:
        inv = model_charpoly(model)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = {"p": model.p, "q": model.q, **inv.to_json()}
    lines = [f"lambda^{model.p + model.q - k} coefficient in H^0(K^{k}): {' '.join(_fmt_vec(v))}"
             for k, v in sorted(inv.coefficients.items())]
    if inv.pfaffian is not None:
        lines.append(f"pfaffian in H^0(K^{(model.p + model.q) // 2}): {' '.join(_fmt_vec(inv.pfaffian))}")
    _emit(out, payload, args.json, "\n".join(lines))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sopq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sopq {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    atlas = groups.add_parser("atlas", help="component counts and dimensions")
    atlas_cmds = atlas.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, func in (("count", cmd_atlas_count), ("dims", cmd_atlas_dims)):
        sp = atlas_cmds.add_parser(name)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--genus", type=int, required=True)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=func)

    curve = groups.add_parser("curve", help="pluricanonical sections")
    curve_cmds = curve.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = curve_cmds.add_parser("basis")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--f", required=True, metavar="FILE")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_curve_basis)

    hitchin = groups.add_parser("hitchin", help="Hitchin section round trip")
    hitchin_cmds = hitchin.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = hitchin_cmds.add_parser("roundtrip")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--f", required=True, metavar="FILE")
    sp.add_argument("--diffs", metavar="FILE")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_hitchin_roundtrip)

    model = groups.add_parser("model", help="build, verify and inspect Higgs models")
    model_cmds = model.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = model_cmds.add_parser("build")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--f", required=True, metavar="FILE")
    sp.add_argument("--w0", required=True, metavar="FILE")
    sp.add_argument("--eta-p", dest="eta_p", required=True, metavar="FILE")
    sp.add_argument("--diffs", required=True, metavar="FILE")
    sp.add_argument("-o", "--output", metavar="OUT")
    sp.set_defaults(func=cmd_model_build)
    for name, func in (("verify", cmd_model_verify), ("charpoly", cmd_model_charpoly)):
        sp = model_cmds.add_parser(name)
        sp.add_argument("file", metavar="FILE")
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=func)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, UnsupportedQuery, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
