"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 search-bound exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diophdef, perfectclosure
from .diophdef import CosetCapExceeded, DefinitionError
from .exactalg import LiteralError
from .harness import agreement_sweep
from .orders import SaturationError
from .places import FunctionField, PlaceError, parse_field, parse_place
from .symbols import SearchExhausted

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_element(text: str, field):
    """An element of ``field``, or of its perfect closure for ``level=`` literals."""
    if text.lstrip().startswith("level="):
        if not isinstance(field, FunctionField):
            raise UsageError("level literals need a field F_q(t)")
        return perfectclosure.parse_perf(text, field.F)
    return field.parse(text)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_doc(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"{path} is not JSON: {exc}") from None


def _load(path: str, perfect: bool):
    doc = _read_doc(path)
    name = "perf-definition" if perfect else "definition"
    try:
        diophdef.validate(doc, name)
    except Exception as exc:  # jsonschema.ValidationError
        raise DefinitionError(f"{path} does not match the {name} schema: {exc.args[0] if exc.args else exc}") from None
    if perfect:
        return perfectclosure.perf_definition_from_json(doc)
    return diophdef.definition_from_json(doc)


def _definition(args, perfect: bool):
    if args.definition:
        return _load(args.definition, perfect)
    if not (args.field and args.place):
        raise UsageError("give --def, or both --field and --place")
    field = parse_field(args.field)
    place = parse_place(args.place, field)
    if perfect:
        return perfectclosure.build_perf_definition(field, place, args.ram_bound)
    return diophdef.build_definition(field, place, args.coset_cap, args.ram_bound)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    field = parse_field(args.field)
    place = parse_place(args.place, field)
    defn = diophdef.build_definition(field, place, args.coset_cap, args.ram_bound)
    doc = diophdef.definition_to_json(defn)
    diophdef.validate(doc)
    _write(args.out, diophdef.dumps(doc))
    return EXIT_OK


def cmd_perfect_build(args) -> int:
    field = parse_field(args.field)
    place = parse_place(args.place, field)
    defn = perfectclosure.build_perf_definition(field, place, args.ram_bound)
    doc = perfectclosure.perf_definition_to_json(defn)
    diophdef.validate(doc, "perf-definition")
    _write(args.out, perfectclosure.dumps(doc))
    return EXIT_OK


def cmd_decide(args) -> int:
    defn = _definition(args, perfect=False)
    f = defn.field
    x = f.parse(args.element)
    ok, tr = diophdef.decide(defn, x)
    lines = [f"element: {f.fmt(x)}", f"verdict: {str(ok).lower()}", f"split: y = {f.fmt(tr.y)}, z = {f.fmt(tr.z)}"]
    for c, v in zip(defn.copies, tr.verdicts):
        lines.append(f"copy ({defn.target}, {c.helper}): {'accepted' if v.accepted else 'rejected'} after {v.tried} coset(s)")
        if v.accepted:
            lines.append(f"  coset rep s = {f.fmt(c.coset_reps[v.coset_index])}, x1 = {f.fmt(v.x1)}")
            for place, good in v.local:
                lines.append(f"  local at {place}: {'represented' if good else 'obstructed'}")
    _write(None, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_perfect_decide(args) -> int:
    defn = _definition(args, perfect=True)
    x = perfectclosure.parse_perf(args.element, defn.field.F)
    ok, tr = perfectclosure.decide_perf(defn, x)
    lines = [f"element: {x}", f"verdict: {str(ok).lower()}", f"split: y = {tr.y}, z = {tr.z}"]
    for c, v in zip(defn.copies, tr.verdicts):
        lines.append(f"copy ({defn.target}, {c.helper}): {'accepted' if v.accepted else 'rejected'} after {v.tried} shift(s)")
        if v.accepted:
            lines.append(f"  shift residues {v.shift}, x1 = {v.x1}")
    _write(None, "\n".join(lines) + "\n")
    return EXIT_OK


def _verify(args, perfect: bool) -> int:
    defn = _definition(args, perfect)
    report = agreement_sweep(defn, args.bound, args.levels if perfect else 0)
    diophdef.validate(report.to_json(), "sweep-report")
    _write(args.out, report.dumps())
    c = report.to_json()["counts"]
    print(f"tested {c['tested']}, agreed {c['agreed']}, disagreed {c['disagreed']} ({report.wall_time:.2f} s)", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_verify(args) -> int:
    return _verify(args, False)


def cmd_perfect_verify(args) -> int:
    return _verify(args, True)


def cmd_emit(args) -> int:
    perfect = args.perfect
    if args.definition and not perfect:
        perfect = _read_doc(args.definition).get("schema") == perfectclosure.SCHEMA_NAME
    defn = _definition(args, perfect)
    fmt = str if perfect else defn.field.fmt
    if args.format == "json":
        text = json.dumps(diophdef.formula_to_json(defn.formula, fmt), indent=1, sort_keys=True) + "\n"
    else:
        text = diophdef.format_formula(defn.formula, fmt) + "\n"
    _write(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="integrality", description="Diophantine definitions of valuation rings.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def target(p, required=True):
        p.add_argument("--field", required=required, help="F<q>t (q odd) or Q")
        p.add_argument("--place", required=required, help="finite:<poly> or prime:<l>")

    def caps(p):
        p.add_argument("--coset-cap", type=int, default=diophdef.DEFAULT_COSET_CAP)
        p.add_argument("--ram-bound", type=int, default=None, help="search bound for the ramified algebra")

    def source(p):
        p.add_argument("--def", dest="definition", help="definition artifact (JSON)")
        target(p, required=False)
        caps(p)

    p = sub.add_parser("build", help="build a definition artifact")
    target(p)
    caps(p)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("perfect-build", help="build a perfect-closure definition artifact")
    target(p)
    caps(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_perfect_build)

    for name, fn in (("decide", cmd_decide), ("perfect-decide", cmd_perfect_decide)):
        p = sub.add_parser(name, help="decide membership of one element")
        source(p)
        p.add_argument("--element", required=True)
        p.set_defaults(func=fn)

    for name, fn in (("verify", cmd_verify), ("perfect-verify", cmd_perfect_verify)):
        p = sub.add_parser(name, help="agreement sweep against the valuation")
        source(p)
        p.add_argument("--bound", type=int, default=2)
        p.add_argument("--levels", type=int, default=1, help="perfect closure: largest level")
        p.add_argument("--out", help="report path (default: stdout)")
        p.set_defaults(func=fn)

    p = sub.add_parser("emit", help="print the formula tree")
    source(p)
    p.add_argument("--perfect", action="store_true", help="build the perfect-closure definition")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("bound", "levels", "coset_cap"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"integrality: --{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (SearchExhausted, SaturationError, CosetCapExceeded) as exc:
        print(f"integrality: search bound exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (DefinitionError, AssertionError) as exc:
        print(f"integrality: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, LiteralError, PlaceError, ValueError, ZeroDivisionError) as exc:
        print(f"integrality: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
