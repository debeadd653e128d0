"""Command line interface.

Ring files are ``key = value`` text, one or more assignments per line, with
``#`` comments::

    case = B
    p = 3
    n = 3
    precision = 12
    order = lex
    delta[3][2] = x1^2      # y x = x y + p^2

Exit status: 0 on success, 1 on a mathematical negative (not a member, a
failed check), 2 on errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import apps
from .groebner import DivisionError, complete, member, right_divide, spair, weierstrass
from .order import ORDERS
from .ring import (NonTriangularLexError, PresentationError, Ring, RingPresentation, preset,
                   validate_presentation)
from .text import ParseError, parse_element, parse_expression, parse_terms, print_canonical

_SPLIT = re.compile(r"\s+(?=[A-Za-z_][\w\[\]]*\s*=)")
_TABLE_KEY = re.compile(r"(sigma|delta)\[(\d+)\]\[(\d+)\]")
_INT_KEYS = ("p", "m", "n", "precision")


@dataclass
class CommandResult:
    status: int
    output: str

    def __str__(self):
        return self.output


class UsageError(Exception):
    pass


def _assignments(text: str):
    """Yield (line, column, key, value, value column) for each assignment."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        pos = len(line) - len(line.lstrip())
        for chunk in _SPLIT.split(line.strip()):
            col = line.index(chunk, pos) + 1
            pos = col - 1 + len(chunk)
            if "=" not in chunk:
                raise ParseError(f"expected key = value, found {chunk!r}", lineno, col)
            key, value = chunk.split("=", 1)
            vcol = col + len(key) + 1 + (len(value) - len(value.lstrip()))
            yield lineno, col, key.strip(), value.strip(), vcol


def parse_ring_spec(text: str, validate: bool = True) -> RingPresentation:
    """Parse a ring file into a validated presentation."""
    fields: dict = {}
    tables: dict = {"sigma": {}, "delta": {}}
    pending = []
    base = None
    for line, col, key, value, vcol in _assignments(text):
        if not value:
            raise ParseError(f"missing value for {key!r}", line, vcol)
        m = _TABLE_KEY.fullmatch(key)
        if m:
            pending.append((m.group(1), int(m.group(2)), int(m.group(3)), value, line, vcol))
        elif key in _INT_KEYS:
            try:
                fields[key] = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}", line, vcol) from None
        elif key == "case":
            if value not in ("A", "B"):
                raise ParseError(f"case must be A or B, got {value!r}", line, vcol)
            fields["case"] = value
        elif key == "order":
            if value not in ORDERS:
                raise ParseError(f"unknown order {value!r}", line, vcol, hint=", ".join(ORDERS))
            fields["order"] = value
        elif key == "preset":
            try:
                base = preset(value)
            except ValueError as exc:
                raise ParseError(str(exc), line, vcol) from None
        elif key == "irreducible":
            try:
                fields["irreducible"] = tuple(int(c) for c in value.split(","))
            except ValueError:
                raise ParseError("irreducible must be comma-separated integers, constant term first",
                                 line, vcol) from None
        elif key == "name":
            fields["name"] = value
        else:
            raise ParseError(f"unknown key {key!r}", line, col,
                             hint="case, p, m, n, precision, order, sigma[i][r], delta[i][r], preset, irreducible")
    if base is None:
        missing = [k for k in ("case", "p", "n") if k not in fields]
        if missing:
            raise ParseError(f"missing required key(s): {', '.join(missing)}", 1, 1)
        fields.setdefault("precision", 10)
        fields.setdefault("order", "lex")
    else:
        tables["sigma"].update(base.sigma)
        tables["delta"].update(base.delta)
    n = fields.get("n", base.n if base else 0)
    for name, i, r, value, line, vcol in pending:
        tables[name][(i, r)] = parse_terms(value, n, line, vcol)
    try:
        if base is None:
            P = RingPresentation(sigma=tables["sigma"], delta=tables["delta"], **fields)
        else:
            P = base.replace(sigma=tables["sigma"], delta=tables["delta"], **fields)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if validate:
        report = validate_presentation(P)
        if not report.ok:
            raise PresentationError(report)
    return P


# -- argument handling -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


COMMANDS = ("validate", "normalize", "add", "mul", "divide", "groebner", "member", "weierstrass",
            "spair", "prime-demo", "ladder", "witness")


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="skewseries", description="Truncated skew power series arithmetic.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--ring", help="ring specification file")
        g.add_argument("--preset", help="named presentation: qcomm(q), delta-x2, yx-p2")
        sp.add_argument("--in", dest="infile", help="file with one element per line")
        sp.add_argument("--max-cap", type=int, default=None, help="ceiling for lex stabilization")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=20)
        if name == "member":
            sp.add_argument("--ideal", action="append", default=[], help="ideal generator (repeatable)")
        if name in ("ladder", "witness"):
            sp.add_argument("--J", dest="J", action="append", default=[],
                            help="generator of the smaller ideal J (repeatable)")
            sp.add_argument("--closure", action="store_true",
                            help="treat inputs as generators of two-sided ideals J and I")
        if name == "prime-demo":
            sp.add_argument("--budget", type=int, default=64)
        sp.add_argument("elements", nargs="*")
    return ap


def _load_ring(args) -> Ring:
    if args.preset:
        return Ring(preset(args.preset))
    if not args.ring:
        raise UsageError("--ring or --preset is required")
    path = Path(args.ring)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read ring file: {exc}") from None
    return Ring(parse_ring_spec(text))


def _inputs(args) -> list[str]:
    items = list(args.elements)
    if args.infile:
        try:
            lines = Path(args.infile).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read input file: {exc}") from None
        items += [ln.split("#", 1)[0].strip() for ln in lines if ln.split("#", 1)[0].strip()]
    return items


def _elements(ring, items):
    return [parse_expression(ring, s) for s in items]


def _need(items, k, what):
    if len(items) < k:
        raise UsageError(f"{what} needs at least {k} element(s)")


def _cmd_validate(args):
    if args.preset:
        P = preset(args.preset)
    else:
        if not args.ring:
            raise UsageError("--ring or --preset is required")
        P = parse_ring_spec(Path(args.ring).read_text(encoding="utf-8"), validate=False)
    report = validate_presentation(P)
    return (0 if report.ok else 1), [report.summary()]


def _cmd_normalize(args, ring, items):
    _need(items, 1, "normalize")
    return 0, [print_canonical(parse_element(ring, s)) for s in items]


def _cmd_add(args, ring, items):
    _need(items, 2, "add")
    es = _elements(ring, items)
    total = es[0]
    for e in es[1:]:
        total = total + e
    return 0, [print_canonical(total)]


def _cmd_mul(args, ring, items):
    _need(items, 2, "mul")
    es = _elements(ring, items)
    prod = es[0]
    for e in es[1:]:
        prod = ring.mul(prod, e)
    return 0, [print_canonical(prod)]


def _cmd_divide(args, ring, items):
    _need(items, 2, "divide")
    f, *F = _elements(ring, items)
    res = right_divide(f, F, max_cap=args.max_cap)
    out = [f"q{i + 1} = {print_canonical(q)}" for i, q in enumerate(res.quotients)]
    out.append(f"r = {print_canonical(res.remainder)}")
    out.append(f"certificate = {res.certificate}")
    return (0 if res.certificate.ok else 1), out


def _cmd_groebner(args, ring, items):
    _need(items, 1, "groebner")
    G = complete(_elements(ring, items), max_cap=args.max_cap)
    out = [f"g{i + 1} = {print_canonical(g)}" for i, g in enumerate(G.elements)]
    out += [f"log: {line}" for line in G.log]
    return 0, out


def _cmd_member(args, ring, items):
    _need(items, 1, "member")
    if not args.ideal:
        raise UsageError("member needs at least one --ideal generator")
    G = complete(_elements(ring, args.ideal), max_cap=args.max_cap)
    out, status = [], 0
    for f in _elements(ring, items):
        res = member(f, G, max_cap=args.max_cap)
        if res.yes:
            out.append("yes")
        else:
            out.append(f"no remainder = {print_canonical(res.remainder)}")
            status = 1
    return status, out


def _cmd_weierstrass(args, ring, items):
    _need(items, 1, "weierstrass")
    out = []
    for f in _elements(ring, items):
        res = weierstrass(f, max_cap=args.max_cap)
        out += [f"u = {print_canonical(res.u)}", f"F = {print_canonical(res.F)}",
                f"certificate = {res.certificate}"]
    return 0, out


def _cmd_spair(args, ring, items):
    if len(items) != 2:
        raise UsageError("spair needs exactly 2 elements")
    g, h = _elements(ring, items)
    return 0, [print_canonical(spair(g, h))]


def _cmd_prime_demo(args, ring, items):
    _need(items, 1, "prime-demo")
    out, status = [], 0
    for f in _elements(ring, items):
        tr = apps.prime_height1_demo(f, budget=args.budget)
        out.append(f"start {print_canonical(f)} LM=({','.join(map(str, f.lm()))})")
        out += tr.lines()
        if tr.status == "budget-exhausted" or not tr.consistent:
            status = 1
    return status, out


def _ladder(args, ring, items):
    if args.closure:
        G_I = apps.two_sided_closure(_elements(ring, args.J + items))
        G_J = list(apps.two_sided_closure(_elements(ring, args.J)).elements) if args.J else []
        ext = apps.ladder_extension(G_I.elements, G_J)
    else:
        G_J = _elements(ring, args.J)
        ext = _elements(ring, items)
    return apps.build_ladder(G_J, ext)


def _cmd_ladder(args, ring, items):
    lad = _ladder(args, ring, items)
    out = lad.lines()
    status = 0 if lad.passes else 1
    for r in range(1, lad.s + 1):
        rep = apps.two_sidedness_check(lad, r, samples=args.samples, seed=args.seed)
        out += rep.lines()
        if not rep.ok:
            status = 1
    return status, out


def _cmd_witness(args, ring, items):
    lad = _ladder(args, ring, items)
    rep = apps.polynormal_witness(lad, samples=args.samples, seed=args.seed)
    return (0 if rep.ok else 1), rep.lines()


_HANDLERS = {
    "normalize": _cmd_normalize, "add": _cmd_add, "mul": _cmd_mul, "divide": _cmd_divide,
    "groebner": _cmd_groebner, "member": _cmd_member, "weierstrass": _cmd_weierstrass,
    "spair": _cmd_spair, "prime-demo": _cmd_prime_demo, "ladder": _cmd_ladder,
    "witness": _cmd_witness,
}


def run_command(argv) -> CommandResult:
    """Run one command and capture its exit status and text output."""
    try:
        args = _build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        if args.command == "validate":
            status, lines = _cmd_validate(args)
        else:
            ring = _load_ring(args)
            status, lines = _HANDLERS[args.command](args, ring, _inputs(args))
    except (UsageError, ParseError, PresentationError, NonTriangularLexError, DivisionError,
            apps.LadderError, OSError, ValueError) as exc:
        return CommandResult(2, f"error: {exc}\n")
    return CommandResult(status, "\n".join(lines) + "\n")


def main(argv=None) -> int:
    res = run_command(sys.argv[1:] if argv is None else argv)
    (sys.stderr if res.status == 2 else sys.stdout).write(res.output)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
