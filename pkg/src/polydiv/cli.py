"""Command-line interface: ``ppdiv <subcommand> ...``.

Exit codes: 0 ok, 1 usage, 2 validation failure, 3 axiom failure,
4 outside the supported scope.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import documents as docs
from .algebra import NotProper, box_points, certificate, fine_graded_piece, hilbert_table
from .base import UnsupportedBase
from .convex import RankTooHigh
from .downgrade import SliceEmpty, downgrade
from .exactnum import CannotFactor, DegreeTooHigh
from .galois import ActionInvalid, InfinitePiece, descent_dimensions, gillard_cocycle, is_galois_action
from .lattice import NotInjective, TorsionCokernel
from .ppdiv import CannotCertifySplitting, OutsideWeightCone, base_change

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_AXIOM, EXIT_SCOPE = range(5)

SCOPE_ERRORS = (UnsupportedBase, RankTooHigh, CannotCertifySplitting, CannotFactor, DegreeTooHigh, InfinitePiece)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def parse_box(text: str) -> list[tuple[int, int]]:
    """"a0..a1,b0..b1" -> [(a0, a1), (b0, b1)]."""
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        try:
            lo_i, hi_i = (int(lo), int(hi)) if sep else (int(lo), int(lo))
        except ValueError:
            raise UsageError(f"bad box range {part!r}; expected lo..hi") from None
        if lo_i > hi_i:
            raise UsageError(f"empty box range {part!r}")
        out.append((lo_i, hi_i))
    return out


def parse_weight(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad weight {text!r}; expected comma-separated integers") from None


def _load_ppdiv(path: str):
    return docs.parse_ppdiv(docs.read_document(path), path)


def _fmt_divisor(Dm) -> str:
    terms = [f"{c}*{P}" for P, c in Dm.items() if c != 0]
    return " + ".join(terms) if terms else "0"


def _render_grid(box, cells) -> list[str]:
    """Rows indexed by the first coordinate, columns by the second."""
    if len(box) == 1:
        (a0, a1), = box
        header = ["m"] + [str(a) for a in range(a0, a1 + 1)]
        row = ["dim"] + [str(cells[(a,)]) for a in range(a0, a1 + 1)]
        return _align([header, row])
    if len(box) == 2:
        (a0, a1), (b0, b1) = box
        header = ["a\\b"] + [str(b) for b in range(b0, b1 + 1)]
        rows = [header]
        for a in range(a0, a1 + 1):
            rows.append([str(a)] + [str(cells[(a, b)]) for b in range(b0, b1 + 1)])
        return _align(rows)
    return [f"{','.join(map(str, m))}: {v}" for m, v in cells.items()]


def _align(rows) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip() for r in rows]


# --- subcommands -------------------------------------------------------------------------------

def cmd_validate(args) -> int:
    D = _load_ppdiv(args.path)
    print("structure: ok")
    print(f"base: {D.base.describe()}")
    if D.interpretation:
        print(f"interpretation: {D.interpretation}")
    cert = certificate(D)
    print(f"semiample: {'yes' if cert.semiample else 'no'}")
    print(f"big: {'yes' if cert.big else 'no'}")
    print(f"proper: {'yes' if cert.proper else 'no'}")
    return EXIT_OK if cert.proper else EXIT_INVALID


def cmd_proper(args) -> int:
    D = _load_ppdiv(args.path)
    cert = certificate(D)
    print(f"method: {cert.reason}")
    for m, d in cert.semiample_checks:
        print(f"deg D{m} = {d}  (needs >= 0)")
    for m, d in cert.big_checks:
        print(f"deg D{m} = {d}  (interior, needs > 0)")
    print(f"proper: {'yes' if cert.proper else 'no'}")
    return EXIT_OK if cert.proper else EXIT_INVALID


def cmd_eval(args) -> int:
    D = _load_ppdiv(args.path)
    m = parse_weight(args.m)
    if len(m) != D.lattice_rank:
        raise UsageError(f"weight {m} must have {D.lattice_rank} coordinates")
    try:
        Dm = D.evaluate(m)
    except OutsideWeightCone as exc:
        print(f"D{m} is not defined: {exc}")
        return EXIT_INVALID
    print(f"D{m} = {_fmt_divisor(Dm)}")
    if D.base.is_curve:
        print(f"degree: {D.degree_at(m)}")
    return EXIT_OK


def cmd_hilbert(args) -> int:
    D = _load_ppdiv(args.path)
    box = parse_box(args.box)
    if len(box) != D.lattice_rank:
        raise UsageError(f"--box needs {D.lattice_rank} ranges")
    if args.fine or D.base.kind == "toric":
        if not args.ubox:
            raise UsageError("toric bases need --fine --ubox")
        if not certificate(D).proper:
            raise NotProper("the polyhedral divisor is not proper")
        ubox = parse_box(args.ubox)
        base_rank = D.base.fan.rank if D.base.kind == "toric" else 1
        if len(ubox) != base_rank:
            raise UsageError("--ubox must match the rank of the base lattice")
        cells, fine = {}, {}
        for m in box_points(box):
            us = [u for u in box_points(ubox) if fine_graded_piece(D, m, u)]
            cells[m] = len(us)
            fine[m] = us
        for line in _render_grid(box, cells):
            print(line)
        if args.json:
            out = {",".join(map(str, m)): [list(u) for u in us] for m, us in fine.items()}
            print(json.dumps(out, sort_keys=False))
        return EXIT_OK
    table = hilbert_table(D, box, args.degree_bound)
    if table.degree_bound is not None:
        print(f"# sections with numerator degree <= {table.degree_bound}")
    for line in _render_grid(box, table.cells):
        print(line)
    if args.json:
        print(json.dumps({",".join(map(str, m)): v for m, v in table.cells.items()}))
    return EXIT_OK


def cmd_downgrade(args) -> int:
    inp = docs.parse_downgrade_input(docs.read_document(args.path), args.path)
    try:
        out = downgrade(inp)
    except (TorsionCokernel, NotInjective) as exc:
        print(f"error: {exc} (subtorus not saturated: F must be injective with torsion-free cokernel)", file=sys.stderr)
        return EXIT_INVALID
    D = out.ppdiv
    result = {
        "fan": docs.fan_doc(out.fan, out.rays),
        "P": out.split.P.rows(),
        "s": out.split.s.rows(),
        "ppdivisor": docs.ppdiv_doc(D),
    }
    text = docs.dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(docs.dumps(docs.ppdiv_doc(D)))
    sys.stdout.write(text)
    if D.base.is_curve:
        target = args.output or "<ppdivisor document>"
        print(f"# cross-check: ppdiv hilbert {target} --box ... against the fine grading of the input cone")
    return EXIT_OK


def _load_action(args):
    D = _load_ppdiv(args.ppdiv)
    return docs.parse_action(docs.read_document(args.action), D, args.action)


def cmd_check_action(args) -> int:
    D, a = _load_action(args)
    results = is_galois_action(a, D)
    ok = True
    for r in results:
        ok &= r.ok
        print(f"{r.name}: {'pass' if r.ok else 'FAIL'}")
        for line in r.details:
            print(f"  {line}")
    g = gillard_cocycle(a, D)
    for r in (g.identity_a, g.cocycle_b):
        ok &= r.ok
        print(f"{r.name}: {'pass' if r.ok else 'FAIL'}")
        for line in r.details:
            print(f"  {line}")
    return EXIT_OK if ok else EXIT_AXIOM


def cmd_descend(args) -> int:
    D, a = _load_action(args)
    box = parse_box(args.box)
    if len(box) != D.lattice_rank:
        raise UsageError(f"--box needs {D.lattice_rank} ranges")
    rows = descent_dimensions(a, D, box)
    table = [["orbit", "dim_L", "dim_Q^G"]]
    for r in rows:
        orbit = " ".join("(" + ",".join(map(str, m)) + ")" for m in r.orbit)
        table.append([orbit, str(r.dim_L), str(r.dim_fixed)])
    for line in _align(table):
        print(line)
    bad = [r for r in rows if r.dim_L != r.dim_fixed]
    return EXIT_OK if not bad else EXIT_AXIOM


def cmd_basechange(args) -> int:
    D = _load_ppdiv(args.path)
    DL = base_change(D, args.d)
    sys.stdout.write(docs.dumps(docs.ppdiv_doc(DL)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ppdiv", description="Exact computations with proper polyhedral divisors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="structural checks and properness certificate")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("proper", help="print the properness certificate")
    s.add_argument("path")
    s.set_defaults(func=cmd_proper)

    s = sub.add_parser("eval", help="print the evaluation D(m)")
    s.add_argument("path")
    s.add_argument("--m", required=True, help="weight, e.g. 1,2")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("hilbert", help="dimensions of graded pieces over a box of weights")
    s.add_argument("path")
    s.add_argument("--box", required=True, help="e.g. 0..4,0..4")
    s.add_argument("--degree-bound", type=int, default=None, help="truncation for affine bases")
    s.add_argument("--fine", action="store_true", help="count characters of a toric base")
    s.add_argument("--ubox", help="character box for --fine")
    s.add_argument("--json", action="store_true", help="also print a machine-readable cell map")
    s.set_defaults(func=cmd_hilbert)

    s = sub.add_parser("downgrade", help="pp-divisor of a subtorus action on an affine toric variety")
    s.add_argument("path")
    s.add_argument("--output", help="write the pp-divisor document here")
    s.set_defaults(func=cmd_downgrade)

    s = sub.add_parser("check-action", help="verify a Galois semilinear action")
    s.add_argument("ppdiv")
    s.add_argument("action")
    s.set_defaults(func=cmd_check_action)

    s = sub.add_parser("descend", help="descent table of graded pieces")
    s.add_argument("ppdiv")
    s.add_argument("action")
    s.add_argument("--box", required=True)
    s.set_defaults(func=cmd_descend)

    s = sub.add_parser("basechange", help="base change from Q to Q(sqrt d)")
    s.add_argument("path")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_basechange)
    return p


VALUE_FLAGS = ("--box", "--ubox", "--m")


def _glue_values(argv: list[str]) -> list[str]:
    """Let "--box -3..3,-3..3" through argparse, which reads "-3..3" as a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_values(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except docs.DocumentError as exc:
        for line in exc.problems:
            print(f"invalid: {line}", file=sys.stderr)
        return EXIT_INVALID
    except NotProper as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ActionInvalid as exc:
        print(f"action invalid: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except SCOPE_ERRORS as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except (SliceEmpty, ValueError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
