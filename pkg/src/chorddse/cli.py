"""Command-line front end.

Subcommands: ``enumerate``, ``expand``, ``verify`` and ``render``.  Exit
codes: 0 success, 1 mismatch or failed identity, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .algebra import BiSeries, Poly
from .diagram import DiagramError, enumerate_connected, enumerate_decorated
from .identities import IDENTITIES, verify_all
from .oracle import (
    PRESETS,
    DseSpec,
    SpecError,
    comb_side,
    compare,
    g_from_G,
    solve_dse,
    symbolic_spec,
)
from .parallel import default_threads
from .render import diagram_svg, parse_diagram
from .tree import TreeError, branch_left_vector, insertion_tree, tree_to_dot

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def manifest(command: str, **fields: Any) -> dict:
    """Run description embedded in outputs; deliberately free of timestamps
    and thread counts so that reruns are byte-identical."""
    out = {"tool": "chorddse", "version": __version__, "command": command}
    out.update({k: v for k, v in fields.items() if v is not None})
    return out


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Sink:
    """stdout or a file, opened lazily; ``to_file`` tells whether a header goes in."""

    def __init__(self, path: Optional[str]) -> None:
        self.path = path
        self.buf = io.StringIO()

    @property
    def to_file(self) -> bool:
        return self.path is not None

    def write(self, text: str) -> None:
        self.buf.write(text)

    def close(self) -> None:
        data = self.buf.getvalue()
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


# -- enumerate -------------------------------------------------------------------


def _diagram_record(C, with_stats: bool) -> dict:
    rec = {"pairs": [list(p) for p in C.pairs], "decorations": list(C.decorations)}
    if with_stats:
        t = C.terminal
        rec.update(
            {
                "ter": list(t.ter),
                "b": t.base,
                "nu": list(branch_left_vector(C)),
                "norm": C.norm,
            }
        )
    return rec


def cmd_enumerate(args: argparse.Namespace) -> int:
    if (args.chords is None) == (args.norm is None):
        raise UsageError("give exactly one of --chords or --norm")
    if args.chords is not None:
        if args.chords < 1:
            raise UsageError("--chords must be positive")
        stream = enumerate_connected(args.chords)
        info = {"chords": args.chords}
    else:
        if args.norm < 1:
            raise UsageError("--norm must be positive")
        if args.max_dec is not None and args.max_dec < 1:
            raise UsageError("--max-dec must be positive")
        stream = enumerate_decorated(args.norm, args.max_dec)
        info = {"norm": args.norm, "max_dec": args.max_dec}
    sink = Sink(args.output)
    if args.count_only:
        count = sum(1 for _ in stream)
        if sink.to_file:
            sink.write(dumps({"manifest": manifest("enumerate", **info), "count": count}) + "\n")
        else:
            sink.write(f"{count}\n")
    else:
        if sink.to_file:
            sink.write(dumps({"manifest": manifest("enumerate", stats=args.stats, **info)}) + "\n")
        for C in stream:
            sink.write(dumps(_diagram_record(C, args.stats)) + "\n")
    sink.close()
    return EXIT_OK


# -- expand ----------------------------------------------------------------------


def _load_spec(args: argparse.Namespace) -> DseSpec:
    given = [x is not None for x in (args.spec, args.preset, args.s)]
    if sum(given) > 1:
        raise UsageError("give at most one of --spec, --preset, --s")
    if args.spec is not None:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                spec = DseSpec.from_json(fh.read(), name=args.spec)
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read spec {args.spec}: {exc}") from exc
    elif args.preset is not None:
        X = 5 if args.x_order is None else args.x_order
        spec = PRESETS[args.preset](X, args.l_order)
    else:
        s = Fraction(args.s) if args.s is not None else Fraction(2)
        X = 5 if args.x_order is None else args.x_order
        spec = symbolic_spec(s, args.primitives, X, args.l_order)
    X = spec.x_order if args.x_order is None else args.x_order
    if args.l_order is not None:
        L = args.l_order
    else:
        L = X if args.x_order is not None else spec.l_order
    if X < 0 or L < 0:
        raise UsageError("truncation orders must be non-negative")
    return spec.with_orders(X, L)


def _poly_out(p: Poly, numeric: bool) -> Any:
    if numeric:
        if not p.is_constant():
            raise UsageError("--numeric needs numeric primitive coefficients")
        return str(p.constant_term())
    return str(p)


def _series_rows(G: BiSeries, numeric: bool) -> list[dict]:
    return [
        {"m": m, "j": j, "coeff": _poly_out(G.coefficient(m, j), numeric)}
        for m in range(G.x_order + 1)
        for j in range(G.l_order + 1)
        if not G.coefficient(m, j).is_zero()
    ]


def _g1_column(G: BiSeries, numeric: bool) -> list:
    if G.l_order < 1:
        return []
    g1 = g_from_G(G, 1)
    return [_poly_out(g1.coefficient(m), numeric) for m in range(1, G.x_order + 1)]


def _csv_table(G: BiSeries, numeric: bool, head: dict) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + dumps(head) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "g1"] + [f"L^{j}" for j in range(G.l_order + 1)])
    g1 = [""] + _g1_column(G, numeric) if G.l_order >= 1 else [""] * (G.x_order + 1)
    for m in range(G.x_order + 1):
        w.writerow([m, g1[m]] + [_poly_out(G.coefficient(m, j), numeric) for j in range(G.l_order + 1)])
    return buf.getvalue()


def cmd_expand(args: argparse.Namespace) -> int:
    spec = _load_spec(args)
    head = manifest(
        "expand",
        spec=spec.to_json(),
        preset=args.preset,
        side=args.side,
        numeric=args.numeric,
        derivative_sign=args.derivative_sign if args.derivative_sign != -1 else None,
    )
    comb = comb_side(spec, threads=args.threads) if args.side in ("comb", "both") else None
    dif = solve_dse(spec, args.derivative_sign) if args.side in ("dif", "both") else None
    doc: dict[str, Any] = {"manifest": head}
    status = EXIT_OK
    main = comb if comb is not None else dif
    if args.format == "csv":
        if args.side == "both":
            raise UsageError("CSV output takes a single side")
        text = _csv_table(main, args.numeric, head)
    else:
        for name, G in (("comb", comb), ("dif", dif)):
            if G is not None:
                doc[name] = {
                    "x_order": G.x_order,
                    "l_order": G.l_order,
                    "coefficients": _series_rows(G, args.numeric),
                    "g1": _g1_column(G, args.numeric),
                }
        if args.side == "both":
            diff = compare(comb, dif)
            doc["diff"] = [{"m": m, "j": j, "difference": str(p)} for m, j, p in diff]
            doc["status"] = "MATCH" if not diff else "MISMATCH"
            print(doc["status"], file=sys.stderr)
            status = EXIT_OK if not diff else EXIT_MISMATCH
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    sink = Sink(args.output)
    sink.write(text)
    sink.close()
    return status


# -- verify ----------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(args.identities)
    if "all" in names:
        if len(names) > 1:
            raise UsageError("'all' cannot be combined with other names")
        names = list(IDENTITIES)
    unknown = [n for n in names if n not in IDENTITIES]
    if unknown:
        raise UsageError(f"unknown identity {', '.join(unknown)}; known: {', '.join(IDENTITIES)}")
    if args.max_size is not None and args.max_norm is not None:
        raise UsageError("give at most one of --max-norm and --max-size")
    if args.max_size is not None:
        bound, N = args.max_size, 1
    else:
        bound = 5 if args.max_norm is None else args.max_norm
        N = args.max_dec
    if bound < 1:
        raise UsageError("bounds must be positive")
    s_values = args.s or ["2"]
    reports = []
    for s in s_values:
        try:
            sv = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --s value {s!r}") from exc
        reports += verify_all(bound, sv, N, args.threads, names)
    ok = all(r.holds for r in reports)
    doc = {
        "manifest": manifest("verify", identities=names, bound=bound, max_dec=N, s=[str(Fraction(s)) for s in s_values]),
        "reports": [r.to_json() for r in reports],
        "holds": ok,
    }
    sink = Sink(args.output)
    sink.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    sink.close()
    return EXIT_OK if ok else EXIT_MISMATCH


# -- render ----------------------------------------------------------------------


def cmd_render(args: argparse.Namespace) -> int:
    C = parse_diagram(args.diagram, args.decorations)
    if args.mode == "tree":
        if not C.is_connected:
            raise DiagramError("insertion trees need a connected diagram")
        text = tree_to_dot(insertion_tree(C))
        comment = "// "
    else:
        text = diagram_svg(C)
        comment = None
    sink = Sink(args.output)
    if sink.to_file:
        head = dumps(manifest("render", diagram=str(C), mode=args.mode))
        sink.write(f"{comment}manifest: {head}\n" if comment else f"<!-- manifest: {head} -->\n")
    sink.write(text)
    sink.close()
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chorddse", description="Chord diagram expansions of Dyson-Schwinger equations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q: argparse.ArgumentParser) -> None:
        q.add_argument("--output", "-o", help="write to this file (adds a manifest header)")
        q.add_argument("--threads", type=int, default=None, help="worker threads (default: $CHORDDSE_THREADS or 1)")

    e = sub.add_parser("enumerate", help="list rooted connected chord diagrams")
    e.add_argument("--chords", type=int, help="number of chords")
    e.add_argument("--norm", type=int, help="decoration sum of decorated diagrams")
    e.add_argument("--max-dec", type=int, default=None, help="largest decoration with --norm")
    e.add_argument("--count-only", action="store_true")
    e.add_argument("--stats", action="store_true", help="add terminal chords, base, branch-left vector and norm")
    common(e)
    e.set_defaults(func=cmd_enumerate)

    x = sub.add_parser("expand", help="series coefficients of G(x, L)")
    x.add_argument("--spec", help="DSE spec JSON file")
    x.add_argument("--preset", choices=sorted(PRESETS))
    x.add_argument("--s", help="symbolic run with this s (default 2)")
    x.add_argument("--primitives", type=int, default=1, help="number of symbolic primitives for --s runs")
    x.add_argument("--x-order", type=int, default=None)
    x.add_argument("--l-order", type=int, default=None)
    x.add_argument("--side", choices=["comb", "dif", "both"], default="comb")
    x.add_argument("--numeric", action="store_true", help="print coefficients as plain rationals")
    x.add_argument("--format", choices=["json", "csv"], default="json")
    x.add_argument("--derivative-sign", type=int, choices=[-1, 1], default=-1, help=argparse.SUPPRESS)
    common(x)
    x.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", help="check registered identities")
    v.add_argument("identities", nargs="+", help=f"'all' or any of: {', '.join(IDENTITIES)}")
    v.add_argument("--max-norm", type=int, default=None, help="norm bound (default 5)")
    v.add_argument("--max-size", type=int, default=None, help="chord bound for undecorated diagrams")
    v.add_argument("--max-dec", type=int, default=None, help="largest decoration (default: the norm bound)")
    v.add_argument("--s", action="append", help="value of s; repeat for several")
    common(v)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw a diagram or its insertion tree")
    r.add_argument("diagram", help="chords such as '(1,4)(2,5)(3,6)' or a JSON list of pairs")
    r.add_argument("--decorations", help="comma separated, in intersection order")
    r.add_argument("--mode", choices=["tree", "diagram"], default="tree")
    common(r)
    r.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        try:
            args.threads = default_threads()
        except ValueError as exc:
            parser.error(str(exc))
    elif args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (SpecError, DiagramError, TreeError) as exc:
        print(f"chorddse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
