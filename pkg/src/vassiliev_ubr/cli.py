"""Command-line front end.

Exit status: 0 on success, 1 when a verification or matrix check fails, 2 on
usage errors, 3 when a run exceeds a resource guard.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("vassiliev_ubr")


class UsageError(Exception):
    pass


def _emit(args, command: str, config: dict, result, text: Callable[[], str]) -> None:
    if args.json:
        doc = {"tool": "vassiliev-ubr", "version": __version__, "command": command, "config": config, "result": result}
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text())


# ---------------------------------------------------------------------------
# subcommands


def _cmd_census(args) -> int:
    from .driver import census_row

    row = census_row(args.alg, args.degree)
    _emit(
        args,
        "census",
        {"alg": args.alg, "degree": args.degree},
        row,
        lambda: f"algorithm {row['algorithm']}  degree {row['degree']}  |S| = {row['universe']}  |I| = {row['irreducible']}",
    )
    return EXIT_OK


def _cmd_upper(args) -> int:
    from .driver import UbrConfig, output_upper

    cfg = UbrConfig(args.alg, args.degree, args.prime, args.block or None, args.export)
    rep = output_upper(cfg)
    result = rep.as_dict()
    result.pop("seconds")
    lines = [
        f"algorithm {rep.algorithm}  degree {rep.degree}  field F_{rep.characteristic}",
        f"|S| = {rep.universe}",
        f"|I| = {rep.irreducible}",
        f"rank = {rep.rank}",
        f"output {rep.output}",
    ]
    if rep.export:
        lines.append(f"matrix written to {rep.export}")
    _emit(
        args,
        "upper",
        {"alg": args.alg, "degree": args.degree, "prime": args.prime, "block": args.block, "export": args.export},
        result,
        lambda: "\n".join(lines),
    )
    return EXIT_OK


def _cmd_lower(args) -> int:
    from .thickening import lower_bound

    res = lower_bound(
        args.degree,
        per_u=True,
        include_odd=args.include_odd_u,
        mode=args.rank_mode,
        edge_limit=args.edge_limit,
        workers=args.threads,
        closures=not args.no_closures,
    )
    result = res.as_dict()
    if not args.per_u:
        result.pop("per_u")
        result.pop("diagrams")

    def text() -> str:
        out = [f"degree {res.m}  lower bound {res.total}"]
        if args.per_u:
            row = [res.per_u[u] for u in sorted(res.per_u)]
            out.append("per u: " + "  ".join(f"u={u}: {r}" for u, r in sorted(res.per_u.items())))
            out.append("row (" + ",".join(map(str, row)) + f"), total {res.total}")
        return "\n".join(out)

    _emit(
        args,
        "lower",
        {
            "degree": args.degree,
            "per_u": args.per_u,
            "include_odd_u": args.include_odd_u,
            "rank_mode": args.rank_mode,
            "closures": not args.no_closures,
        },
        result,
        text,
    )
    return EXIT_OK


def _read_primitives(path: str) -> List[int]:
    with open(path) as fh:
        raw = fh.read().replace(",", " ").split()
    try:
        return [int(x) for x in raw]
    except ValueError as exc:
        raise UsageError(f"{path}: not a list of integers ({exc})") from None


def _cmd_tables(args) -> int:
    from .series import KNOWN_PRIMITIVES, algebra_ranks

    prim = _read_primitives(args.primitives) if args.primitives else list(KNOWN_PRIMITIVES)
    if len(prim) <= args.max_degree:
        raise UsageError(f"need primitive ranks for degrees 0..{args.max_degree}, got {len(prim)} values")
    table = algebra_ranks(prim[: args.max_degree + 1], args.max_degree)

    def text() -> str:
        rows = list(table.rows())
        width = max(len(str(x)) for _, r in rows for x in r) + 1
        head = max(len(name) for name, _ in rows)
        return "\n".join(name.ljust(head) + "".join(str(x).rjust(width) for x in r) for name, r in rows)

    if args.csv:
        for name, r in table.rows():
            print(",".join([name] + [str(x) for x in r]))
        return EXIT_OK
    _emit(args, "tables", {"max_degree": args.max_degree, "primitives": args.primitives}, table.as_dict(), text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from . import checks

    suite = checks.SUITES[args.suite]
    report = suite(args.max_degree)
    ok = all(r["ok"] for r in report)
    _emit(
        args,
        "verify",
        {"suite": args.suite, "max_degree": args.max_degree},
        {"ok": ok, "checks": report},
        lambda: "\n".join(f"{'PASS' if r['ok'] else 'FAIL'}  {r['name']}: {r['detail']}" for r in report),
    )
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_matrix(args) -> int:
    from .linalg import BitMatrix, MatrixFormatError, load, rank_nullity, read_header

    try:
        if args.action == "info":
            info = read_header(args.path)
            _emit(args, "matrix", {"action": "info", "path": args.path}, info,
                  lambda: "  ".join(f"{k} {v}" for k, v in info.items()))
            return EXIT_OK
        m = load(args.path)
    except MatrixFormatError as exc:
        _emit(args, "matrix", {"action": args.action, "path": args.path}, {"ok": False, "error": str(exc)},
              lambda: f"FAIL  {exc}")
        return EXIT_FAIL
    rank, nullity = rank_nullity(m)
    field = 2 if isinstance(m, BitMatrix) else m.characteristic
    res = {"ok": True, "rows": m.rows, "cols": m.cols, "characteristic": field, "rank": rank, "nullity": nullity}
    _emit(args, "matrix", {"action": "check", "path": args.path}, res,
          lambda: f"OK  {m.rows}x{m.cols} over F_{field}, rank {rank}, nullity {nullity}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonnegative(text: str) -> int:
    return 0 if text.strip() == "0" else _positive(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=_positive, default=os.cpu_count() or 1, help="worker cap")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    p = argparse.ArgumentParser(prog="vassiliev-ubr", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", parents=[common], help="universe size and irreducible count")
    c.add_argument("--alg", choices=["A", "B"], required=True)
    c.add_argument("--degree", type=_positive, required=True)
    c.set_defaults(func=_cmd_census)

    u = sub.add_parser("upper", parents=[common], help="upper bound from a reduction algorithm")
    u.add_argument("--alg", choices=["A", "B"], required=True)
    u.add_argument("--degree", type=_positive, required=True)
    u.add_argument("--prime", type=int, choices=[2, 3], default=2)
    u.add_argument("--block", type=_nonnegative, default=64, help="column block width, 0 for one full-width pass")
    u.add_argument("--export", metavar="PATH", help="write the relation matrix as a UBRM file")
    u.set_defaults(func=_cmd_upper)

    lo = sub.add_parser("lower", parents=[common], help="lower bound from thickened diagrams")
    lo.add_argument("--degree", type=_positive, required=True)
    lo.add_argument("--per-u", action="store_true")
    lo.add_argument("--include-odd-u", action="store_true")
    lo.add_argument("--rank-mode", choices=["exact", "modular"], default="exact")
    lo.add_argument("--no-closures", action="store_true", help="caterpillars only in the two-leg stratum")
    lo.add_argument("--edge-limit", type=_positive, default=26)
    lo.set_defaults(func=_cmd_lower)

    t = sub.add_parser("tables", parents=[common], help="algebra ranks from primitive ranks")
    t.add_argument("--max-degree", type=int, required=True)
    t.add_argument("--primitives", metavar="FILE", help="whitespace or comma separated p_0, p_1, ...")
    t.add_argument("--csv", action="store_true")
    t.set_defaults(func=_cmd_tables)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("--suite", choices=["moves", "surfaces", "series", "sandwich"], required=True)
    v.add_argument("--max-degree", type=_positive, default=6)
    v.set_defaults(func=_cmd_verify)

    mx = sub.add_parser("matrix", parents=[common], help="inspect or validate a UBRM file")
    mx.add_argument("action", choices=["info", "check"])
    mx.add_argument("path")
    mx.set_defaults(func=_cmd_matrix)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    from .thickening import DegreeTooLarge

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegreeTooLarge, MemoryError) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
