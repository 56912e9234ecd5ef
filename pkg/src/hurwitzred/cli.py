"""Command-line driver."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Sequence

from . import InconsistencyError
from .config import FORMATS, RunConfig, build_group, group_descriptor
from .nielsen import resolve_class_vector
from .report import analyze, emit_report, run_table

log = logging.getLogger("hurwitzred")


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 so that 2 stays reserved for invariant failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", required=True, help="psl2:<ell>, dihedral:<n> or perm:<file>")
    p.add_argument("--classes", action="append", default=[],
                   help="comma-separated class labels; repeat for several vectors")
    p.add_argument("--primes", default="auto", help="'auto' or a list such as 3,5")
    p.add_argument("--format", choices=FORMATS, default="pretty")
    p.add_argument("--cache-dir")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fusion-depth", type=int, default=8,
                   help="word length bound when fusing components (negative: unbounded)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hurwitzred",
                     description="Nielsen classes, Hurwitz space components and their reduction mod p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in [("group", "conjugacy classes and Sylow data"),
                       ("nielsen", "canonical Nielsen tuples"),
                       ("components", "braid orbits with degree, genus and ramification"),
                       ("cusps", "cusps over 0, 1 and infinity"),
                       ("reduce", "per-component reduction mod p"),
                       ("table", "summary table")]:
        _common(sub.add_parser(name, help=text))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    depth = None if args.fusion_depth < 0 else args.fusion_depth
    return RunConfig(group=args.group, classes=args.classes, primes=args.primes,
                     format=args.format, cache_dir=args.cache_dir, workers=args.workers,
                     fusion_depth=depth)


def _emit(records: list[dict[str, Any]], fmt: str, kind: str) -> bytes:
    if fmt == "json":
        doc = {"schema": f"hurwitzred.{kind}/1", "records": records}
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    cols = list(records[0]) if records else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows([[_cell(r[c]) for c in cols] for r in records])
        return buf.getvalue().encode()
    cells = [[_cell(r[c]) for c in cols] for r in records]
    widths = [max(len(x) for x in col) for col in zip(cols, *cells)] if cols else []
    fmt_line = lambda row: " | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    lines = [fmt_line(cols), "-+-".join("-" * w for w in widths)] + [fmt_line(c) for c in cells]
    return ("\n".join(lines) + "\n").encode()


def _cell(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    if isinstance(v, dict):
        return " ".join(f"{k}:{_cell(x)}" for k, x in v.items())
    return str(v)


def _group_records(cfg: RunConfig) -> list[dict[str, Any]]:
    G = build_group(cfg.group)
    out = []
    for c in G.classes.classes:
        out.append({"label": c.label, "order": c.order, "size": len(c.members),
                    "rep": repr(G.element(c.rep))})
    return out


def _analyses(cfg: RunConfig):
    G = build_group(cfg.group)
    desc = group_descriptor(cfg.group, G)
    for names in cfg.class_vectors():
        cv = resolve_class_vector(G, names)
        an = analyze(cv, cfg.primes, fusion_depth=cfg.fusion_depth, workers=cfg.workers,
                     cache_dir=cfg.cache_dir, descriptor=desc)
        for note in an.notes:
            log.warning("%s: %s", cv, note)
        yield an


def run(cfg: RunConfig, command: str) -> bytes:
    if command == "table":
        return emit_report(run_table(cfg), cfg.format)
    if command == "group":
        return _emit(_group_records(cfg), cfg.format, "group")
    records: list[dict[str, Any]] = []
    for an in _analyses(cfg):
        cv = str(an.class_vector)
        if command == "nielsen":
            records += [{"classes": cv, "index": i, "tuple": list(t)}
                        for i, t in enumerate(an.nielsen.tuples)]
        elif command == "components":
            family = {c: k for k, fam in enumerate(an.families) for c in fam}
            records += [{"classes": cv, "component": r.component, "family": family[r.component],
                         "degree": r.degree, "genus": r.genus, "ram": r.ram_string}
                        for r in an.reports]
        elif command == "cusps":
            records += [{"classes": cv, "component": r.component, "w": c.w, "e": c.e, "n": c.n,
                         "gamma_class": c.gamma_label, "orbit": list(c.orbit)}
                        for r in an.reports for w in ("0", "1", "inf") for c in r.cusps[w]]
        elif command == "reduce":
            records += [{"classes": cv, "component": comp, "p": p, "verdict": red.verdict,
                         "d_bad": red.d_bad["inf"], "gdeg": red.good_ordinary,
                         "gdeg_supersingular": red.good_supersingular,
                         "levels": list(red.candidate_levels),
                         "bad_components": red.bad_components_text(), "status": red.status}
                        for (comp, p), red in sorted(an.reductions.items())]
        else:
            raise ValueError(f"unknown command {command!r}")
    return _emit(records, cfg.format, command)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        out = run(cfg, args.command)
    except InconsistencyError as exc:
        log.error("internal inconsistency: %s", exc)
        return 2
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
