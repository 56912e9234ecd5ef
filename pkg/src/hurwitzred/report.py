"""End-to-end pipeline and report emission (JSON, CSV, pretty table)."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
from typing import Any, Sequence

from .braid import Component, decompose_components, fuse_isomorphic_components
from .cache import cache_key, cache_nielsen, load_nielsen
from .config import RunConfig, build_group, group_descriptor, parse_group_spec
from .covers import ComponentReport, component_report
from .groups import FiniteGroup
from .nielsen import ClassVector, NielsenSet, enumerate_nielsen, resolve_class_vector
from .reduction import (ReductionConditions, ReductionReport, admissible_primes,
                        check_conditions, reduce_component)

log = logging.getLogger(__name__)

SCHEMA = "hurwitzred.table/1"


@dataclasses.dataclass
class Analysis:
    """Every artifact level for one class vector."""
    class_vector: ClassVector
    nielsen: NielsenSet
    components: list[Component]
    families: list[list[int]]
    reports: list[ComponentReport]
    conditions: dict[int, ReductionConditions]
    reductions: dict[tuple[int, int], ReductionReport]   # (component, p)
    notes: list[str]


def nielsen_cached(cv: ClassVector, descriptor: str, cache_dir: str | None,
                   workers: int = 1) -> NielsenSet:
    if cache_dir:
        key = cache_key(descriptor, cv)
        ns = load_nielsen(cache_dir, key, cv)
        if ns is not None:
            return ns
        ns = enumerate_nielsen(cv, workers=workers)
        cache_nielsen(cache_dir, key, ns)
        return ns
    return enumerate_nielsen(cv, workers=workers)


def analyze(cv: ClassVector, primes: str | Sequence[int] = "auto", *,
            fusion_depth: int | None = 8, workers: int = 1,
            cache_dir: str | None = None, descriptor: str | None = None) -> Analysis:
    G = cv.group
    ns = nielsen_cached(cv, descriptor or f"{G.name}#{G.order}", cache_dir, workers)
    comps = decompose_components(ns)
    families = fuse_isomorphic_components(ns, comps, depth=fusion_depth) if comps else []
    reports = [component_report(ns, c) for c in comps]
    plist = admissible_primes(G, cv) if primes == "auto" else sorted(set(primes))
    conds, reds, notes = {}, {}, []
    for p in plist:
        cond = check_conditions(G, cv, p)
        conds[p] = cond
        failed1 = [k for k in "abcd" if not cond.flags()[k]]
        failed2 = [k for k in "ef" if not cond.flags()[k]]
        if failed1:
            notes.append(f"p={p}: condition 1 fails ({','.join(failed1)}); not reduced")
            continue
        if failed2:
            notes.append(f"p={p}: condition 2 fails ({','.join(failed2)})")
        for r in reports:
            reds[(r.component, p)] = reduce_component(r, cond)
    return Analysis(cv, ns, comps, families, reports, conds, reds, notes)


@dataclasses.dataclass(frozen=True)
class PrimeSummary:
    p: int
    bad_components: str
    status: str
    d_bad: int
    gdeg: int
    gdeg_supersingular: int

    @classmethod
    def from_report(cls, r: ReductionReport) -> PrimeSummary:
        return cls(r.p, r.bad_components_text(), r.status, r.d_bad["inf"],
                   r.good_ordinary, r.good_supersingular)


@dataclasses.dataclass(frozen=True)
class TableRow:
    group: str
    ni: str
    ram: str
    deg: int
    genus: int
    num: int
    components: tuple[int, ...]
    family_rams: tuple[str, ...]
    reductions: tuple[PrimeSummary, ...]    # bad primes only
    primes: tuple[int, ...]                 # every prime examined
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        for k in ("components", "family_rams", "primes", "notes"):
            d[k] = list(d[k])
        d["reductions"] = [dataclasses.asdict(s) for s in self.reductions]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> TableRow:
        d = dict(d)
        d["reductions"] = tuple(PrimeSummary(**s) for s in d["reductions"])
        for k in ("components", "family_rams", "primes", "notes"):
            d[k] = tuple(d[k])
        return cls(**d)


def table_rows(an: Analysis, group_label: str) -> list[TableRow]:
    rows = []
    by_index = {r.component: r for r in an.reports}
    primes = tuple(sorted(an.conditions))
    for fam in an.families:
        first = by_index[fam[0]]
        summaries = tuple(PrimeSummary.from_report(an.reductions[(first.component, p)])
                          for p in primes
                          if (first.component, p) in an.reductions
                          and an.reductions[(first.component, p)].bad)
        rows.append(TableRow(group_label, an.class_vector.ni_label, first.ram_string,
                             first.degree, first.genus, len(fam), tuple(fam),
                             tuple(by_index[i].ram_string for i in fam), summaries,
                             primes, tuple(an.notes)))
    rows.sort(key=lambda r: (r.deg, r.genus, r.components))
    return rows


def group_label(spec: str, G: FiniteGroup) -> str:
    kind, arg = parse_group_spec(spec)
    if kind == "psl2":
        return arg
    if kind == "dihedral":
        return f"D{2 * int(arg)}"
    return G.name or "G"


def run_table(cfg: RunConfig) -> list[TableRow]:
    G = build_group(cfg.group)
    desc = group_descriptor(cfg.group, G)
    label = group_label(cfg.group, G)
    rows: list[TableRow] = []
    for names in cfg.class_vectors():
        cv = resolve_class_vector(G, names)
        an = analyze(cv, cfg.primes, fusion_depth=cfg.fusion_depth, workers=cfg.workers,
                     cache_dir=cfg.cache_dir, descriptor=desc)
        rows.extend(table_rows(an, label))
    return rows


CSV_COLUMNS = ("group", "ni", "ramification", "deg", "genus", "num", "p", "bad_components",
               "status", "d_bad", "gdeg", "gdeg_supersingular", "notes")


def _csv_lines(rows: Sequence[TableRow]):
    for r in rows:
        head = [r.group, r.ni, r.ram, r.deg, r.genus, r.num]
        notes = "; ".join(r.notes)
        if not r.reductions:
            yield head + ["", "-", "", "", "", "", notes]
        for s in r.reductions:
            yield head + [s.p, s.bad_components, s.status, s.d_bad, s.gdeg,
                          s.gdeg_supersingular, notes]


def _pretty(rows: Sequence[TableRow]) -> str:
    header = ["l", "Ni", "ramification", "deg", "g", "num", "p", "bad comp", "gdeg"]
    lines = []
    prev = None
    for r in rows:
        block = (r.group, r.ni)
        lead = [r.group if block != prev else "", r.ni if block != prev else ""]
        prev = block
        base = lead + [r.ram, str(r.deg), str(r.genus), str(r.num)]
        if not r.reductions:
            lines.append(base + ["-", "", ""])
        for i, s in enumerate(r.reductions):
            cells = base if i == 0 else [""] * len(base)
            lines.append(cells + [str(s.p), s.bad_components, str(s.gdeg)])
    widths = [max(len(x) for x in col) for col in zip(header, *lines)]
    fmt = lambda cells: " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [fmt(header), "-+-".join("-" * w for w in widths)]
    out += [fmt(cells) for cells in lines]
    notes = sorted({(r.group, r.ni, n) for r in rows for n in r.notes})
    out += [f"note ({g} {ni}): {n}" for g, ni, n in notes]
    return "\n".join(out) + "\n"


def emit_report(rows: Sequence[TableRow], fmt: str) -> bytes:
    if fmt == "json":
        doc = {"schema": SCHEMA, "rows": [r.to_dict() for r in rows]}
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(_csv_lines(rows))
        return buf.getvalue().encode()
    if fmt == "pretty":
        return _pretty(rows).encode()
    raise ValueError(f"unknown format {fmt!r}")


def load_report(data: bytes | str) -> list[TableRow]:
    doc = json.loads(data)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return [TableRow.from_dict(r) for r in doc["rows"]]
