"""
Cusps, ramification and genus of a component over the lambda-line.
"""

from __future__ import annotations

import dataclasses
import re
from collections import Counter
from typing import Mapping, Sequence

import numpy as np

from . import InconsistencyError
from .braid import CUSPS, Component, _orbits, action_permutations, gamma
from .nielsen import NielsenSet


@dataclasses.dataclass(frozen=True)
class CuspRecord:
    w: str
    orbit: tuple[int, ...]
    e: int
    gamma_class: int
    n: int
    gamma_label: str = ""

    @property
    def order_differs(self) -> bool:
        """Ramification index and cusp order disagree (possible when
        ``gamma`` generates a group the tuple commutes with)."""
        return self.e != self.n


@dataclasses.dataclass(frozen=True)
class ComponentReport:
    component: int
    degree: int
    cusps: Mapping[str, tuple[CuspRecord, ...]]
    genus: int
    ram_string: str

    def e_multiset(self, w: str) -> Counter:
        return Counter(c.e for c in self.cusps[w])

    def ramification(self) -> list[Counter]:
        return [self.e_multiset(w) for w in CUSPS]


def cusps_over(ns: NielsenSet, component: Component, w: str,
               check: bool = True) -> list[CuspRecord]:
    """``a_w``-orbits inside the component, with the order of ``gamma_w``."""
    G = ns.group
    acts = action_permutations(ns)
    members = list(component.members)
    local = {m: i for i, m in enumerate(members)}
    perm = np.array([local[int(acts[w][m])] for m in members])
    table = G.classes
    out = []
    for orbit in _orbits(len(members), [perm]):
        glob = tuple(members[i] for i in orbit)
        gams = gamma(G, w, ns.array[list(glob)])
        classes = set(int(c) for c in table.class_of[gams])
        if len(classes) != 1:
            raise InconsistencyError(f"gamma class not constant on cusp orbit over {w}")
        cls = classes.pop()
        rec = CuspRecord(w, glob, len(glob), cls, table[cls].order, table[cls].label)
        if check and rec.n % rec.e:
            raise InconsistencyError(f"orbit length {rec.e} does not divide cusp order {rec.n}")
        out.append(rec)
    out.sort(key=lambda c: (c.e, c.orbit))
    return out


def cusp_order(c: CuspRecord) -> int:
    if c.n % c.e:
        raise InconsistencyError(f"orbit length {c.e} does not divide cusp order {c.n}")
    return c.n


def genus_rh(degree: int, e_lists: Sequence[Sequence[int]]) -> int:
    """Genus of a cover of P^1 branched over three points.

    ``2g - 2 = -2 degree + sum (e - 1)`` over all cusps.
    """
    for es in e_lists:
        if sum(es) != degree:
            raise InconsistencyError(f"ramification {sorted(es)} does not sum to degree {degree}")
    twice = -2 * degree + sum(e - 1 for es in e_lists for e in es) + 2
    if twice % 2 or twice < 0:
        raise InconsistencyError(f"Riemann-Hurwitz gives non-integral or negative genus ({twice}/2)")
    return twice // 2


def format_ram(multisets: Sequence[Mapping[int, int]]) -> str:
    """Render ramification as ``a^b`` tokens per point, ``-`` repeating the
    previous point: ``4^2;-;1^4 2^2``."""
    parts = []
    prev = None
    for ms in multisets:
        cur = {e: k for e, k in ms.items() if k}
        if prev is not None and cur == prev:
            parts.append("-")
        else:
            parts.append(" ".join(f"{e}^{k}" for e, k in sorted(cur.items())))
        prev = cur
    return ";".join(parts)


_TOKEN = re.compile(r"^(\d+)(?:\^\{?(\d+)\}?)?$")


def parse_ram(text: str) -> list[Counter]:
    """Inverse of ``format_ram``; also accepts bare ``a`` for ``a^1`` and
    TeX braces as in ``7^{12}``."""
    out: list[Counter] = []
    for part in text.split(";"):
        part = part.strip()
        if part in ("-", "−"):
            if not out:
                raise ValueError("ditto marker before any ramification data")
            out.append(Counter(out[-1]))
            continue
        ms: Counter = Counter()
        for tok in part.split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad ramification token {tok!r}")
            ms[int(m.group(1))] += int(m.group(2) or 1)
        out.append(ms)
    if len(out) != 3:
        raise ValueError(f"expected three ramification fields, got {len(out)}")
    return out


def component_report(ns: NielsenSet, component: Component) -> ComponentReport:
    cusps = {w: tuple(cusps_over(ns, component, w)) for w in CUSPS}
    e_lists = [[c.e for c in cusps[w]] for w in CUSPS]
    genus = genus_rh(component.degree, e_lists)
    ram = format_ram([Counter(es) for es in e_lists])
    return ComponentReport(component.index, component.degree, cusps, genus, ram)
