"""Reference table shipped with the package and a row-by-row diff against it."""

from __future__ import annotations

import dataclasses
import json
from importlib import resources
from typing import Sequence

from .covers import parse_ram
from .report import TableRow


@dataclasses.dataclass(frozen=True)
class ReferenceRow:
    ell: int
    ni: str
    ram: str
    deg: int
    genus: int
    num: int
    reductions: tuple[tuple[int, tuple[tuple[int, int], ...], int], ...]   # (p, ((k, N), ...), gdeg)

    def bad_text(self, p: int) -> str:
        for q, counts, _ in self.reductions:
            if q == p:
                return ", ".join(f"{k}× N={N}" for k, N in sorted(counts, key=lambda c: c[1]))
        raise KeyError(p)


@dataclasses.dataclass(frozen=True, order=True)
class Divergence:
    ell: int
    ni: str
    deg: int
    field: str
    p: int | None
    expected: str = dataclasses.field(compare=False, default="")
    computed: str = dataclasses.field(compare=False, default="")

    @property
    def key(self) -> tuple:
        return (self.ell, self.ni, self.deg, self.field, self.p)


def load_reference() -> tuple[list[ReferenceRow], list[dict]]:
    text = resources.files("hurwitzred").joinpath("data/reference_table.json").read_text()
    doc = json.loads(text)
    rows = []
    for ell, ni, ram, deg, genus, num, reds in doc["rows"]:
        reds = tuple((p, tuple((k, N) for k, N in counts), gdeg) for p, counts, gdeg in reds)
        rows.append(ReferenceRow(ell, ni, ram, deg, genus, num, reds))
    return rows, doc["allowlist"]


def allowlist_keys(allowlist: Sequence[dict]) -> set[tuple]:
    return {(a["ell"], a["ni"], a["deg"], a["field"], a["p"]) for a in allowlist}


def _same_ram(a: str, b: str) -> bool:
    return [dict(x) for x in parse_ram(a)] == [dict(x) for x in parse_ram(b)]


def diff_rows(computed: Sequence[TableRow], reference: Sequence[ReferenceRow],
              ell: int) -> list[Divergence]:
    """All disagreements between computed rows for PSL2(ell) and the reference rows.

    Ramification matches if any component of the fused family matches; a
    bad-component structure matches if it is one of the computed solutions.
    """
    ref = {(r.ni, r.deg): r for r in reference if r.ell == ell}
    ours = {(r.ni, r.deg): r for r in computed}
    out = []
    for key in sorted(set(ref) | set(ours)):
        ni, deg = key
        if key not in ours or key not in ref:
            out.append(Divergence(ell, ni, deg, "row", None,
                                  "present" if key in ref else "absent",
                                  "present" if key in ours else "absent"))
            continue
        a, b = ref[key], ours[key]
        if not any(_same_ram(a.ram, r) for r in b.family_rams):
            out.append(Divergence(ell, ni, deg, "ram", None, a.ram, " / ".join(b.family_rams)))
        for field in ("genus", "num"):
            if getattr(a, field) != getattr(b, field):
                out.append(Divergence(ell, ni, deg, field, None,
                                      str(getattr(a, field)), str(getattr(b, field))))
        ref_p = {p: gdeg for p, _, gdeg in a.reductions}
        our_p = {s.p: s for s in b.reductions}
        if set(ref_p) != set(our_p):
            out.append(Divergence(ell, ni, deg, "primes", None,
                                  str(sorted(ref_p)), str(sorted(our_p))))
        for p in sorted(set(ref_p) & set(our_p)):
            s = our_p[p]
            if ref_p[p] != s.gdeg:
                out.append(Divergence(ell, ni, deg, "gdeg", p, str(ref_p[p]), str(s.gdeg)))
            if a.bad_text(p) not in s.bad_components.split(" or "):
                out.append(Divergence(ell, ni, deg, "bad_components", p, a.bad_text(p),
                                      s.bad_components))
    return out
