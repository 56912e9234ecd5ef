"""
Inner Nielsen classes of 4-tuples in a finite group.

A Nielsen tuple is a 4-tuple of element indices ``(g1, g2, g3, g4)`` with
``g1 g2 g3 g4 = 1``, ``g_i`` in a prescribed class ``C_i``, generating the
group.  Tuples are taken modulo simultaneous conjugation; the canonical
representative of an orbit is its lexicographically least member.  Because
group elements are indexed in lexicographic order of their images, comparing
index tuples is the same as comparing permutations.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import FiniteGroup

NielsenTuple = tuple[int, int, int, int]

# conjugation tables beyond this many entries are computed on the fly
_CONJ_TABLE_LIMIT = 20_000_000


@dataclasses.dataclass(frozen=True)
class ClassVector:
    group: FiniteGroup
    classes: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.classes) != 4:
            raise ValueError("class vector must have length 4")
        n = len(self.group.classes)
        for c in self.classes:
            if not 0 <= c < n:
                raise ValueError(f"invalid class index {c}")

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.group.classes[c].order for c in self.classes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.group.classes[c].label for c in self.classes)

    @property
    def ni_label(self) -> str:
        """Compact label such as ``AABB`` when all classes share one order."""
        orders = set(self.orders)
        if len(orders) == 1:
            m = str(orders.pop())
            return "".join(lab[len(m):] for lab in self.labels)
        return ",".join(self.labels)

    def __str__(self):
        return ",".join(self.labels)


def resolve_class_vector(G: FiniteGroup, names: str | Sequence[str]) -> ClassVector:
    """Resolve labels like ``"5A,5A,5B,5B"``.

    A bare element order (``"3"``) is accepted when exactly one class has
    that order.
    """
    if isinstance(names, str):
        names = [s.strip() for s in names.split(",")]
    names = list(names)
    if len(names) != 4:
        raise ValueError(f"expected 4 class labels, got {len(names)}")
    table = G.classes
    out = []
    for name in names:
        if name in table.by_label:
            out.append(table.by_label[name])
            continue
        if name.isdigit():
            hits = [i for i, c in enumerate(table.classes) if c.order == int(name)]
            if len(hits) == 1:
                out.append(hits[0])
                continue
            if len(hits) > 1:
                raise ValueError(f"ambiguous class label {name!r}: "
                                 f"{[table[i].label for i in hits]}")
        raise ValueError(f"unknown class label {name!r}; known: {table.labels()}")
    return ClassVector(G, tuple(out))


class _CentralizerTable:
    """Conjugation by the centralizer of one class representative."""

    def __init__(self, G: FiniteGroup, rep: int):
        self.G = G
        self.elements = G.centralizer_indices(rep)
        if len(self.elements) * G.order <= _CONJ_TABLE_LIMIT:
            all_idx = np.arange(G.order)
            self.table = G.conj(all_idx[None, :], self.elements[:, None])
        else:
            self.table = None

    def conjugates(self, x: np.ndarray) -> np.ndarray:
        """Array of shape ``(len(centralizer),) + x.shape``."""
        if self.table is not None:
            return self.table[:, x]
        return np.stack([self.G.conj(x, z) for z in self.elements])


def _centralizer_table(G: FiniteGroup, cls: int) -> _CentralizerTable:
    key = ("centralizer_table", cls)
    if key not in G._cache:
        G._cache[key] = _CentralizerTable(G, G.classes[cls].rep)
    return G._cache[key]


def canonicalize_many(G: FiniteGroup, tuples) -> np.ndarray:
    """Canonical forms of a batch of tuples (array of shape ``(B, 4)``).

    Conjugates ``g1`` to its class representative, then minimizes the rest
    over the centralizer of that representative.
    """
    tuples = np.asarray(tuples, dtype=np.int64).reshape(-1, 4)
    if len(tuples) == 0:
        return tuples.copy()
    table = G.classes
    t = table.to_rep[tuples[:, 0]]
    moved = G.conj(tuples, t[:, None])
    out = np.empty_like(moved)
    cls = table.class_of[moved[:, 0]]
    O = np.int64(G.order)
    for c in np.unique(cls):
        sel = np.flatnonzero(cls == c)
        sub = moved[sel]
        conjs = _centralizer_table(G, int(c)).conjugates(sub[:, 1:])  # (Z, b, 3)
        keys = (conjs[..., 0] * O + conjs[..., 1]) * O + conjs[..., 2]
        best = np.argmin(keys, axis=0)
        out[sel, 0] = sub[:, 0]
        out[sel, 1:] = conjs[best, np.arange(len(sel))]
    return out


def canonicalize_tuple(G: FiniteGroup, t: Sequence[int]) -> NielsenTuple:
    return tuple(int(v) for v in canonicalize_many(G, [t])[0])


def product(G: FiniteGroup, t: Sequence[int]) -> int:
    out = 0
    for g in t:
        out = int(G.mul(out, g))
    return out


@dataclasses.dataclass(frozen=True)
class NielsenSet:
    class_vector: ClassVector
    tuples: tuple[NielsenTuple, ...]

    @property
    def group(self) -> FiniteGroup:
        return self.class_vector.group

    @property
    def d(self) -> int:
        return len(self.tuples)

    def __len__(self):
        return len(self.tuples)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.tuples, dtype=np.int64).reshape(-1, 4)

    @cached_property
    def index(self) -> dict[NielsenTuple, int]:
        return {t: i for i, t in enumerate(self.tuples)}

    def verify(self) -> None:
        """Re-check product one, class membership, canonical form and generation."""
        G = self.group
        arr = self.array
        if len(arr) == 0:
            return
        prod = G.mul(G.mul(G.mul(arr[:, 0], arr[:, 1]), arr[:, 2]), arr[:, 3])
        if np.any(prod != 0):
            raise AssertionError("product-one violated")
        cls = G.classes.class_of[arr]
        if np.any(cls != np.array(self.class_vector.classes)):
            raise AssertionError("class membership violated")
        if not np.array_equal(canonicalize_many(G, arr), arr):
            raise AssertionError("non-canonical tuple")
        if list(self.tuples) != sorted(set(self.tuples)):
            raise AssertionError("tuples not sorted and unique")
        for t in self.tuples:
            if not G.generated_by(t):
                raise AssertionError(f"tuple {t} does not generate")


def _candidates(G: FiniteGroup, cv: ClassVector, anchor: int, g2_members: np.ndarray) -> np.ndarray:
    table = G.classes
    c3 = table[cv.classes[2]].members
    c4 = cv.classes[3]
    out = []
    chunk = max(1, 2_000_000 // max(len(c3), 1))
    for start in range(0, len(g2_members), chunk):
        g2 = g2_members[start:start + chunk]
        g12 = G.mul(anchor, g2)
        g123 = G.mul(g12[:, None], c3[None, :])
        g4 = G.inv(g123)
        i2, i3 = np.nonzero(table.class_of[g4] == c4)
        if len(i2):
            out.append(np.column_stack([np.full(len(i2), anchor), g2[i2], c3[i3], g4[i2, i3]]))
    if not out:
        return np.zeros((0, 4), dtype=np.int64)
    return np.concatenate(out)


def _enumerate_shard(G: FiniteGroup, cv: ClassVector, anchor: int, g2_members: np.ndarray,
                     require_generation: bool) -> np.ndarray:
    cand = _candidates(G, cv, anchor, g2_members)
    if len(cand) == 0:
        return cand
    canon = np.unique(canonicalize_many(G, cand), axis=0)
    if require_generation:
        keep = [G.generated_by(row) for row in canon]
        canon = canon[np.array(keep, dtype=bool)]
    return canon


def enumerate_nielsen(cv: ClassVector, *, anchor: int | None = None,
                      require_generation: bool = True, workers: int = 1) -> NielsenSet:
    """All canonical Nielsen tuples for the class vector.

    ``g1`` is pinned to ``anchor`` (default: the class representative),
    ``g2`` and ``g3`` run over their classes and ``g4`` is forced by the
    product relation.  Work is sharded by ``g2``; shard outputs are merged
    as a sorted union, so the result does not depend on ``workers``.
    """
    G = cv.group
    table = G.classes
    if anchor is None:
        anchor = table[cv.classes[0]].rep
    elif table.class_of[anchor] != cv.classes[0]:
        raise ValueError("anchor not in the first class")
    g2_all = table[cv.classes[1]].members
    if workers > 1 and len(g2_all) > 1:
        shards = np.array_split(g2_all, min(workers * 4, len(g2_all)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_enumerate_shard, [G] * len(shards), [cv] * len(shards),
                                  [anchor] * len(shards), shards,
                                  [require_generation] * len(shards)))
        parts = [p for p in parts if len(p)]
        found = np.unique(np.concatenate(parts), axis=0) if parts else np.zeros((0, 4), np.int64)
    else:
        found = _enumerate_shard(G, cv, anchor, g2_all, require_generation)
    tuples = tuple(tuple(int(v) for v in row) for row in found)
    return NielsenSet(cv, tuples)
