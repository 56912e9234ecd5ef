"""
Hurwitz braid action on Nielsen tuples and orbit decomposition.

Words act on the right and their letters are applied left to right.  The
elementary move ``Q_i`` replaces ``(g_i, g_{i+1})`` by
``(g_{i+1}, g_{i+1}^-1 g_i g_{i+1})``.  The loops around the cusps of the
lambda-line are

    a_0   = Q3 Q2 Q1^2 Q2^-1 Q3^-1
    a_1   = Q3 Q2^2 Q3^-1
    a_inf = Q3^2

Evaluating these words is the source of truth; ``closed_form`` gives the
shortcut formulas and is cross-checked against the words on every Nielsen
set before any orbit is computed.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

from . import InconsistencyError
from .groups import FiniteGroup
from .nielsen import NielsenSet, canonicalize_many

CUSPS = ("0", "1", "inf")

A_WORDS: dict[str, tuple[int, ...]] = {
    "0": (3, 2, 1, 1, -2, -3),
    "1": (3, 2, 2, -3),
    "inf": (3, 3),
}


@dataclasses.dataclass(frozen=True)
class BraidWord:
    letters: tuple[int, ...]

    def __post_init__(self):
        for a in self.letters:
            if abs(a) not in (1, 2, 3):
                raise ValueError(f"bad braid letter {a}")

    def inverse(self) -> BraidWord:
        return BraidWord(tuple(-a for a in reversed(self.letters)))

    def __mul__(self, other: BraidWord) -> BraidWord:
        return BraidWord(self.letters + other.letters)


def _as_batch(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=np.int64)
    single = arr.ndim == 1
    return arr.reshape(-1, 4), single


def apply_q(G: FiniteGroup, i: int, sign: int, t):
    """Elementary Hurwitz move at positions ``(i, i+1)``; not canonicalized.

    Accepts one tuple or an array of shape ``(B, 4)``.
    """
    if i not in (1, 2, 3):
        raise ValueError(f"Q index must be 1..3, got {i}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    arr, single = _as_batch(t)
    out = arr.copy()
    a, b = arr[:, i - 1], arr[:, i]
    if sign == 1:
        out[:, i - 1] = b
        out[:, i] = G.conj(a, b)
    else:
        out[:, i - 1] = G.conj(b, G.inv(a))
        out[:, i] = a
    return tuple(int(v) for v in out[0]) if single else out


def apply_word(G: FiniteGroup, word: Sequence[int] | BraidWord, t):
    letters = word.letters if isinstance(word, BraidWord) else word
    out = t
    for a in letters:
        out = apply_q(G, abs(a), 1 if a > 0 else -1, out)
    return out


def gamma(G: FiniteGroup, w: str, t):
    """The element whose conjugacy class labels the cusp over ``w``."""
    arr, single = _as_batch(t)
    g1, g2, g3, g4 = arr.T
    if w == "0":
        out = G.mul(g4, g1)
    elif w == "1":
        out = G.mul(g2, g4)
    elif w == "inf":
        out = G.mul(g3, g4)
    else:
        raise ValueError(f"unknown cusp label {w!r}")
    return int(out[0]) if single else out


def commutator(G: FiniteGroup, a, b):
    """``[a, b] = a b a^-1 b^-1``, the convention matching the a_1 word."""
    return G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b)))


def closed_form(G: FiniteGroup, w: str, t):
    arr, single = _as_batch(t)
    g1, g2, g3, g4 = arr.T
    gam = gamma(G, w, arr)
    out = arr.copy()
    if w == "0":
        out[:, 0] = G.conj(g1, gam)
        out[:, 3] = G.conj(g4, gam)
    elif w == "1":
        out[:, 1] = G.conj(g2, gam)
        out[:, 2] = G.conj(g3, commutator(G, G.inv(g2), G.inv(g4)))
        out[:, 3] = G.conj(g4, gam)
    else:
        out[:, 2] = G.conj(g3, gam)
        out[:, 3] = G.conj(g4, gam)
    return tuple(int(v) for v in out[0]) if single else out


def apply_a(G: FiniteGroup, w: str, c):
    """Action of ``a_w`` on canonical classes (word evaluation, then canonicalize)."""
    raw = apply_word(G, A_WORDS[w], c)
    canon = canonicalize_many(G, raw)
    arr, single = _as_batch(c)
    return tuple(int(v) for v in canon[0]) if single else canon


def action_permutations(ns: NielsenSet, check: bool = True) -> dict[str, np.ndarray]:
    """``perm[w][i]`` is the index of tuple ``i`` moved by ``a_w``."""
    key = "_action_permutations"
    cached = ns.__dict__.get(key)
    if cached is not None:
        return cached
    G = ns.group
    arr = ns.array
    index = ns.index
    out = {}
    for w in CUSPS:
        moved = canonicalize_many(G, apply_word(G, A_WORDS[w], arr))
        if check:
            via_formula = canonicalize_many(G, closed_form(G, w, arr))
            if not np.array_equal(moved, via_formula):
                raise InconsistencyError(f"braid word for a_{w} disagrees with closed formula")
        try:
            out[w] = np.array([index[tuple(int(v) for v in row)] for row in moved], dtype=np.int64)
        except KeyError as exc:
            raise InconsistencyError(f"a_{w} leaves the Nielsen set") from exc
    if check and len(arr):
        composed = out["inf"][out["1"][out["0"]]]
        if not np.array_equal(composed, np.arange(len(arr))):
            raise InconsistencyError("a_0 a_1 a_inf does not act trivially")
    ns.__dict__[key] = out
    return out


@dataclasses.dataclass(frozen=True)
class Component:
    index: int
    members: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.members)


def _orbits(n: int, perms: Sequence[np.ndarray]) -> list[list[int]]:
    label = np.full(n, -1, dtype=np.int64)
    orbits = []
    for start in range(n):
        if label[start] >= 0:
            continue
        k = len(orbits)
        label[start] = k
        stack, members = [start], [start]
        while stack:
            x = stack.pop()
            for p in perms:
                y = int(p[x])
                if label[y] < 0:
                    label[y] = k
                    stack.append(y)
                    members.append(y)
        orbits.append(sorted(members))
    return orbits


def decompose_components(ns: NielsenSet) -> list[Component]:
    """Orbits of ``<a_0, a_1>`` sorted by (size, least member)."""
    acts = action_permutations(ns)
    orbits = _orbits(ns.d, [acts["0"], acts["1"]])
    orbits.sort(key=lambda o: (len(o), o[0]))
    return [Component(i, tuple(o)) for i, o in enumerate(orbits)]


def fuse_isomorphic_components(ns: NielsenSet, comps: Sequence[Component],
                               depth: int | None = 8) -> list[list[int]]:
    """Group components that some word in ``Q1..Q3`` of length at most
    ``depth`` carries into one another while staying inside the class
    vector.  ``depth=None`` searches the whole braid orbit.

    Returns families as sorted lists of component indices, sorted by their
    first member.
    """
    G = ns.group
    target = np.array(ns.class_vector.classes)
    comp_of = np.empty(ns.d, dtype=np.int64)
    for c in comps:
        comp_of[list(c.members)] = c.index
    parent = list(range(len(comps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    moves = [(i, s) for i in (1, 2, 3) for s in (1, -1)]
    for comp in comps:
        if len({find(c.index) for c in comps}) == 1:
            break
        layer = ns.array[list(comp.members)]
        seen = {tuple(int(v) for v in row) for row in layer}
        steps = 0
        while len(layer) and (depth is None or steps < depth):
            steps += 1
            nxt = np.concatenate([apply_q(G, i, s, layer) for i, s in moves])
            nxt = np.unique(canonicalize_many(G, nxt), axis=0)
            fresh = [row for row in nxt if tuple(int(v) for v in row) not in seen]
            if not fresh:
                break
            layer = np.array(fresh, dtype=np.int64)
            seen.update(tuple(int(v) for v in row) for row in layer)
            inside = np.all(G.classes.class_of[layer] == target, axis=1)
            for row in layer[inside]:
                other = int(comp_of[ns.index[tuple(int(v) for v in row)]])
                a, b = find(comp.index), find(other)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    families: dict[int, list[int]] = {}
    for c in comps:
        families.setdefault(find(c.index), []).append(c.index)
    return sorted(families.values(), key=lambda f: f[0])
