"""
Small finite permutation groups, materialized as full element tables.

Every group keeps its elements as rows of an integer array sorted
lexicographically by images, so an element is just its row index and the
identity is always index 0.  Products are computed on demand in vectorized
form: only the images of a short base are composed, and the resulting base
images are looked up to recover the index of the product.

Composition convention: ``a * b`` applies ``a`` first, then ``b``
(``(a*b)(i) = b(a(i))``).  Conjugation is ``x ** y = y^-1 x y``.
"""

from __future__ import annotations

import dataclasses
import math
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

_DENSE_LOOKUP_LIMIT = 1 << 22


@dataclasses.dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{0, ..., degree-1}`` given by its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def __repr__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclasses.dataclass(frozen=True)
class ConjugacyClass:
    rep: int
    members: np.ndarray
    order: int
    label: str

    @property
    def size(self) -> int:
        return len(self.members)


@dataclasses.dataclass(frozen=True)
class ConjugacyClassTable:
    """Partition of a group into conjugacy classes.

    ``class_of[x]`` is the class index of element ``x`` and ``to_rep[x]`` is
    an element ``t`` with ``x ** t == rep`` of that class.
    """

    classes: list[ConjugacyClass]
    class_of: np.ndarray
    to_rep: np.ndarray

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i: int) -> ConjugacyClass:
        return self.classes[i]

    @cached_property
    def by_label(self) -> dict[str, int]:
        return {c.label: i for i, c in enumerate(self.classes)}

    def labels(self) -> list[str]:
        return [c.label for c in self.classes]


@dataclasses.dataclass(frozen=True)
class SylowData:
    p: int
    sylow_generator: int
    normalizer: FiniteGroup
    is_dihedral: bool
    half_order: int
    rotation_generator: int | None = None
    reflection: int | None = None


class FiniteGroup:
    """A permutation group with a complete, sorted element table.

    Either pass ``generators`` (the table is computed by closure) or an
    explicit ``rows`` array that is already closed and sorted.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Permutation] = (),
        *,
        name: str | None = None,
        label_hints: Sequence[tuple[str, Permutation]] = (),
        rows: np.ndarray | None = None,
        parent: FiniteGroup | None = None,
    ):
        self.degree = int(degree)
        self.generators = [g for g in generators]
        for g in self.generators:
            if g.degree != self.degree:
                raise ValueError("generator degree mismatch")
        self.name = name
        self.label_hints = list(label_hints)
        self.parent = parent
        if rows is None:
            rows = _enumerate_rows(self.degree, [np.array(g.images) for g in self.generators])
        self._perms = np.ascontiguousarray(rows, dtype=np.int32)
        self.order = len(self._perms)
        self._build_lookup()
        # derived data shared by other modules (centralizer tables etc.)
        self._cache: dict = {}

    def __repr__(self):
        return f"<FiniteGroup {self.name or ''} order={self.order} degree={self.degree}>"

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        for key in ("classes", "element_orders", "inverses", "elements"):
            state.pop(key, None)
        return state

    # -- indexing ---------------------------------------------------------

    def _build_lookup(self):
        rows = self._perms
        base: list[int] = []
        alive = np.ones(self.order, dtype=bool)
        # greedy base: add points until the pointwise stabilizer is trivial
        for point in range(self.degree):
            if alive.sum() <= 1:
                break
            moved = rows[alive, point] != point
            if moved.any():
                base.append(point)
                alive &= rows[:, point] == point
        self.base = np.array(base, dtype=np.intp)
        n = max(self.degree, 1)
        if n ** len(base) >= 2**62:
            raise ValueError("base too long for integer keys")
        self._radix = n ** np.arange(len(base), dtype=np.int64)
        keys = self._keys(rows[:, self.base]) if len(base) else np.zeros(self.order, np.int64)
        if n ** len(base) <= _DENSE_LOOKUP_LIMIT:
            self._dense = np.full(n ** len(base), -1, dtype=np.int64)
            self._dense[keys] = np.arange(self.order)
        else:
            self._dense = None
            self._key_order = np.argsort(keys)
            self._keys_sorted = keys[self._key_order]

    def _keys(self, base_images: np.ndarray) -> np.ndarray:
        return base_images.astype(np.int64) @ self._radix

    def _lookup(self, base_images: np.ndarray) -> np.ndarray:
        if len(self.base) == 0:
            return np.zeros(len(base_images), dtype=np.int64)
        keys = self._keys(base_images)
        if self._dense is not None:
            return self._dense[keys]
        pos = np.searchsorted(self._keys_sorted, keys)
        return self._key_order[np.minimum(pos, self.order - 1)]

    def index(self, perm: Permutation | Sequence[int]) -> int:
        images = perm.images if isinstance(perm, Permutation) else tuple(perm)
        if len(images) != self.degree:
            raise ValueError("degree mismatch")
        row = np.array(images)
        i = int(self._lookup(row[self.base][None, :])[0])
        if i < 0 or not np.array_equal(self._perms[i], row):
            raise ValueError(f"{perm!r} is not an element of {self!r}")
        return i

    def __contains__(self, perm) -> bool:
        try:
            self.index(perm)
        except ValueError:
            return False
        return True

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(v) for v in self._perms[i]))

    @cached_property
    def elements(self) -> list[Permutation]:
        return [self.element(i) for i in range(self.order)]

    @property
    def rows(self) -> np.ndarray:
        return self._perms

    # -- arithmetic on indices -----------------------------------------------

    def mul(self, a, b):
        """Index of ``a * b``; broadcasts over integer arrays."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp))
        shape = a.shape
        a, b = a.ravel(), b.ravel()
        imgs = self._perms[b[:, None], self._perms[a[:, None], self.base[None, :]]]
        return self._lookup(imgs).reshape(shape)

    @cached_property
    def inverses(self) -> np.ndarray:
        inv_rows = np.argsort(self._perms, axis=1)
        return self._lookup(inv_rows[:, self.base])

    def inv(self, a):
        return self.inverses[np.asarray(a, dtype=np.intp)]

    def conj(self, x, y):
        """Index of ``y^-1 x y``."""
        return self.mul(self.mul(self.inv(y), x), y)

    def power(self, x: int, k: int) -> int:
        out, base = 0, int(x) if k >= 0 else int(self.inverses[x])
        for _ in range(abs(k)):
            out = int(self.mul(out, base))
        return out

    @cached_property
    def element_orders(self) -> np.ndarray:
        rows = self._perms
        n = self.order
        pos = np.broadcast_to(np.arange(self.degree), rows.shape).copy()
        cycle_len = np.zeros(rows.shape, dtype=np.int64)
        start = pos.copy()
        ridx = np.arange(n)[:, None]
        for k in range(1, self.degree + 1):
            pos = rows[ridx, pos]
            hit = (pos == start) & (cycle_len == 0)
            cycle_len[hit] = k
        if self.degree == 0:
            return np.ones(n, dtype=np.int64)
        return np.lcm.reduce(cycle_len, axis=1)

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    def cyclic_subgroup(self, x: int) -> list[int]:
        out, cur = [0], int(x)
        while cur != 0:
            out.append(cur)
            cur = int(self.mul(cur, x))
        return sorted(out)

    # -- subgroups -----------------------------------------------------------

    def closure(self, seeds, stop_above: int | None = None) -> np.ndarray | None:
        """Sorted indices of the subgroup generated by ``seeds``.

        Returns ``None`` as soon as the closure grows past ``stop_above``.
        """
        seeds = np.unique(np.asarray(list(seeds) if not isinstance(seeds, np.ndarray) else seeds,
                                     dtype=np.intp))
        seeds = seeds[seeds != 0]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        count = 1
        if stop_above is not None and count > stop_above:
            return None
        frontier = np.zeros(1, dtype=np.intp)
        while frontier.size and seeds.size:
            cand = np.unique(self.mul(frontier[:, None], seeds[None, :]))
            cand = cand[~seen[cand]]
            seen[cand] = True
            count += cand.size
            if stop_above is not None and count > stop_above:
                return None
            frontier = cand
        return np.flatnonzero(seen)

    def generated_by(self, seeds) -> bool:
        """True when ``seeds`` generate the whole group."""
        # a proper subgroup has index >= 2
        return self.closure(seeds, stop_above=self.order // 2) is None

    def subgroup(self, indices, generators: Sequence[int] | None = None,
                 name: str | None = None) -> FiniteGroup:
        indices = np.sort(np.asarray(indices, dtype=np.intp))
        if generators is None:
            generators = _greedy_generators(self, indices)
        return FiniteGroup(
            self.degree,
            [self.element(g) for g in generators],
            rows=self._perms[indices],
            parent=self,
            name=name,
        )

    @property
    def is_whole(self) -> bool:
        """True when this group is all of its parent (or has no parent)."""
        return self.parent is None or self.order == self.parent.order

    def center(self) -> np.ndarray:
        alive = np.ones(self.order, dtype=bool)
        all_idx = np.arange(self.order)
        for g in self.generators:
            gi = self.index(g)
            alive &= self.mul(all_idx, gi) == self.mul(gi, all_idx)
        return np.flatnonzero(alive)

    def centralizer_indices(self, g: int) -> np.ndarray:
        all_idx = np.arange(self.order)
        return np.flatnonzero(self.mul(all_idx, g) == self.mul(g, all_idx))

    @cached_property
    def classes(self) -> ConjugacyClassTable:
        return conjugacy_classes(self)

    def class_of(self, x: int) -> int:
        return int(self.classes.class_of[x])


def _enumerate_rows(degree: int, gens: list[np.ndarray]) -> np.ndarray:
    ident = np.arange(degree, dtype=np.int32)
    seen = {ident.tobytes()}
    found = [ident[None, :]]
    frontier = ident[None, :]
    while len(frontier) and gens:
        cand = np.concatenate([g[frontier] for g in gens]).astype(np.int32)
        cand = np.unique(cand, axis=0)
        fresh = [row for row in cand if row.tobytes() not in seen]
        if not fresh:
            break
        frontier = np.array(fresh, dtype=np.int32)
        seen.update(row.tobytes() for row in frontier)
        found.append(frontier)
    rows = np.concatenate(found)
    order = np.lexsort(rows.T[::-1]) if degree else np.arange(len(rows))
    return rows[order]


def _greedy_generators(G: FiniteGroup, indices: np.ndarray) -> list[int]:
    covered = np.zeros(G.order, dtype=bool)
    covered[0] = True
    gens: list[int] = []
    for x in indices:
        if not covered[x]:
            gens.append(int(x))
            covered[G.closure(gens)] = True
    return gens


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


# -- constructors ------------------------------------------------------------


def build_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` (rotation ``t``, reflection ``s``).

    For ``n >= 3`` it acts on the vertices of an n-gon.  For ``n <= 2`` that
    action is not faithful, so the group acts on itself instead.
    Reflections ``s t^j`` with ``j`` even are labeled 2A, odd ``j`` 2B.
    """
    if n < 1:
        raise ValueError("dihedral group needs n >= 1")
    if n >= 3:
        t = Permutation(tuple((i + 1) % n for i in range(n)))
        s = Permutation(tuple((-i) % n for i in range(n)))
        degree = n
    else:
        # points (a, b) <-> t^a s^b, index a + n*b; right multiplication
        def point(a, b):
            return a % n + n * (b % 2)

        t_img = [0] * (2 * n)
        s_img = [0] * (2 * n)
        for a in range(n):
            for b in range(2):
                t_img[point(a, b)] = point(a + (-1) ** b, b)
                s_img[point(a, b)] = point(a, b + 1)
        t, s = Permutation(tuple(t_img)), Permutation(tuple(s_img))
        degree = 2 * n
    hints = [("2A", s)]
    if n % 2 == 0:
        hints.append(("2B", s * t))
    return FiniteGroup(degree, [t, s], name=f"D{2 * n}", label_hints=hints)


def mobius_permutation(ell: int, a: int, b: int, c: int, d: int) -> Permutation:
    """The map x -> (a x + b)/(c x + d) on P^1(F_ell); point ``ell`` is infinity."""
    inf = ell
    images = []
    for x in range(ell + 1):
        if x == inf:
            num, den = a, c
        else:
            num, den = (a * x + b) % ell, (c * x + d) % ell
        images.append(inf if den % ell == 0 else num * pow(den, -1, ell) % ell)
    return Permutation(tuple(images))


def least_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


def build_psl2(ell: int) -> FiniteGroup:
    """PSL_2(ell) acting on the projective line over F_ell.

    Class ``{ell}A`` contains x -> x+1, class ``{ell}B`` contains x -> x+nu
    with nu the least quadratic non-residue mod ell.
    """
    if ell < 5 or ell % 2 == 0 or not _is_prime(ell):
        raise ValueError(f"ell must be an odd prime >= 5, got {ell}")
    translate = mobius_permutation(ell, 1, 1, 0, 1)
    invert = mobius_permutation(ell, 0, -1, 1, 0)
    nu = least_nonresidue(ell)
    hints = [(f"{ell}A", translate), (f"{ell}B", mobius_permutation(ell, 1, nu, 0, 1))]
    G = FiniteGroup(ell + 1, [translate, invert], name=f"PSL2({ell})", label_hints=hints)
    expected = (ell - 1) * ell * (ell + 1) // 2
    assert G.order == expected, (G.order, expected)
    return G


# -- conjugacy ---------------------------------------------------------------


def _letters():
    for i in range(26):
        yield chr(ord("A") + i)
    k = 1
    while True:
        for i in range(26):
            yield chr(ord("A") + i) + str(k)
        k += 1


def conjugacy_classes(G: FiniteGroup) -> ConjugacyClassTable:
    """Conjugacy classes ordered by (element order, size, representative).

    The representative is the least member.  Labels are the element order
    followed by a letter; ``G.label_hints`` pins letters for chosen classes.
    """
    n = G.order
    all_idx = np.arange(n)
    gens = [G.index(g) for g in G.generators]
    conj_by = [G.conj(all_idx, s) for s in gens]
    class_of = np.full(n, -1, dtype=np.int64)
    # u[x]: element with rep ** u == x
    u = np.zeros(n, dtype=np.int64)
    raw = []
    cursor = 0
    while True:
        free = np.flatnonzero(class_of[cursor:] < 0)
        if free.size == 0:
            break
        rep = cursor + int(free[0])
        cursor = rep
        cid = len(raw)
        class_of[rep] = cid
        u[rep] = 0
        frontier = np.array([rep])
        members = [frontier]
        while frontier.size:
            nxt = []
            for s, table in zip(gens, conj_by):
                img = table[frontier]
                fresh_mask = class_of[img] < 0
                img, src = img[fresh_mask], frontier[fresh_mask]
                img, first = np.unique(img, return_index=True)
                src = src[first]
                class_of[img] = cid
                u[img] = G.mul(u[src], s)
                nxt.append(img)
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=np.int64)
            members.append(frontier)
        raw.append((rep, np.sort(np.concatenate(members))))
    orders = G.element_orders
    perm = sorted(range(len(raw)), key=lambda i: (int(orders[raw[i][0]]), len(raw[i][1]), raw[i][0]))
    remap = np.empty(len(raw), dtype=np.int64)
    remap[perm] = np.arange(len(raw))
    class_of = remap[class_of]

    pinned: dict[int, str] = {}
    for label, elt in G.label_hints:
        pinned[int(class_of[G.index(elt)])] = label
    used = set(pinned.values())
    classes = []
    letter_iters: dict[int, object] = {}
    for new_id, old_id in enumerate(perm):
        rep, members = raw[old_id]
        m = int(orders[rep])
        if new_id in pinned:
            label = pinned[new_id]
        else:
            it = letter_iters.setdefault(m, _letters())
            label = f"{m}{next(it)}"
            while label in used:
                label = f"{m}{next(it)}"
            used.add(label)
        classes.append(ConjugacyClass(rep=rep, members=members, order=m, label=label))
    return ConjugacyClassTable(classes=classes, class_of=class_of, to_rep=G.inv(u))


def subgroup_closure(G: FiniteGroup, seeds: Iterable[Permutation | int]) -> FiniteGroup:
    idx = [s if isinstance(s, (int, np.integer)) else G.index(s) for s in seeds]
    members = G.closure(idx)
    gens = [int(i) for i in idx if int(i) != 0]
    return G.subgroup(members, generators=gens or None)


def centralizer(G: FiniteGroup, g: Permutation | int) -> FiniteGroup:
    gi = g if isinstance(g, (int, np.integer)) else G.index(g)
    return G.subgroup(G.centralizer_indices(int(gi)))


def sylow_normalizer_analysis(G: FiniteGroup, p: int) -> SylowData:
    """Normalizer of a subgroup of order ``p`` and its dihedral structure."""
    if p % 2 == 0 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if G.order % p or G.order % (p * p) == 0:
        raise ValueError(f"p={p} must divide |G|={G.order} exactly once")
    x = int(np.flatnonzero(G.element_orders == p)[0])
    in_p = np.zeros(G.order, dtype=bool)
    in_p[G.cyclic_subgroup(x)] = True
    all_idx = np.arange(G.order)
    norm_idx = np.flatnonzero(in_p[G.conj(x, all_idx)])
    N = G.subgroup(norm_idx)
    k = len(norm_idx) // 2
    if len(norm_idx) % 2 == 0:
        orders = G.element_orders
        for r in norm_idx[orders[norm_idx] == k]:
            r = int(r)
            rot = np.zeros(G.order, dtype=bool)
            rot[G.cyclic_subgroup(r)] = True
            r_inv = int(G.inverses[r])
            for s in norm_idx:
                s = int(s)
                if rot[s] or orders[s] != 2:
                    continue
                if int(G.conj(r, s)) == r_inv:
                    return SylowData(p, x, N, True, k, r, s)
    return SylowData(p, x, N, False, k)


def load_permutation_group(path: str) -> FiniteGroup:
    """Read generators from a JSON file (``{"generators": [[...], ...]}``) or
    from a text file with one image list per line."""
    import json

    with open(path) as f:
        text = f.read()
    try:
        data = json.loads(text)
        gens = data["generators"] if isinstance(data, dict) else data
        name = data.get("name") if isinstance(data, dict) else None
    except json.JSONDecodeError:
        gens = [[int(v) for v in line.replace(",", " ").split()]
                for line in text.splitlines() if line.strip() and not line.startswith("#")]
        name = None
    perms = [Permutation(tuple(g)) for g in gens]
    if not perms:
        raise ValueError(f"no generators in {path}")
    return FiniteGroup(perms[0].degree, perms, name=name or f"perm:{path}")
