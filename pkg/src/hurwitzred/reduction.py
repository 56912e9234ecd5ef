"""
Reduction modulo p of the Hurwitz curve: hypotheses, bad cusps, good-cover
counts, and the levels and multiplicities of bad components.
"""

from __future__ import annotations

import dataclasses
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import InconsistencyError
from .braid import CUSPS
from .covers import ComponentReport
from .groups import FiniteGroup, SylowData, _is_prime, build_dihedral, sylow_normalizer_analysis
from .nielsen import ClassVector, enumerate_nielsen, resolve_class_vector
from .supersingular import moduli_ramification_bound


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def admissible_primes(G: FiniteGroup, cv: ClassVector) -> list[int]:
    """Odd primes dividing |G| exactly once and none of the class orders."""
    return [p for p in _prime_factors(G.order)
            if p != 2 and G.order % (p * p) and all(m % p for m in cv.orders)]


@dataclasses.dataclass(frozen=True)
class ReductionConditions:
    p: int
    odd: bool               # (a)
    coprime_orders: bool    # (b)
    exact_division: bool    # (c)
    dihedral_normalizer: bool  # (d)
    trivial_center: bool    # (e)
    generation: bool        # (f)
    sylow: SylowData | None
    k: int | None

    @property
    def cond1(self) -> bool:
        return self.odd and self.coprime_orders and self.exact_division and self.dihedral_normalizer

    @property
    def cond2(self) -> bool:
        return self.trivial_center and self.generation

    def flags(self) -> dict[str, bool]:
        return {"a": self.odd, "b": self.coprime_orders, "c": self.exact_division,
                "d": self.dihedral_normalizer, "e": self.trivial_center, "f": self.generation}


def _generation_condition(G: FiniteGroup, cv: ClassVector, sylow: SylowData) -> bool:
    # generation is conjugation-covariant: fix one subgroup of order p and
    # test one class element per orbit of its normalizer
    x = sylow.sylow_generator
    normalizer = np.array([G.index(g) for g in sylow.normalizer.elements])
    for c in sorted(set(cv.classes)):
        members = G.classes[c].members
        done = np.zeros(G.order, dtype=bool)
        for y in members:
            if done[y]:
                continue
            done[G.conj(int(y), normalizer)] = True
            if not G.generated_by([x, int(y)]):
                return False
    return True


def check_conditions(G: FiniteGroup, cv: ClassVector, p: int) -> ReductionConditions:
    odd = p != 2 and _is_prime(p)
    coprime = all(m % p for m in cv.orders)
    exact = G.order % p == 0 and G.order % (p * p) != 0
    sylow = sylow_normalizer_analysis(G, p) if (odd and exact) else None
    dihedral = bool(sylow and sylow.is_dihedral)
    trivial_center = len(G.center()) == 1
    generation = _generation_condition(G, cv, sylow) if sylow else False
    k = sylow.half_order if dihedral else None
    return ReductionConditions(p, odd, coprime, exact, dihedral, trivial_center, generation,
                               sylow, k)


def d_bad(report: ComponentReport, p: int, w: str = "inf") -> int:
    """Number of tuples of the component whose cusp over ``w`` has order divisible by p."""
    return sum(c.e for c in report.cusps[w] if c.n % p == 0)


def good_counts(degree: int, dbad: int, p: int) -> tuple[int, int]:
    """Covers with good reduction over an ordinary and over a supersingular lambda."""
    if dbad % p:
        raise InconsistencyError(f"d_bad={dbad} is not divisible by p={p}")
    return degree - dbad, degree - (p + 1) * dbad // p


def candidate_levels(conds: ReductionConditions) -> list[int]:
    if not conds.dihedral_normalizer:
        raise ValueError("levels need a dihedral Sylow normalizer")
    p, k = conds.p, conds.k
    return [N for N in range(p, k + 1, p) if k % N == 0]


def multiplicity(N: int, p: int) -> int:
    if N % p:
        raise ValueError("p must divide the level")
    return (p - 1) // 2 if N == p else p - 1


@lru_cache(maxsize=None)
def x2_degree(Nprime: int) -> int:
    """Degree of X_2(N') over the lambda-line, as a dihedral Nielsen count
    for the group of order 4N' and classes (2A, 2A, 2B, 2B)."""
    if Nprime < 1:
        raise ValueError("N' must be positive")
    if Nprime == 1:
        return 1
    D = build_dihedral(2 * Nprime)
    d = enumerate_nielsen(resolve_class_vector(D, "2A,2A,2B,2B")).d
    if Nprime == 2 and d != 2:
        raise InconsistencyError(f"X_2(2) should have degree 2, dihedral count gives {d}")
    return d


@dataclasses.dataclass(frozen=True)
class BadStructureSolution:
    counts: tuple[tuple[int, int], ...]   # (level N, k_N) with k_N > 0
    total_check: int

    def describe(self) -> str:
        return ", ".join(f"{k}× N={N}" for N, k in self.counts)

    def levels(self) -> list[int]:
        return [N for N, _ in self.counts]


def level_weight(N: int, p: int) -> int:
    """Contribution of one bad component of level N to d_bad."""
    return multiplicity(N, p) * p * x2_degree(N // p)


def solve_bad_structure(dbad: int, p: int, levels: Sequence[int],
                        bad_cusp_orders: Sequence[int]) -> tuple[list[BadStructureSolution], str]:
    """Non-negative level multiplicities matching ``d_bad`` in which every
    bad cusp order divides some level that occurs.

    Returns the solutions and a status: ``unique``, ``ambiguous`` or
    ``infeasible``.
    """
    levels = sorted(set(levels))
    weights = [level_weight(N, p) for N in levels]
    orders = sorted(set(bad_cusp_orders))
    sols: list[BadStructureSolution] = []

    def rec(i, remaining, chosen):
        if i == len(levels):
            if remaining:
                return
            used = [N for N, k in zip(levels, chosen) if k]
            if all(any(N % n == 0 for N in used) for n in orders):
                counts = tuple((N, k) for N, k in zip(levels, chosen) if k)
                sols.append(BadStructureSolution(counts, dbad))
            return
        for k in range(remaining // weights[i] + 1):
            rec(i + 1, remaining - k * weights[i], chosen + [k])

    if dbad > 0:
        rec(0, dbad, [])
    sols.sort(key=lambda s: s.counts)
    status = "infeasible" if not sols else "unique" if len(sols) == 1 else "ambiguous"
    return sols, status


@dataclasses.dataclass(frozen=True)
class ReductionReport:
    component: int
    p: int
    bad: bool
    bad_cusp_orders: dict[str, tuple[int, ...]]
    d_bad: dict[str, int]
    good_ordinary: int
    good_supersingular: int
    candidate_levels: tuple[int, ...]
    multiplicities: dict[int, int]
    x2_degrees: dict[int, int]
    solutions: tuple[BadStructureSolution, ...]
    status: str
    moduli_bound: int | None

    @property
    def verdict(self) -> str:
        return "bad" if self.bad else "good"

    def bad_components_text(self) -> str:
        if not self.bad:
            return "-"
        if not self.solutions:
            return "infeasible"
        return " or ".join(s.describe() for s in self.solutions)


def reduce_component(report: ComponentReport, conds: ReductionConditions) -> ReductionReport:
    p = conds.p
    orders = {w: tuple(sorted({c.n for c in report.cusps[w] if c.n % p == 0})) for w in CUSPS}
    dbads = {w: d_bad(report, p, w) for w in CUSPS}
    if len(set(dbads.values())) != 1:
        raise InconsistencyError(f"d_bad differs across cusps for component {report.component}, "
                                 f"p={p}: {dbads}")
    db = dbads["inf"]
    ordinary, supersingular = good_counts(report.degree, db, p)
    levels = tuple(candidate_levels(conds)) if conds.dihedral_normalizer else ()
    mults = {N: multiplicity(N, p) for N in levels}
    x2s = {N: x2_degree(N // p) for N in levels}
    if db:
        all_orders = sorted({n for w in CUSPS for n in orders[w]})
        sols, status = solve_bad_structure(db, p, levels, all_orders)
        used = {N for s in sols for N in s.levels()} or set(levels)
        bound = min((moduli_ramification_bound(N, p) for N in used), default=None)
    else:
        sols, status, bound = [], "unique", None
    return ReductionReport(report.component, p, db > 0, orders, dbads, ordinary, supersingular,
                           levels, mults, x2s, tuple(sols), status, bound)
