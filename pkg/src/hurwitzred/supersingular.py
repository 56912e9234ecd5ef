"""
Supersingular Legendre parameters and related numerology.
"""

from __future__ import annotations

import dataclasses
from math import comb

from .groups import _is_prime, least_nonresidue


def _check_odd_prime(p: int) -> None:
    if p % 2 == 0 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def deuring_polynomial(p: int) -> list[int]:
    """Coefficients (constant term first) of ``sum_i C(m, i)^2 x^i`` mod p,
    ``m = (p-1)/2``; its roots are the supersingular Legendre parameters."""
    _check_odd_prime(p)
    m = (p - 1) // 2
    return [comb(m, i) ** 2 % p for i in range(m + 1)]


def _eval_fp(coeffs: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def legendre_point_count(lam: int, p: int) -> int:
    """Number of F_p-points (with infinity) on ``y^2 = x(x-1)(x-lam)``."""
    total = 1
    for x in range(p):
        f = x * (x - 1) * (x - lam) % p
        if f == 0:
            total += 1
        elif pow(f, (p - 1) // 2, p) == 1:
            total += 2
    return total


def is_supersingular(lam: int, p: int, check: bool = False) -> bool:
    """Whether the Legendre curve with parameter ``lam`` in F_p is supersingular."""
    _check_odd_prime(p)
    lam %= p
    if lam in (0, 1):
        raise ValueError("lambda = 0, 1 gives a singular curve")
    answer = _eval_fp(deuring_polynomial(p), lam, p) == 0
    if check:
        trace = p + 1 - legendre_point_count(lam, p)
        if (trace % p == 0) != answer:
            raise AssertionError(f"Deuring test disagrees with point count at lambda={lam}, p={p}")
    return answer


@dataclasses.dataclass(frozen=True)
class SupersingularData:
    """Roots of the Deuring polynomial in ``F_p[s]/(s^2 - nonresidue)``;
    the pair ``(a, b)`` stands for ``a + b s``."""

    p: int
    nonresidue: int
    deuring_coefficients: tuple[int, ...]
    supersingular_lambdas: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.supersingular_lambdas)


def _fp2_mul(x, y, p, nu):
    a, b = x
    c, d = y
    return ((a * c + b * d * nu) % p, (a * d + b * c) % p)


def _eval_fp2(coeffs, z, p, nu):
    acc = (0, 0)
    for c in reversed(coeffs):
        acc = _fp2_mul(acc, z, p, nu)
        acc = ((acc[0] + c) % p, acc[1])
    return acc


def supersingular_lambdas(p: int) -> SupersingularData:
    """All supersingular Legendre parameters, by exhaustive search of F_{p^2}."""
    _check_odd_prime(p)
    nu = least_nonresidue(p)
    coeffs = deuring_polynomial(p)
    roots = tuple((a, b) for a in range(p) for b in range(p)
                  if _eval_fp2(coeffs, (a, b), p, nu) == (0, 0))
    if len(roots) != (p - 1) // 2:
        raise ArithmeticError(f"found {len(roots)} supersingular values for p={p}, "
                              f"expected {(p - 1) // 2}")
    return SupersingularData(p, nu, tuple(coeffs), roots)


def moduli_ramification_bound(level: int, p: int, supersingular: bool = False) -> int:
    """Lower bound for the ramification index of p in the field of moduli
    of a cover with bad reduction of the given level."""
    if level % p:
        raise ValueError("p must divide the level")
    bound = (p - 1) // 2 if level == p else p - 1
    return bound + 1 if supersingular else bound


def three_point_reduction(m1: int, m2: int, m3: int, p: int) -> bool:
    """Good reduction of a three-point cover: no ramification index divisible by p."""
    return all(m % p for m in (m1, m2, m3))
