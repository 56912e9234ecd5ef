import pytest

from hurwitzred.supersingular import (deuring_polynomial, is_supersingular, legendre_point_count,
                                      moduli_ramification_bound, supersingular_lambdas,
                                      three_point_reduction)

import oracles

ODD_PRIMES = [p for p in oracles.primes_up_to(50) if p > 2]


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_deuring_matches_point_counts(p):
    for lam in range(2, p):
        assert is_supersingular(lam, p) == (oracles.legendre_trace(lam, p) % p == 0)


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_root_count(p):
    data = supersingular_lambdas(p)
    assert data.count == (p - 1) // 2
    assert len(deuring_polynomial(p)) == (p - 1) // 2 + 1


def test_small_primes():
    assert supersingular_lambdas(3).supersingular_lambdas == ((2, 0),)
    data = supersingular_lambdas(5)
    nu = data.nonresidue
    for a, b in data.supersingular_lambdas:
        # (a + b s)^2 - (a + b s) + 1 with s^2 = nu
        re = (a * a + b * b * nu - a + 1) % 5
        im = (2 * a * b - b) % 5
        assert (re, im) == (0, 0)


def test_rejects_degenerate_input():
    with pytest.raises(ValueError):
        is_supersingular(1, 7)
    with pytest.raises(ValueError):
        deuring_polynomial(9)
    assert legendre_point_count(2, 3) == 4
    assert is_supersingular(2, 3, check=True)


def test_bounds():
    assert moduli_ramification_bound(5, 5) == 2
    assert moduli_ramification_bound(10, 5) == 4
    assert moduli_ramification_bound(10, 5, supersingular=True) == 5
    assert three_point_reduction(2, 3, 7, 5)
    assert not three_point_reduction(2, 5, 7, 5)
