"""Parity between the compiled kernels and the pure-Python fallback."""

import random

import pytest

from katoforms import _fallback

try:
    from katoforms import _speedups
except ImportError:
    _speedups = None

pytestmark = pytest.mark.skipif(
    _speedups is None, reason="compiled kernels not available"
)


def _random_poly(rng, nvars, p):
    return {
        tuple(rng.randint(0, 3) for _ in range(nvars)): rng.randint(1, p - 1)
        for _ in range(rng.randint(0, 6))
    }


def test_poly_ops_agree():
    rng = random.Random(1)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        nvars = rng.randint(1, 3)
        a = _random_poly(rng, nvars, p)
        b = _random_poly(rng, nvars, p)
        assert _fallback.poly_add(a, b, p) == _speedups.poly_add(a, b, p)
        assert _fallback.poly_mul(a, b, p) == _speedups.poly_mul(a, b, p)


def test_gauss_agree_and_solves():
    rng = random.Random(2)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        n = rng.randint(0, 6)
        m = rng.randint(1, 6)
        rows = [[rng.randrange(-p, 2 * p) for _ in range(m)] for _ in range(n)]
        rhs = [rng.randrange(-p, 2 * p) for _ in range(n)]
        s1 = _fallback.gauss_solve(rows, rhs, p)
        s2 = _speedups.gauss_solve([r[:] for r in rows], rhs[:], p)
        assert s1 == s2
        if s1 is not None and n:
            for row, t in zip(rows, rhs):
                assert sum(c * x for c, x in zip(row, s1)) % p == t % p


def test_inputs_not_modified():
    rows = [[1, 2], [0, 1]]
    rhs = [1, 2]
    _speedups.gauss_solve(rows, rhs, 3)
    assert rows == [[1, 2], [0, 1]] and rhs == [1, 2]
    _fallback.gauss_solve(rows, rhs, 3)
    assert rows == [[1, 2], [0, 1]] and rhs == [1, 2]
