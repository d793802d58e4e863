"""Independent oracles used by the test suite.

Everything here is deliberately implemented from first principles with exact
rational / high-precision arithmetic and no reliance on the library's own
series code or closed forms.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import numpy as np

mp.mp.dps = 50


# ---------------------------------------------------------------------------
# exact rational view of p-adic scalars

def scalar_to_rational(s) -> Fraction:
    """The exact rational a digit-window scalar denotes."""
    if s.is_zero:
        return Fraction(0)
    total = Fraction(0)
    for i, d in enumerate(s.digits):
        total += d * Fraction(s.prime) ** (s.valuation + i)
    return total


def rational_norm_level(q: Fraction, p: int) -> int | None:
    """k with |q|_p = p^k, or None for zero (independent valuation count)."""
    if q == 0:
        return None
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return -v


# ---------------------------------------------------------------------------
# brute-force character integral over complete digit grids

def _reduce_root_of_unity_poly(counts: list[int], p: int, s: int) -> Fraction:
    """Exact value of sum_e counts[e] * zeta^e for zeta a primitive p^s-th root.

    The polynomial is reduced modulo the p^s-th cyclotomic polynomial
    1 + x^{p^{s-1}} + ... + x^{(p-1) p^{s-1}}; a rational value must reduce to
    a constant polynomial.
    """
    block = p ** (s - 1)
    deg_phi = (p - 1) * block
    coeffs = list(counts)
    for e in range(len(coeffs) - 1, deg_phi - 1, -1):
        c = coeffs[e]
        if c:
            coeffs[e] = 0
            base = e - deg_phi
            for i in range(p - 1):
                coeffs[base + i * block] -= c
    assert all(c == 0 for c in coeffs[1:deg_phi]), "value is not rational"
    return Fraction(coeffs[0])


def char_integral_bruteforce(p: int, m: int, n: int, d: int) -> Fraction:
    """Double Riemann sum of chi(x . y) over B_d(m) x B_d(n).

    Each ball is partitioned into cosets fine enough that the character is
    constant on every coset pair, so the sum is exact.  The character values
    are p^{m+n}-th roots of unity handled with exact integer coefficients.
    """
    s = m + n
    if s <= 0:
        # x . y always lands in Z_p, where the character equals 1
        return Fraction(p) ** (s * d)
    M = p ** s  # coset representatives per coordinate, and the root order
    reps = np.arange(M, dtype=np.int64)
    # all d-tuples of representatives, one row per grid point
    grids = np.meshgrid(*([reps] * d), indexing="ij")
    tuples = np.stack([g.ravel() for g in grids], axis=1)  # (M^d, d)
    counts = np.zeros(M, dtype=np.int64)
    chunk = max(1, (1 << 22) // len(tuples))
    for start in range(0, len(tuples), chunk):
        block = tuples[start:start + chunk]  # (c, d)
        # exponent of the character at each (x, y) pair
        e = np.tensordot(block, tuples, axes=([1], [1])) % M
        counts += np.bincount(e.ravel(), minlength=M)
    total = _reduce_root_of_unity_poly(counts.tolist(), p, s)
    return total / Fraction(M) ** (2 * d)


# ---------------------------------------------------------------------------
# high-precision series oracles (plain summation, generous fixed depth)

def exp_diff_mp(p, b, sigma, t, j):
    t = mp.mpf(t)
    return (mp.e ** (-sigma * t * mp.mpf(p) ** (j * b))
            - mp.e ** (-sigma * t * mp.mpf(p) ** ((j + 1) * b)))


def tail_sum_mp(p, dd, b, sigma, t, R, depth=600) -> mp.mpf:
    return mp.fsum(exp_diff_mp(p, b, sigma, t, j) * mp.mpf(p) ** (dd * j)
                   for j in range(-R, -R - depth, -1))


def ball_probability_mp(p, d, b, sigma, t, R) -> mp.mpf:
    head = mp.e ** (-sigma * mp.mpf(t) * mp.mpf(p) ** ((-R + 1) * b))
    return head + mp.mpf(p) ** (d * R) * tail_sum_mp(p, d, b, sigma, t, R)


def density_origin_mp(p, d, b, sigma, t) -> mp.mpf:
    return mp.fsum(exp_diff_mp(p, b, sigma, t, r) * mp.mpf(p) ** (d * r)
                   for r in range(-400, 120))


def central_difference(f, t0: float, h: float) -> float:
    return (f(t0 + h) - f(t0 - h)) / (2.0 * h)
